//! Mixed space-time Lebesgue norms, Gram matrices, and Schatten norms.
//!
//! Mixed norms run the rectangle rule on the field's own grid: the inner
//! spatial L^q per time slice, then the outer L^p over slices. On a full
//! torus grid with M >= 2 max|k_i| + 1 the q = 2 case is exact for
//! trigonometric polynomials (Plancherel); other exponents are quadrature
//! estimates. Infinite exponents take maxima over samples, which bound the
//! true supremum from below.

use nalgebra::DMatrix;

use crate::field::{FourierState, OrthonormalSystem};
use crate::grid::{DensityField, SpaceTimeField, SpaceTimeGrid};
use crate::{Complex64, CoreError, Result};

/// A Lebesgue exponent in [1, infinity].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p >= 1.0 && p.is_finite() {
            Ok(Self::Finite(p))
        } else {
            Err(CoreError::BadParameter(format!(
                "exponent must lie in [1, inf), got {p}"
            )))
        }
    }

    /// Accepts any value in [1, inf]; f64::INFINITY maps to `Infinity`.
    pub fn from_f64(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(Self::Infinity)
        } else {
            Self::finite(p)
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }

    /// Hoelder conjugate: 1/p + 1/p' = 1.
    pub fn conjugate(self) -> Self {
        match self {
            Self::Infinity => Self::Finite(1.0),
            Self::Finite(p) if p > 1.0 => Self::Finite(p / (p - 1.0)),
            Self::Finite(_) => Self::Infinity,
        }
    }

    /// p/2, valid when p >= 2 (used to move from a field norm to the norm of
    /// its square).
    pub fn half(self) -> Result<Self> {
        match self {
            Self::Infinity => Ok(Self::Infinity),
            Self::Finite(p) => Self::finite(p / 2.0),
        }
    }
}

/// Exponent pair for L^p_t L^q_x; the domain and resolution come from the
/// grid the field was sampled on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedNormSpec {
    pub p: Exponent,
    pub q: Exponent,
}

impl MixedNormSpec {
    pub fn new(p: Exponent, q: Exponent) -> Self {
        Self { p, q }
    }

    pub fn from_pair(p: f64, q: f64) -> Result<Self> {
        Ok(Self {
            p: Exponent::from_f64(p)?,
            q: Exponent::from_f64(q)?,
        })
    }

    /// Exponent pair for the square of a field: (p/2, q/2).
    pub fn halved(&self) -> Result<Self> {
        Ok(Self {
            p: self.p.half()?,
            q: self.q.half()?,
        })
    }
}

fn mixed_norm_impl(
    grid: &SpaceTimeGrid,
    magnitude: impl Fn(usize) -> f64,
    spec: &MixedNormSpec,
) -> f64 {
    let s = grid.spatial_count();
    let cell = grid.cell_volume();
    let wt = grid.time_weight();
    let mut outer_sum = 0.0f64;
    let mut outer_max = 0.0f64;
    for i in 0..grid.n_time {
        let base = i * s;
        let slice_norm = match spec.q {
            Exponent::Finite(q) => {
                let mut sum = 0.0;
                for p in 0..s {
                    sum += magnitude(base + p).powf(q);
                }
                (sum * cell).powf(1.0 / q)
            }
            Exponent::Infinity => {
                let mut m = 0.0f64;
                for p in 0..s {
                    m = m.max(magnitude(base + p));
                }
                m
            }
        };
        match spec.p {
            Exponent::Finite(p) => outer_sum += slice_norm.powf(p) * wt,
            Exponent::Infinity => outer_max = outer_max.max(slice_norm),
        }
    }
    match spec.p {
        Exponent::Finite(p) => outer_sum.powf(1.0 / p),
        Exponent::Infinity => outer_max,
    }
}

/// ||u||_{L^p_t L^q_x} of a complex field on its grid.
pub fn mixed_norm(field: &SpaceTimeField, spec: &MixedNormSpec) -> f64 {
    mixed_norm_impl(&field.grid, |i| field.values[i].norm(), spec)
}

/// Mixed norm of a real density (absolute values; densities with signed
/// weights may be signed).
pub fn mixed_norm_density(field: &DensityField, spec: &MixedNormSpec) -> f64 {
    mixed_norm_impl(&field.grid, |i| field.values[i].abs(), spec)
}

/// Gram matrix G_{ij} = <f_i, f_j> = sum_k a^i_k conj(a^j_k).
pub fn gram(system: &OrthonormalSystem) -> DMatrix<Complex64> {
    let n = system.states.len();
    DMatrix::from_fn(n, n, |i, j| inner(&system.states[i], &system.states[j]))
}

fn inner(f: &FourierState, g: &FourierState) -> Complex64 {
    // Iterate over the sparser support.
    let (small, big, conj_big) = if f.support_len() <= g.support_len() {
        (f, g, true)
    } else {
        (g, f, false)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &a) in small.iter() {
        let b = big.coeff(k);
        acc += if conj_big { a * b.conj() } else { b * a.conj() };
    }
    acc
}

/// True when the Gram matrix is within `tol` of the identity entrywise.
pub fn is_orthonormal(system: &OrthonormalSystem, tol: f64) -> bool {
    let g = gram(system);
    let n = g.nrows();
    for i in 0..n {
        for j in 0..n {
            let target = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            if (g[(i, j)] - target).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// A dense finite-rank operator between coefficient spaces.
#[derive(Debug, Clone)]
pub struct FiniteOperator {
    pub matrix: DMatrix<Complex64>,
}

impl FiniteOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Self {
        Self { matrix }
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.matrix
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect()
    }
}

/// Schatten norm ||A||_{S^beta} = (sum sigma_i^beta)^{1/beta}; beta infinite
/// gives the operator norm, beta = 2 the Frobenius norm.
pub fn schatten_norm(op: &FiniteOperator, beta: Exponent) -> f64 {
    let sv = op.singular_values();
    match beta {
        Exponent::Infinity => sv.into_iter().fold(0.0, f64::max),
        Exponent::Finite(b) => sv.into_iter().map(|s| s.powf(b)).sum::<f64>().powf(1.0 / b),
    }
}
