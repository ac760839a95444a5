//! Two-sided probe of the system-bound / Schatten-bound equivalence.
//!
//! T maps n coefficients to samples on a weighted (time x space) grid. The
//! probe estimates two best constants:
//!
//!   C_sys  = sup ||sum_j nu_j |T f_j|^2||_{L^P_t L^Q_x} / ||nu||_{l^beta}
//!   C_dual = sup ||W T T* conj(W)||_{S^{beta'}},  ||W||_{L^{2P'} L^{2Q'}} = 1
//!
//! with P = p/2, Q = q/2, over sampled orthonormal systems and sampled
//! multipliers W. Sampling alone gives two lower bounds with no order
//! relation; to pin the forward inequality C_sys <= C_dual exactly, each
//! sampled system contributes its own norming multiplier to the W pool: with
//! V the unit-norm duality witness of rho (integral of rho V = ||rho||) and
//! W* = |V|^{1/2}, Hoelder in j, the diagonal-pinching inequality, and
//! Schatten-Hoelder give ||rho||/||nu|| <= ||W* T T* W*||_{S^{beta'}}. Both
//! suprema are otherwise reported as sampled lower bounds.
//!
//! The multiplication operator W acts diagonally, so W T T* conj(W) =
//! (WT)(WT)* and its Schatten-beta' norm is computable from the singular
//! values of the single matrix diag(sqrt(mu) w) T.

use crate::norms::{schatten_norm, Exponent, FiniteOperator};
use crate::{Complex64, CoreError, Result};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Quadrature weights of the discrete space-time sample grid; sample s =
/// i * space_count + m carries measure time_weights[i] * space_weights[m].
#[derive(Debug, Clone)]
pub struct ProbeGrid {
    pub time_weights: Vec<f64>,
    pub space_weights: Vec<f64>,
}

impl ProbeGrid {
    /// Product probability measure: interval of unit mass split over n_time
    /// slices, unit-volume torus split over n_space cells.
    pub fn uniform(n_time: usize, n_space: usize) -> Result<Self> {
        if n_time == 0 || n_space == 0 {
            return Err(CoreError::Empty("probe grid has no samples".into()));
        }
        Ok(Self {
            time_weights: vec![1.0 / n_time as f64; n_time],
            space_weights: vec![1.0 / n_space as f64; n_space],
        })
    }

    pub fn len(&self) -> usize {
        self.time_weights.len() * self.space_weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn measure(&self, s: usize) -> f64 {
        let m = self.space_weights.len();
        self.time_weights[s / m] * self.space_weights[s % m]
    }

    /// Mixed norm of sample magnitudes.
    fn norm(&self, mag: &[f64], outer: Exponent, inner: Exponent) -> f64 {
        let m = self.space_weights.len();
        let slice_norm = |i: usize| -> f64 {
            let vals = &mag[i * m..(i + 1) * m];
            match inner {
                Exponent::Infinity => vals.iter().cloned().fold(0.0, f64::max),
                Exponent::Finite(q) => vals
                    .iter()
                    .zip(&self.space_weights)
                    .map(|(&v, &w)| w * v.powf(q))
                    .sum::<f64>()
                    .powf(1.0 / q),
            }
        };
        match outer {
            Exponent::Infinity => (0..self.time_weights.len())
                .map(slice_norm)
                .fold(0.0, f64::max),
            Exponent::Finite(p) => (0..self.time_weights.len())
                .map(|i| self.time_weights[i] * slice_norm(i).powf(p))
                .sum::<f64>()
                .powf(1.0 / p),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DualityReport {
    /// Sampled system constant (lower bound of the true supremum).
    pub c_sys: f64,
    /// Sampled duality constant, witness-augmented (lower bound likewise).
    pub c_dual: f64,
    /// c_sys <= c_dual (1 + 1e-6).
    pub bound_satisfied: bool,
    /// c_dual / c_sys; 1 when both vanish. Reported, never asserted.
    pub reverse_gap: f64,
    /// Number of sampled orthonormal systems (canonical + random).
    pub instances: usize,
}

/// Norming functional of rho in the discrete L^P_t L^Q_x: sign(rho) |rho|^{Q-1}
/// n_i^{P-Q} / ||rho||^{P-1} with n_i the slice norms. Returns None when rho
/// vanishes.
fn witness(grid: &ProbeGrid, rho: &[f64], p_out: f64, q_in: f64) -> Option<Vec<f64>> {
    let m = grid.space_weights.len();
    let slice_norms: Vec<f64> = (0..grid.time_weights.len())
        .map(|i| {
            rho[i * m..(i + 1) * m]
                .iter()
                .zip(&grid.space_weights)
                .map(|(&v, &w)| w * v.abs().powf(q_in))
                .sum::<f64>()
                .powf(1.0 / q_in)
        })
        .collect();
    let total = slice_norms
        .iter()
        .zip(&grid.time_weights)
        .map(|(&n, &w)| w * n.powf(p_out))
        .sum::<f64>()
        .powf(1.0 / p_out);
    if !(total > 0.0) {
        return None;
    }
    let mut v = vec![0.0; rho.len()];
    for (i, &slice_norm) in slice_norms.iter().enumerate() {
        if slice_norm == 0.0 {
            continue;
        }
        let scale = slice_norm.powf(p_out - q_in) / total.powf(p_out - 1.0);
        for s in i * m..(i + 1) * m {
            if rho[s] != 0.0 {
                let sign = if rho[s] > 0.0 { 1.0 } else { -1.0 };
                v[s] = sign * rho[s].abs().powf(q_in - 1.0) * scale;
            }
        }
    }
    Some(v)
}

/// ||W T T* conj(W)||_{S^{beta'}} for the diagonal multiplier w.
fn dual_functional(
    op: &FiniteOperator,
    grid: &ProbeGrid,
    w: &[Complex64],
    two_beta_conj: Exponent,
) -> f64 {
    let rows = op.matrix.nrows();
    let scaled = DMatrix::from_fn(rows, op.matrix.ncols(), |r, c| {
        op.matrix[(r, c)] * w[r] * grid.measure(r).sqrt()
    });
    let value = schatten_norm(&FiniteOperator::new(scaled), two_beta_conj);
    value * value
}

fn l_beta(v: &[f64], beta: f64) -> f64 {
    if beta.is_infinite() {
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    } else {
        v.iter().map(|x| x.abs().powf(beta)).sum::<f64>().powf(1.0 / beta)
    }
}

/// Gaussian test operator from the grid's sample space to n coefficients.
pub fn random_operator(rows: usize, cols: usize, seed: u64) -> FiniteOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FiniteOperator::new(DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }))
}

/// Runs the probe on one operator: n canonical single-state systems, then
/// `samples` random (unitary system, signed weight) pairs, each contributing
/// its norming multiplier; plus `samples` random multipliers.
pub fn duality_probe(
    op: &FiniteOperator,
    grid: &ProbeGrid,
    p: f64,
    q: f64,
    beta: f64,
    samples: usize,
    seed: u64,
) -> Result<DualityReport> {
    let rows = op.matrix.nrows();
    let n = op.matrix.ncols();
    if rows != grid.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "operator has {rows} rows but the grid has {} samples",
            grid.len()
        )));
    }
    if n == 0 || n > 64 {
        return Err(CoreError::BadParameter(format!(
            "probe supports 1..=64 input vectors, got {n}"
        )));
    }
    if !(p >= 2.0) || !(q >= 2.0) || !p.is_finite() || !q.is_finite() {
        return Err(CoreError::BadParameter(format!(
            "probe needs finite p, q >= 2, got ({p}, {q})"
        )));
    }
    if !(beta >= 1.0) {
        return Err(CoreError::BadParameter(format!(
            "beta must lie in [1, inf], got {beta}"
        )));
    }
    let p_out = p / 2.0;
    let q_in = q / 2.0;
    let outer = Exponent::finite(p_out)?;
    let inner = Exponent::finite(q_in)?;
    let w_outer = match outer.conjugate() {
        Exponent::Infinity => Exponent::Infinity,
        Exponent::Finite(v) => Exponent::Finite(2.0 * v),
    };
    let w_inner = match inner.conjugate() {
        Exponent::Infinity => Exponent::Infinity,
        Exponent::Finite(v) => Exponent::Finite(2.0 * v),
    };
    let two_beta_conj = match Exponent::from_f64(beta)?.conjugate() {
        Exponent::Infinity => Exponent::Infinity,
        Exponent::Finite(v) => Exponent::Finite(2.0 * v),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c_sys = 0.0f64;
    let mut c_dual = 0.0f64;
    let mut instances = 0usize;

    let consume_system = |columns: &DMatrix<Complex64>,
                              nu: &[f64],
                              c_sys: &mut f64,
                              c_dual: &mut f64| {
        let image = &op.matrix * columns;
        let mut rho = vec![0.0f64; rows];
        for (s, slot) in rho.iter_mut().enumerate() {
            for (j, &w) in nu.iter().enumerate() {
                *slot += w * image[(s, j)].norm_sqr();
            }
        }
        let weight_norm = l_beta(nu, beta);
        if weight_norm > 0.0 {
            let mag: Vec<f64> = rho.iter().map(|v| v.abs()).collect();
            *c_sys = c_sys.max(grid.norm(&mag, outer, inner) / weight_norm);
        }
        if let Some(v) = witness(grid, &rho, p_out, q_in) {
            let w: Vec<Complex64> = v
                .iter()
                .map(|&x| Complex64::new(x.abs().sqrt(), 0.0))
                .collect();
            *c_dual = c_dual.max(dual_functional(op, grid, &w, two_beta_conj));
        }
    };

    // Canonical single-state systems: f = e_j, nu = 1.
    let identity = DMatrix::<Complex64>::identity(n, n);
    for j in 0..n {
        let mut nu = vec![0.0; n];
        nu[j] = 1.0;
        consume_system(&identity, &nu, &mut c_sys, &mut c_dual);
        instances += 1;
    }
    for _ in 0..samples {
        let gaussian = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let unitary = gaussian.qr().q();
        let nu: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        consume_system(&unitary, &nu, &mut c_sys, &mut c_dual);
        instances += 1;
    }
    for _ in 0..samples {
        let raw: Vec<Complex64> = (0..rows)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let mag: Vec<f64> = raw.iter().map(|z| z.norm()).collect();
        let scale = grid.norm(&mag, w_outer, w_inner);
        if scale > 0.0 {
            let w: Vec<Complex64> = raw.iter().map(|z| z / scale).collect();
            c_dual = c_dual.max(dual_functional(op, grid, &w, two_beta_conj));
        }
    }

    let reverse_gap = if c_sys > 0.0 { c_dual / c_sys } else { 1.0 };
    Ok(DualityReport {
        c_sys,
        c_dual,
        bound_satisfied: c_sys <= c_dual * (1.0 + 1e-6),
        reverse_gap,
        instances,
    })
}
