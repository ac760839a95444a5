//! Fourier-side states on the flat torus and the operations that act on them
//! coefficientwise: smooth frequency projection, Littlewood-Paley pieces, and
//! dispersive time evolution.
//!
//! A state is the sparse coefficient map of f(x) = sum_k a_k e^{2 pi i k.x}.
//! Coefficients live in a BTreeMap keyed by the integer frequency vector, so
//! iteration is always in lexicographic order.

use std::collections::BTreeMap;

use crate::lattice::{FrequencySet, LatticePoint};
use crate::{Complex64, CoreError, Result};

/// e^{2 pi i theta} with the angle reduced to the nearest integer number of
/// turns first. Keeps phases exact when theta is an exact integer (torus
/// Schroedinger periodicity) and accurate for large theta.
pub fn unit_phase(theta_turns: f64) -> Complex64 {
    let reduced = theta_turns - theta_turns.round();
    let angle = 2.0 * std::f64::consts::PI * reduced;
    Complex64::new(angle.cos(), angle.sin())
}

/// Smooth radial cutoff: 1 on [0, inner], 0 on [outer, inf), and a C-infinity
/// transition built from g(r) = e^{-1/r} in between. With the default profile
/// (inner 1, outer 2) the transition midpoint is psi(3/2) = 1/2.
#[derive(Debug, Clone, Copy)]
pub struct BumpProfile {
    pub inner: f64,
    pub outer: f64,
}

impl Default for BumpProfile {
    fn default() -> Self {
        Self {
            inner: 1.0,
            outer: 2.0,
        }
    }
}

fn g(r: f64) -> f64 {
    if r > 0.0 {
        (-1.0 / r).exp()
    } else {
        0.0
    }
}

impl BumpProfile {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0) || !(outer > inner) {
            return Err(CoreError::BadParameter(format!(
                "bump profile needs 0 < inner < outer, got ({inner}, {outer})"
            )));
        }
        Ok(Self { inner, outer })
    }

    /// psi(s), even in s.
    pub fn eval(&self, s: f64) -> f64 {
        let s = s.abs();
        if s <= self.inner {
            1.0
        } else if s >= self.outer {
            0.0
        } else {
            let w = self.outer - self.inner;
            let up = g((self.outer - s) / w);
            let down = g((s - self.inner) / w);
            up / (up + down)
        }
    }

    /// Littlewood-Paley weight phi_ell(s): psi(s) for ell = 0, otherwise
    /// psi(s / 2^ell) - psi(s / 2^{ell-1}). The family telescopes exactly:
    /// sum_{ell <= L} phi_ell(s) = psi(s / 2^L).
    pub fn lp_weight(&self, ell: u32, s: f64) -> f64 {
        if ell == 0 {
            self.eval(s)
        } else {
            self.eval(s / f64::powi(2.0, ell as i32)) - self.eval(s / f64::powi(2.0, ell as i32 - 1))
        }
    }
}

/// Dispersion relation lambda -> phase speed, acting on the frequency modulus
/// lambda = |k|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PropagatorSpec {
    /// lambda^alpha (alpha = 2 is the torus Schroedinger flow).
    FractionalSchrodinger { alpha: f64 },
    /// sqrt(mass^2 + lambda^2); mass 0 is the half-wave flow.
    KleinGordon { mass: f64 },
}

impl PropagatorSpec {
    pub fn fractional(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha.is_finite() {
            Ok(Self::FractionalSchrodinger { alpha })
        } else {
            Err(CoreError::BadParameter(format!(
                "fractional order must be positive and finite, got {alpha}"
            )))
        }
    }

    pub fn klein_gordon(mass: f64) -> Result<Self> {
        if mass >= 0.0 && mass.is_finite() {
            Ok(Self::KleinGordon { mass })
        } else {
            Err(CoreError::BadParameter(format!(
                "mass must be nonnegative, got {mass}"
            )))
        }
    }

    pub fn wave() -> Self {
        Self::KleinGordon { mass: 0.0 }
    }

    /// Dispersion evaluated on a squared frequency norm. Taking |k|^2 directly
    /// avoids a sqrt/square round trip: alpha = 2 returns the integer |k|^2
    /// exactly, and the half-wave phase of a perfect square is exact.
    pub fn dispersion_of_norm_sq(&self, norm_sq: f64) -> f64 {
        match *self {
            Self::FractionalSchrodinger { alpha } => {
                if alpha == 2.0 {
                    norm_sq
                } else {
                    norm_sq.powf(alpha / 2.0)
                }
            }
            Self::KleinGordon { mass } => (mass * mass + norm_sq).sqrt(),
        }
    }

    /// Dispersion on the frequency modulus lambda = |k|.
    pub fn dispersion(&self, lambda: f64) -> f64 {
        self.dispersion_of_norm_sq(lambda * lambda)
    }
}

/// Sparse Fourier coefficients of a trigonometric polynomial on T^d.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierState {
    dim: usize,
    coeffs: BTreeMap<LatticePoint, Complex64>,
}

impl FourierState {
    pub fn new(dim: usize) -> Result<Self> {
        if (1..=3).contains(&dim) {
            Ok(Self {
                dim,
                coeffs: BTreeMap::new(),
            })
        } else {
            Err(CoreError::BadDimension(dim))
        }
    }

    /// Constant amplitude on every frequency of the set.
    pub fn from_set(set: &FrequencySet, amplitude: Complex64) -> Self {
        let mut coeffs = BTreeMap::new();
        for p in set.points() {
            coeffs.insert(p.clone(), amplitude);
        }
        Self {
            dim: set.dim(),
            coeffs,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Inserts or overwrites a coefficient; exact zeros are dropped.
    pub fn set(&mut self, k: LatticePoint, a: Complex64) -> Result<()> {
        if k.len() != self.dim {
            return Err(CoreError::DimensionMismatch(format!(
                "frequency has {} coordinates, state dimension is {}",
                k.len(),
                self.dim
            )));
        }
        if a == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, a);
        }
        Ok(())
    }

    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Lexicographic iteration over (frequency, coefficient).
    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// sum |a_k|^2 = ||f||_{L^2(T^d)}^2 (Plancherel).
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.values().map(|a| a.norm_sqr()).sum()
    }

    /// f(0) = sum_k a_k.
    pub fn value_at_origin(&self) -> Complex64 {
        self.coeffs.values().sum()
    }

    /// Largest |k_i| over the support; 0 for the empty state.
    pub fn max_abs_coord(&self) -> i64 {
        self.coeffs
            .keys()
            .flat_map(|k| k.iter().map(|c| c.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Largest |k|^2 over the support.
    pub fn max_norm_sq(&self) -> u64 {
        self.coeffs
            .keys()
            .map(|k| k.iter().map(|c| c * c).sum::<i64>() as u64)
            .max()
            .unwrap_or(0)
    }

    fn map_coeffs(&self, mut f: impl FnMut(&LatticePoint, Complex64) -> Complex64) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, &a) in &self.coeffs {
            let b = f(k, a);
            if b != Complex64::new(0.0, 0.0) {
                coeffs.insert(k.clone(), b);
            }
        }
        Self {
            dim: self.dim,
            coeffs,
        }
    }
}

fn norm_sq_of(k: &[i64]) -> f64 {
    k.iter().map(|c| (c * c) as f64).sum()
}

/// Smooth frequency projection: scales a_k by psi(|k| / cutoff). The output
/// support sits inside |k| <= outer * cutoff.
pub fn project_frequency(state: &FourierState, cutoff: f64, bump: &BumpProfile) -> Result<FourierState> {
    if !(cutoff > 0.0) {
        return Err(CoreError::BadParameter(format!(
            "projection cutoff must be positive, got {cutoff}"
        )));
    }
    Ok(state.map_coeffs(|k, a| a * bump.eval(norm_sq_of(k).sqrt() / cutoff)))
}

/// The ell-th Littlewood-Paley piece of the state. Pieces with ell >= 1 are
/// supported on 2^{ell-1} < |k| < 2^{ell+1}; summing pieces 0..=L reproduces
/// the projection at cutoff 2^L exactly.
pub fn littlewood_paley_piece(
    state: &FourierState,
    ell: u32,
    bump: &BumpProfile,
) -> FourierState {
    state.map_coeffs(|k, a| a * bump.lp_weight(ell, norm_sq_of(k).sqrt()))
}

/// Free evolution: multiplies a_k by e^{2 pi i t disp(|k|)}.
pub fn evolve(state: &FourierState, t: f64, propagator: &PropagatorSpec) -> FourierState {
    state.map_coeffs(|k, a| a * unit_phase(t * propagator.dispersion_of_norm_sq(norm_sq_of(k))))
}

/// A finite system of states f_j with scalar weights nu_j. The weights may be
/// signed; orthonormality of the states is a property checked by
/// [`crate::norms::is_orthonormal`], not enforced here.
#[derive(Debug, Clone)]
pub struct OrthonormalSystem {
    pub states: Vec<FourierState>,
    pub weights: Vec<f64>,
}

impl OrthonormalSystem {
    pub fn new(states: Vec<FourierState>, weights: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(CoreError::Empty("system has no states".into()));
        }
        if states.len() != weights.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "{} states but {} weights",
                states.len(),
                weights.len()
            )));
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(CoreError::DimensionMismatch(
                "states live on tori of different dimension".into(),
            ));
        }
        Ok(Self { states, weights })
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// l^beta norm of the weight vector; beta = infinity is the maximum.
    pub fn weight_norm(&self, beta: f64) -> f64 {
        if beta.is_infinite() {
            self.weights.iter().fold(0.0, |m, w| m.max(w.abs()))
        } else {
            self.weights
                .iter()
                .map(|w| w.abs().powf(beta))
                .sum::<f64>()
                .powf(1.0 / beta)
        }
    }
}

// --- fixture wire format ------------------------------------------------
//
// {"d": 2, "entries": [[[0, 1], 1.0, 0.0], ...]} with entries sorted by
// frequency (lexicographic), which the BTreeMap provides for free.

impl FourierState {
    pub fn to_fixture_value(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(k, a)| serde_json::json!([k, a.re, a.im]))
            .collect();
        serde_json::json!({ "d": self.dim, "entries": entries })
    }

    pub fn to_fixture_json(&self) -> String {
        self.to_fixture_value().to_string()
    }

    pub fn from_fixture_value(value: &serde_json::Value) -> Result<Self> {
        let err = |msg: &str| CoreError::Fixture(msg.to_string());
        let obj = value.as_object().ok_or_else(|| err("expected object"))?;
        let dim = obj
            .get("d")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| err("missing integer field d"))? as usize;
        let mut state = FourierState::new(dim).map_err(|e| CoreError::Fixture(e.to_string()))?;
        let entries = obj
            .get("entries")
            .and_then(|v| v.as_array())
            .ok_or_else(|| err("missing array field entries"))?;
        for e in entries {
            let triple = e.as_array().filter(|a| a.len() == 3).ok_or_else(|| {
                err("each entry must be [[k...], re, im]")
            })?;
            let k: Vec<i64> = triple[0]
                .as_array()
                .ok_or_else(|| err("entry frequency must be an array"))?
                .iter()
                .map(|c| c.as_i64().ok_or_else(|| err("frequency coordinates must be integers")))
                .collect::<Result<_>>()?;
            let re = triple[1]
                .as_f64()
                .ok_or_else(|| err("entry real part must be a number"))?;
            let im = triple[2]
                .as_f64()
                .ok_or_else(|| err("entry imaginary part must be a number"))?;
            if k.len() != dim {
                return Err(err("entry frequency length disagrees with d"));
            }
            state
                .set(k, Complex64::new(re, im))
                .map_err(|e| CoreError::Fixture(e.to_string()))?;
        }
        Ok(state)
    }

    pub fn from_fixture_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CoreError::Fixture(e.to_string()))?;
        Self::from_fixture_value(&value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate_ball;

    fn single_mode(dim: usize, k: Vec<i64>) -> FourierState {
        let mut s = FourierState::new(dim).unwrap();
        s.set(k, Complex64::new(1.0, 0.0)).unwrap();
        s
    }

    #[test]
    fn bump_profile_plateau_support_and_midpoint() {
        let psi = BumpProfile::default();
        assert_eq!(psi.eval(0.0), 1.0);
        assert_eq!(psi.eval(1.0), 1.0);
        assert_eq!(psi.eval(-0.7), 1.0);
        assert_eq!(psi.eval(2.0), 0.0);
        assert_eq!(psi.eval(5.0), 0.0);
        // Symmetric transition: psi(3/2) = g(1/2) / (2 g(1/2)).
        assert!((psi.eval(1.5) - 0.5).abs() < 1e-15);
        // Monotone nonincreasing across the transition.
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = psi.eval(1.0 + i as f64 / 100.0);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
        // The transition meets the plateaus flatly (C^infinity): values are
        // already within 1e-6 of the plateau 0.01 inside the transition.
        assert!(psi.eval(1.01) > 1.0 - 1e-6);
        assert!(psi.eval(1.99) < 1e-6);
    }

    #[test]
    fn projection_keeps_plateau_and_kills_tail() {
        let psi = BumpProfile::default();
        let mut f = FourierState::new(1).unwrap();
        f.set(vec![3], Complex64::new(2.0, 0.0)).unwrap();
        f.set(vec![7], Complex64::new(1.0, 0.0)).unwrap();
        let p = project_frequency(&f, 3.0, &psi).unwrap();
        // |k| = 3 sits on the plateau (s = 1), |k| = 7 is beyond 2 * cutoff.
        assert_eq!(p.coeff(&[3]), Complex64::new(2.0, 0.0));
        assert_eq!(p.support_len(), 1);
        assert!(p.max_abs_coord() as f64 <= 2.0 * 3.0);
    }

    #[test]
    fn littlewood_paley_of_single_modes() {
        let psi = BumpProfile::default();
        // k = 0 lives only in the ell = 0 piece.
        let f = single_mode(1, vec![0]);
        for ell in 0..8 {
            let piece = littlewood_paley_piece(&f, ell, &psi);
            if ell == 0 {
                assert_eq!(piece.coeff(&[0]), Complex64::new(1.0, 0.0));
            } else {
                assert!(piece.is_empty());
            }
        }
        // |k| = 2^5 sits exactly on the ell = 5 plateau; adjacent pieces
        // vanish there.
        let f = single_mode(1, vec![32]);
        for ell in 0..10 {
            let piece = littlewood_paley_piece(&f, ell, &psi);
            if ell == 5 {
                assert!((piece.coeff(&[32]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            } else {
                assert!(piece.is_empty(), "unexpected mass in piece {ell}");
            }
        }
        // A frequency strictly between 2^5 and 2^6 splits across exactly the
        // two straddling pieces; at 48 the split is 1/2 + 1/2.
        let f = single_mode(1, vec![48]);
        let w5 = littlewood_paley_piece(&f, 5, &psi).coeff(&[48]).re;
        let w6 = littlewood_paley_piece(&f, 6, &psi).coeff(&[48]).re;
        assert!((w5 - 0.5).abs() < 1e-15);
        assert!((w6 - 0.5).abs() < 1e-15);
        for ell in [0u32, 1, 2, 3, 4, 7, 8] {
            assert!(littlewood_paley_piece(&f, ell, &psi).is_empty());
        }
    }

    #[test]
    fn littlewood_paley_pieces_telescope_to_projection() {
        let psi = BumpProfile::default();
        let set = enumerate_ball(2, 9).unwrap();
        let mut f = FourierState::from_set(&set, Complex64::new(0.3, -0.1));
        f.set(vec![5, 7], Complex64::new(-1.0, 2.0)).unwrap();
        let cutoff = 16.0; // 2^4
        let projected = project_frequency(&f, cutoff, &psi).unwrap();
        let mut sum = FourierState::new(2).unwrap();
        for ell in 0..=4u32 {
            let piece = littlewood_paley_piece(&f, ell, &psi);
            for (k, a) in piece.iter() {
                let cur = sum.coeff(k);
                sum.set(k.clone(), cur + a).unwrap();
            }
        }
        for (k, a) in f.iter() {
            let lhs = sum.coeff(k);
            let rhs = projected.coeff(k);
            assert!(
                (lhs - rhs).norm() <= 1e-15 * a.norm().max(1.0),
                "telescoping failed at {k:?}"
            );
        }
    }

    #[test]
    fn evolve_is_periodic_for_schroedinger_integers() {
        let prop = PropagatorSpec::fractional(2.0).unwrap();
        let f = single_mode(1, vec![3]);
        let g = evolve(&f, 1.0, &prop);
        // t * |k|^2 = 9 turns: the reduced phase is exactly zero.
        assert_eq!(g.coeff(&[3]), f.coeff(&[3]));

        let set = enumerate_ball(2, 5).unwrap();
        let f = FourierState::from_set(&set, Complex64::new(0.5, 0.5));
        let g = evolve(&f, 1.0, &prop);
        for (k, a) in f.iter() {
            assert_eq!(g.coeff(k), *a, "mode {k:?} moved under the time-1 flow");
        }
    }

    #[test]
    fn evolve_composes_and_preserves_mass() {
        let prop = PropagatorSpec::fractional(1.4).unwrap();
        let set = enumerate_ball(2, 4).unwrap();
        let f = FourierState::from_set(&set, Complex64::new(0.2, -0.7));
        let a = evolve(&evolve(&f, 0.37, &prop), 0.21, &prop);
        let b = evolve(&f, 0.58, &prop);
        for (k, _) in f.iter() {
            assert!((a.coeff(k) - b.coeff(k)).norm() < 1e-12);
        }
        assert!((a.l2_norm_sq() - f.l2_norm_sq()).abs() < 1e-12 * f.l2_norm_sq());
    }

    #[test]
    fn klein_gordon_dispersion_and_wave_limit() {
        let kg = PropagatorSpec::klein_gordon(2.0).unwrap();
        assert!((kg.dispersion(0.0) - 2.0).abs() < 1e-15);
        assert!((kg.dispersion_of_norm_sq(5.0) - 3.0).abs() < 1e-15);
        let wave = PropagatorSpec::wave();
        assert_eq!(wave.dispersion_of_norm_sq(9.0), 3.0);
        assert!(PropagatorSpec::fractional(0.0).is_err());
        assert!(PropagatorSpec::klein_gordon(-1.0).is_err());
    }

    #[test]
    fn fixture_roundtrip_and_rejection() {
        let mut f = FourierState::new(2).unwrap();
        f.set(vec![0, 1], Complex64::new(1.0, 0.0)).unwrap();
        f.set(vec![-1, 3], Complex64::new(0.25, -0.5)).unwrap();
        let text = f.to_fixture_json();
        let back = FourierState::from_fixture_json(&text).unwrap();
        assert_eq!(f, back);
        // Entries appear sorted by frequency.
        assert!(text.find("[-1,3]").unwrap() < text.find("[0,1]").unwrap());

        assert!(FourierState::from_fixture_json("{\"d\": 2}").is_err());
        assert!(FourierState::from_fixture_json(
            "{\"d\": 2, \"entries\": [[[1], 1.0, 0.0]]}"
        )
        .is_err());
        assert!(FourierState::from_fixture_json("not json").is_err());
    }

    #[test]
    fn unit_phase_reduction_is_accurate_for_large_angles() {
        for theta in [0.0, 1.0, -3.0, 123456.0, 123456.25] {
            let p = unit_phase(theta);
            let frac = theta - theta.round();
            let expect = Complex64::new(
                (2.0 * std::f64::consts::PI * frac).cos(),
                (2.0 * std::f64::consts::PI * frac).sin(),
            );
            assert!((p - expect).norm() < 1e-15);
            assert!((p.norm() - 1.0).abs() < 1e-15);
        }
        assert_eq!(unit_phase(9.0), Complex64::new(1.0, 0.0));
    }
}
