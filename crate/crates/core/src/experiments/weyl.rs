//! Full-spectrum density saturation.
//!
//! With every mode |k| <= N carrying weight 1, each |u_k(t, x)|^2 = 1, so the
//! density equals the lattice-ball count at every sample point. The mixed
//! norm of the density is then the count itself, and its fitted slope over N
//! recovers the spectral growth rate d.

use crate::field::{OrthonormalSystem, PropagatorSpec};
use crate::fitting::{fit_exponent, ExponentFit};
use crate::grid::{density, SpaceTimeGrid};
use crate::lattice::enumerate_ball;
use crate::norms::{mixed_norm_density, MixedNormSpec};
use crate::field::FourierState;
use crate::{Complex64, Result};

#[derive(Debug, Clone)]
pub struct WeylReport {
    /// (N, mixed norm of the density) per cutoff.
    pub pairs: Vec<(f64, f64)>,
    /// Lattice-ball count per cutoff.
    pub counts: Vec<u64>,
    /// Largest relative deviation of any density sample from its ball count.
    pub max_count_deviation: f64,
    pub fit: ExponentFit,
    /// The spectral dimension d.
    pub predicted_slope: f64,
}

/// Builds the system of all pure modes |k| <= N with unit weights, samples
/// its density on a coarse grid over [0, 1] x T^d, and fits the norm growth.
/// The density is constant in (t, x), so the grid resolution only affects
/// runtime, not the value.
pub fn weyl_saturation_experiment(
    dim: usize,
    propagator: &PropagatorSpec,
    p: f64,
    q: f64,
    cutoffs: &[u64],
) -> Result<WeylReport> {
    super::validate_cutoffs(cutoffs)?;
    let spec = MixedNormSpec::from_pair(p, q)?.halved()?;
    let grid = SpaceTimeGrid::full_torus(dim, 0.0, 1.0, 3, 8)?;
    let mut pairs = Vec::with_capacity(cutoffs.len());
    let mut counts = Vec::with_capacity(cutoffs.len());
    let mut max_dev = 0.0f64;
    for &n in cutoffs {
        let set = enumerate_ball(dim, n)?;
        let count = set.len() as u64;
        let states: Vec<FourierState> = set
            .points()
            .iter()
            .map(|k| {
                let mut f = FourierState::new(dim)?;
                f.set(k.clone(), Complex64::new(1.0, 0.0))?;
                Ok(f)
            })
            .collect::<Result<_>>()?;
        let weights = vec![1.0; states.len()];
        let system = OrthonormalSystem::new(states, weights)?;
        let rho = density(&system, &grid, propagator)?;
        for &v in &rho.values {
            max_dev = max_dev.max((v - count as f64).abs() / count as f64);
        }
        pairs.push((n as f64, mixed_norm_density(&rho, &spec)));
        counts.push(count);
    }
    let fit = fit_exponent(&pairs)?;
    Ok(WeylReport {
        pairs,
        counts,
        max_count_deviation: max_dev,
        fit,
        predicted_slope: dim as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_is_the_ball_count_and_slope_is_d() {
        let prop = PropagatorSpec::fractional(2.0).unwrap();
        let report = weyl_saturation_experiment(2, &prop, 4.0, 4.0, &[4, 8, 16]).unwrap();
        assert_eq!(report.counts, vec![49, 197, 797]);
        assert!(report.max_count_deviation < 1e-9);
        // Constant density: the norm equals the count exactly.
        for (pair, &c) in report.pairs.iter().zip(&report.counts) {
            assert!((pair.1 - c as f64).abs() / (c as f64) < 1e-9);
        }
        assert!((report.fit.slope - 2.0).abs() < 0.1);
    }

    #[test]
    fn doubling_weights_doubles_the_norm() {
        let prop = PropagatorSpec::wave();
        let set = enumerate_ball(1, 3).unwrap();
        let states: Vec<FourierState> = set
            .points()
            .iter()
            .map(|k| {
                let mut f = FourierState::new(1).unwrap();
                f.set(k.clone(), Complex64::new(1.0, 0.0)).unwrap();
                f
            })
            .collect();
        let grid = SpaceTimeGrid::full_torus(1, 0.0, 1.0, 3, 8).unwrap();
        let spec = MixedNormSpec::from_pair(6.0, 4.0).unwrap().halved().unwrap();
        let ones = OrthonormalSystem::new(states.clone(), vec![1.0; states.len()]).unwrap();
        let twos = OrthonormalSystem::new(states.clone(), vec![2.0; states.len()]).unwrap();
        let a = mixed_norm_density(&density(&ones, &grid, &prop).unwrap(), &spec);
        let b = mixed_norm_density(&density(&twos, &grid, &prop).unwrap(), &spec);
        assert!((b - 2.0 * a).abs() < 1e-12 * b.abs());
    }
}
