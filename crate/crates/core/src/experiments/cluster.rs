//! Spectral-cluster coherence on the torus.
//!
//! For each level j the state u_j has one coefficient count^{-1/2} on every
//! frequency in the shell j - c < |k| <= j, so u_j(0, 0) = sqrt(count) and
//! distinct levels are exactly orthogonal (disjoint supports). Dispersion
//! spreads the shell phases by at most (1 + alpha c) eps turns over the probe
//! region |t| <= eps j^{1-alpha}, |x| <= eps/j, so |u_j| stays near its peak
//! there; the experiment records how much of the peak survives.

use crate::field::{unit_phase, OrthonormalSystem, PropagatorSpec};
use crate::lattice::shell_cluster;
use crate::norms::is_orthonormal;
use crate::field::FourierState;
use crate::{Complex64, CoreError, Result};

/// Probe-region scale; the region is |t| <= EPSILON j^{1-alpha},
/// |x| <= EPSILON / j.
const EPSILON: f64 = 0.01;

#[derive(Debug, Clone)]
pub struct ClusterEntry {
    pub j: u64,
    /// Shell point count.
    pub count: usize,
    /// min |u_j(t, x)| / sqrt(count) over the probe samples.
    pub min_ratio: f64,
    /// Whether min |u_j| >= sqrt(count) / 2 on the probe region.
    pub passes_half: bool,
}

#[derive(Debug, Clone)]
pub struct ClusterReport {
    pub entries: Vec<ClusterEntry>,
    /// Gram matrix of the cluster system is the identity (tol 1e-12).
    pub gram_is_identity: bool,
    /// Smallest min_ratio over all levels.
    pub smallest_constant: f64,
}

/// u_j(t, x) by the defining sum.
fn eval_state(state: &FourierState, t: f64, x: &[f64], propagator: &PropagatorSpec) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, a) in state.iter() {
        let dot: f64 = k.iter().zip(x).map(|(&ki, &xi)| ki as f64 * xi).sum();
        let norm_sq: i64 = k.iter().map(|&ki| ki * ki).sum();
        acc += a * unit_phase(dot + t * propagator.dispersion_of_norm_sq(norm_sq as f64));
    }
    acc
}

/// Probe points: origin, axis points at radius r, and cube corners scaled to
/// radius r.
fn probe_points(dim: usize, r: f64) -> Vec<Vec<f64>> {
    let mut pts = vec![vec![0.0; dim]];
    for axis in 0..dim {
        for sign in [-1.0, 1.0] {
            let mut x = vec![0.0; dim];
            x[axis] = sign * r;
            pts.push(x);
        }
    }
    if dim > 1 {
        let c = r / (dim as f64).sqrt();
        for mask in 0..(1u32 << dim) {
            let x: Vec<f64> = (0..dim)
                .map(|a| if mask >> a & 1 == 1 { c } else { -c })
                .collect();
            pts.push(x);
        }
    }
    pts
}

pub fn torus_cluster_experiment(
    dim: usize,
    alpha: f64,
    j_values: &[u64],
    width: f64,
) -> Result<ClusterReport> {
    if j_values.is_empty() {
        return Err(CoreError::Empty("no cluster levels given".into()));
    }
    let propagator = PropagatorSpec::fractional(alpha)?;
    let mut states = Vec::with_capacity(j_values.len());
    let mut entries = Vec::with_capacity(j_values.len());
    for &j in j_values {
        let set = shell_cluster(dim, j, width)?;
        if set.is_empty() {
            return Err(CoreError::Empty(format!(
                "cluster shell ({} - {width}, {}] is empty in dimension {dim}",
                j, j
            )));
        }
        let count = set.len();
        let amp = Complex64::new(1.0 / (count as f64).sqrt(), 0.0);
        let state = FourierState::from_set(&set, amp);
        let t_max = EPSILON * (j as f64).powf(1.0 - alpha);
        let x_max = EPSILON / j as f64;
        let mut min_ratio = f64::INFINITY;
        for step in -2i32..=2 {
            let t = t_max * step as f64 / 2.0;
            for x in probe_points(dim, x_max) {
                let value = eval_state(&state, t, &x, &propagator).norm();
                min_ratio = min_ratio.min(value / (count as f64).sqrt());
            }
        }
        entries.push(ClusterEntry {
            j,
            count,
            min_ratio,
            passes_half: min_ratio >= 0.5,
        });
        states.push(state);
    }
    let weights = vec![1.0; states.len()];
    let system = OrthonormalSystem::new(states, weights)?;
    let gram_is_identity = is_orthonormal(&system, 1e-12);
    let smallest_constant = entries.iter().fold(f64::INFINITY, |m, e| m.min(e.min_ratio));
    Ok(ClusterReport {
        entries,
        gram_is_identity,
        smallest_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_value_and_coherence() {
        let report = torus_cluster_experiment(2, 2.0, &[8, 16, 32], 1.0).unwrap();
        assert!(report.gram_is_identity);
        for entry in &report.entries {
            assert!(entry.passes_half, "level {} lost the peak", entry.j);
            assert!(entry.min_ratio > 0.9);
        }
    }

    #[test]
    fn origin_value_is_sqrt_count() {
        let set = shell_cluster(2, 5, 1.0).unwrap();
        let count = set.len();
        assert_eq!(count, 32);
        let amp = Complex64::new(1.0 / (count as f64).sqrt(), 0.0);
        let state = FourierState::from_set(&set, amp);
        let prop = PropagatorSpec::fractional(2.0).unwrap();
        let peak = eval_state(&state, 0.0, &[0.0, 0.0], &prop);
        assert!((peak.re - (count as f64).sqrt()).abs() < 1e-12);
        assert!(peak.im.abs() < 1e-12);
    }

    #[test]
    fn short_time_peak_survives() {
        // j = 32, t = 1e-4 / j: the phase spread is far below a quarter turn.
        let set = shell_cluster(2, 32, 1.0).unwrap();
        let count = set.len();
        let amp = Complex64::new(1.0 / (count as f64).sqrt(), 0.0);
        let state = FourierState::from_set(&set, amp);
        let prop = PropagatorSpec::fractional(2.0).unwrap();
        let t = 1e-4 / 32.0;
        let ratio = eval_state(&state, t, &[0.0, 0.0], &prop).norm() / (count as f64).sqrt();
        assert!(ratio >= 0.9);
    }

    #[test]
    fn one_dimensional_cluster_is_the_pair() {
        let report = torus_cluster_experiment(1, 2.0, &[3], 1.0).unwrap();
        assert_eq!(report.entries[0].count, 2);
    }
}
