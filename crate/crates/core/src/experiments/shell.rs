//! Single-shell eigenfunctions.
//!
//! f = sum_{|k| = N} e^{2 pi i k.x} has ||f||_2^2 = r_d(N^2) (one unit
//! coefficient per representation of N^2 as a sum of d squares) and peak
//! value f(0) = r_d(N^2). Its L^q norm on the window |x| < 1/(8N) is compared
//! against the predicted size r_d(N^2) N^{-d/q}.

use crate::field::PropagatorSpec;
use crate::grid::{synthesize, SpaceTimeGrid};
use crate::lattice::{count_representations, enumerate_shell};
use crate::norms::{mixed_norm, MixedNormSpec};
use crate::field::FourierState;
use crate::{Complex64, CoreError, Result};

#[derive(Debug, Clone)]
pub struct ShellEntry {
    pub n: u64,
    /// r_d(N^2).
    pub rep_count: u64,
    /// ||f||_2^2; equals rep_count exactly.
    pub l2_norm_sq: f64,
    /// f(0); equals rep_count exactly.
    pub value_at_origin: f64,
    /// L^q norm of f over |x| < 1/(8N).
    pub window_norm: f64,
    /// r_d(N^2) N^{-d/q}.
    pub predicted: f64,
    /// window_norm / predicted.
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct ShellReport {
    pub entries: Vec<ShellEntry>,
}

/// Measures every shell |k| = N in the list; windows use `samples` points
/// per spatial axis and a single t = 0 slice (the propagator only rotates
/// each shell term by a common phase at x = 0, and |f| is what the window
/// norm sees).
pub fn shell_eigenfunction_experiment(
    dim: usize,
    q: f64,
    cutoffs: &[u64],
    samples: usize,
) -> Result<ShellReport> {
    if cutoffs.is_empty() {
        return Err(CoreError::Empty("no shell cutoffs given".into()));
    }
    if samples < 2 {
        return Err(CoreError::BadParameter(
            "shell windows need at least 2 samples per axis".into(),
        ));
    }
    let spec = MixedNormSpec::from_pair(q, q)?;
    let propagator = PropagatorSpec::fractional(2.0)?;
    let mut entries = Vec::with_capacity(cutoffs.len());
    for &n in cutoffs {
        let set = enumerate_shell(dim, n)?;
        if set.is_empty() {
            let admissible: Vec<u64> = (1..=n.max(16))
                .filter(|&m| count_representations(dim, m * m).map(|r| r > 0).unwrap_or(false))
                .take(16)
                .collect();
            return Err(CoreError::BadParameter(format!(
                "shell |k| = {n} is empty in dimension {dim}; admissible N include {admissible:?}"
            )));
        }
        let rep_count = set.len() as u64;
        let f = FourierState::from_set(&set, Complex64::new(1.0, 0.0));
        let x_half = 1.0 / (8.0 * n as f64);
        let grid = SpaceTimeGrid::window(dim, 0.0, 0.0, 1, 0.0, x_half, samples)?;
        let field = synthesize(&f, &grid, &propagator)?;
        let window_norm = mixed_norm(&field, &spec);
        let predicted = rep_count as f64 * (n as f64).powf(-(dim as f64) / q);
        entries.push(ShellEntry {
            n,
            rep_count,
            l2_norm_sq: f.l2_norm_sq(),
            value_at_origin: f.value_at_origin().re,
            window_norm,
            predicted,
            ratio: window_norm / predicted,
        });
    }
    Ok(ShellReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_norms_are_exact_representation_counts() {
        let report = shell_eigenfunction_experiment(2, 4.0, &[5, 25, 65], 17).unwrap();
        let expected = [12u64, 20, 36];
        for (entry, &r) in report.entries.iter().zip(&expected) {
            assert_eq!(entry.rep_count, r);
            assert_eq!(entry.l2_norm_sq, r as f64);
            assert_eq!(entry.value_at_origin, r as f64);
            assert!(entry.ratio > 0.0);
        }
    }

    #[test]
    fn one_dimensional_shell_is_a_cosine() {
        // f = e^{2 pi i N x} + e^{-2 pi i N x} = 2 cos(2 pi N x).
        let report = shell_eigenfunction_experiment(1, 2.0, &[7], 33).unwrap();
        let entry = &report.entries[0];
        assert_eq!(entry.rep_count, 2);
        assert_eq!(entry.l2_norm_sq, 2.0);
        assert_eq!(entry.value_at_origin, 2.0);
        // Integrating 4 cos^2(2 pi N x) over |x| < 1/(8N) gives
        // 1/(2N) + 1/(pi N) exactly.
        let n = 7.0f64;
        let expected = (0.5 / n + 1.0 / (std::f64::consts::PI * n)).sqrt();
        assert!((entry.window_norm - expected).abs() < 1e-3 * expected);
    }
}
