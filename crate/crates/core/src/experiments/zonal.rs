//! Zonal harmonic saturation on S^2.
//!
//! The density D_N = sum_{j <= N} |Z_j|^2 is a polynomial of degree 2N in
//! cos(theta) that piles up N^2/(4 pi) at the poles, and its L^{q/2}(S^2)
//! norm grows like N^{2 - 4/q}. Propagator phases drop out of |Z_j|, so the
//! time norm contributes a constant factor for every p, and only q shapes
//! the slope.

use crate::fitting::{fit_exponent, ExponentFit};
use crate::sphere::{gauss_legendre, legendre_p, sphere_integral_zonal};
use crate::{CoreError, Result};

#[derive(Debug, Clone)]
pub struct ZonalReport {
    /// max_j | ||Z_j||_{L^2(S^2)}^2 - 1 | over the checked degrees.
    pub max_norm_deviation: f64,
    /// (N, || sum_{j<=N} |Z_j|^2 ||_{L^{q/2}(S^2)}) per cutoff.
    pub pairs: Vec<(f64, f64)>,
    pub fit: ExponentFit,
    /// 2 - 4/q.
    pub predicted_slope: f64,
}

/// Quadrature density sum_{j <= n} (2j+1)/(4 pi) P_j(u)^2 at each node.
fn density_at_nodes(n: u64, nodes: &[f64]) -> Vec<f64> {
    let mut density = vec![0.0; nodes.len()];
    for (slot, &u) in density.iter_mut().zip(nodes) {
        let mut pm1 = 1.0f64;
        let mut p = u;
        *slot += 1.0 / (4.0 * std::f64::consts::PI);
        if n >= 1 {
            *slot += 3.0 / (4.0 * std::f64::consts::PI) * p * p;
        }
        for j in 1..n {
            let next = ((2 * j + 1) as f64 * u * p - j as f64 * pm1) / (j + 1) as f64;
            pm1 = p;
            p = next;
            *slot += (2 * (j + 1) + 1) as f64 / (4.0 * std::f64::consts::PI) * p * p;
        }
    }
    density
}

/// Fits the zonal density norm over the cutoffs and checks the L^2
/// normalization of every Z_j with j <= norm_check_degree. The Gauss rule
/// uses 2N + 2 nodes per cutoff, exact for the polynomial integrands at
/// every even integer q.
pub fn zonal_sphere_experiment(
    cutoffs: &[u64],
    p: f64,
    q: f64,
    norm_check_degree: u64,
) -> Result<ZonalReport> {
    super::validate_cutoffs(cutoffs)?;
    if !(p >= 1.0) || !(q >= 2.0) {
        return Err(CoreError::BadParameter(format!(
            "need p >= 1 and q >= 2, got ({p}, {q})"
        )));
    }
    let big_q = q / 2.0;
    let (nodes, weights) = gauss_legendre(2 * norm_check_degree as usize + 2)?;
    let mut max_norm_deviation = 0.0f64;
    for j in 0..=norm_check_degree {
        let scale = (2 * j + 1) as f64 / (4.0 * std::f64::consts::PI);
        let norm_sq = sphere_integral_zonal(
            |u| scale * legendre_p(j as usize, u).powi(2),
            &nodes,
            &weights,
        );
        max_norm_deviation = max_norm_deviation.max((norm_sq - 1.0).abs());
    }
    let mut pairs = Vec::with_capacity(cutoffs.len());
    for &n in cutoffs {
        let (nodes, weights) = gauss_legendre(2 * n as usize + 2)?;
        let density = density_at_nodes(n, &nodes);
        let integral: f64 = density
            .iter()
            .zip(&weights)
            .map(|(&d, &w)| w * d.powf(big_q))
            .sum::<f64>()
            * 2.0
            * std::f64::consts::PI;
        pairs.push((n as f64, integral.powf(1.0 / big_q)));
    }
    let fit = fit_exponent(&pairs)?;
    Ok(ZonalReport {
        max_norm_deviation,
        pairs,
        fit,
        predicted_slope: 2.0 - 4.0 / q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zonal_density_slope_matches_prediction() {
        let report = zonal_sphere_experiment(&[16, 32, 64], 4.0, 4.0, 128).unwrap();
        assert!(report.max_norm_deviation < 1e-6);
        assert!((report.predicted_slope - 1.0).abs() < 1e-12);
        assert!((report.fit.slope - 1.0).abs() < 0.15);
    }

    #[test]
    fn degree_zero_density_is_the_constant() {
        // D_0 = 1/(4 pi); any L^{q/2} norm over the unit sphere gives
        // (4 pi)^{2/q - 1}.
        let report = zonal_sphere_experiment(&[1, 2, 4], 2.0, 4.0, 4).unwrap();
        assert!(report.max_norm_deviation < 1e-12);
        // Degree 1: D_1(u) = (1 + 3u^2)/(4 pi); closed-form L^2 norm.
        // int_{-1}^{1} (1+3u^2)^2 du = 2 + 4 + 18/5 = 48/5.
        let exact = (2.0 * std::f64::consts::PI * 48.0 / 5.0
            / (4.0 * std::f64::consts::PI).powi(2))
        .sqrt();
        assert!((report.pairs[0].1 - exact).abs() < 1e-12);
    }
}
