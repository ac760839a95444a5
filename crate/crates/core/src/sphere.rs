//! Legendre polynomials, Gauss-Legendre quadrature, and zonal spherical
//! harmonics on S^2.
//!
//! A zonal harmonic of degree j is Z_j(theta) = sqrt((2j+1)/(4 pi)) P_j(cos
//! theta); with the surface measure d sigma it has unit L^2 norm. Integrals of
//! zonal functions reduce to 2 pi int_{-1}^{1} F(u) du, evaluated here by
//! Gauss-Legendre quadrature, exact for polynomial integrands of degree up to
//! 2 n - 1 with n nodes.

use crate::{CoreError, Result};

/// P_j(x) by the three-term recurrence.
pub fn legendre_p(j: usize, x: f64) -> f64 {
    match j {
        0 => 1.0,
        1 => x,
        _ => {
            let mut pm1 = 1.0;
            let mut p = x;
            for n in 1..j {
                let next = ((2 * n + 1) as f64 * x * p - n as f64 * pm1) / (n + 1) as f64;
                pm1 = p;
                p = next;
            }
            p
        }
    }
}

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(CoreError::BadParameter(
            "quadrature needs at least one node".into(),
        ));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton iterations on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut pm1 = 1.0;
            let mut p = x;
            for k in 1..n {
                let next = ((2 * k + 1) as f64 * x * p - k as f64 * pm1) / (k + 1) as f64;
                pm1 = p;
                p = next;
            }
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

/// Integral over S^2 of a zonal function given as F(cos theta).
pub fn sphere_integral_zonal(f: impl Fn(f64) -> f64, nodes: &[f64], weights: &[f64]) -> f64 {
    2.0 * std::f64::consts::PI
        * nodes
            .iter()
            .zip(weights)
            .map(|(&u, &w)| w * f(u))
            .sum::<f64>()
}

/// The L^2-normalized zonal harmonic of a given degree.
#[derive(Debug, Clone, Copy)]
pub struct SphereZonalState {
    pub degree: usize,
}

impl SphereZonalState {
    /// Z_j as a function of u = cos theta.
    pub fn eval_cos(&self, u: f64) -> f64 {
        let j = self.degree;
        ((2 * j + 1) as f64 / (4.0 * std::f64::consts::PI)).sqrt() * legendre_p(j, u)
    }

    /// ||Z_j||_{L^2(S^2)}^2 by quadrature; 1 up to roundoff when the rule has
    /// at least j + 1 nodes.
    pub fn l2_norm_sq(&self, nodes: &[f64], weights: &[f64]) -> f64 {
        sphere_integral_zonal(|u| self.eval_cos(u).powi(2), nodes, weights)
    }
}
