//! Discrete restriction over large balls.
//!
//! For frequencies xi on the grid (1/N)Z^d cap [-1,1]^d lifted to the surface
//! (xi, |xi|^alpha), the averaged L^p norm of the exponential sum over a ball
//! of radius R >= N^{max(2, alpha)} stays within a subpolynomial factor of
//! ||a||_2. Monte-Carlo sampling of the ball average over random unit
//! coefficient vectors gives a lower-bound estimate of the best constant;
//! its fitted slope over N should stay near zero.

use crate::fitting::{fit_exponent, ExponentFit};
use crate::{CoreError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone)]
pub struct RestrictionReport {
    /// (N, max ratio over trials) per cutoff.
    pub pairs: Vec<(f64, f64)>,
    pub fit: ExponentFit,
    /// Ball radius used at each cutoff.
    pub radii: Vec<f64>,
}

/// Frequency grid (1/N)Z^d cap [-1,1]^d, with ambient-lift dispersion values.
fn frequency_grid(dim: usize, n: u64, alpha: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let side: Vec<f64> = (-(n as i64)..=n as i64)
        .map(|i| i as f64 / n as f64)
        .collect();
    let mut freqs = Vec::new();
    match dim {
        1 => {
            for &a in &side {
                freqs.push(vec![a]);
            }
        }
        _ => {
            for &a in &side {
                for &b in &side {
                    freqs.push(vec![a, b]);
                }
            }
        }
    }
    let disp = freqs
        .iter()
        .map(|f| f.iter().map(|x| x * x).sum::<f64>().sqrt().powf(alpha))
        .collect();
    (freqs, disp)
}

/// Uniform point in the ambient ball |x| <= r by rejection from the cube.
fn ball_point(ambient: usize, r: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..ambient).map(|_| r * (2.0 * rng.gen::<f64>() - 1.0)).collect();
        if x.iter().map(|v| v * v).sum::<f64>() <= r * r {
            return x;
        }
    }
}

fn max_ratio(
    freqs: &[Vec<f64>],
    disp: &[f64],
    p: f64,
    r: f64,
    trials: usize,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let dim = freqs[0].len();
    let half = p / 2.0;
    let int_half = half.fract() == 0.0 && half <= 32.0;
    let mut best = 0.0f64;
    for _ in 0..trials {
        let mut coeffs: Vec<(f64, f64)> = (0..freqs.len())
            .map(|_| (rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm: f64 = coeffs.iter().map(|c| c.0 * c.0 + c.1 * c.1).sum::<f64>().sqrt();
        for c in &mut coeffs {
            c.0 /= norm;
            c.1 /= norm;
        }
        let mut mean = 0.0f64;
        for _ in 0..samples {
            let x = ball_point(dim + 1, r, rng);
            let mut sre = 0.0f64;
            let mut sim = 0.0f64;
            for ((f, &d), c) in freqs.iter().zip(disp).zip(&coeffs) {
                let phase = 2.0
                    * std::f64::consts::PI
                    * (f.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() + x[dim] * d);
                let (s, co) = phase.sin_cos();
                sre += c.0 * co - c.1 * s;
                sim += c.0 * s + c.1 * co;
            }
            let sq = sre * sre + sim * sim;
            mean += if int_half { sq.powi(half as i32) } else { sq.powf(half) };
        }
        mean /= samples as f64;
        best = best.max(mean.powf(1.0 / p));
    }
    best
}

fn validate(dim: usize, p: f64) -> Result<()> {
    if !(1..=2).contains(&dim) {
        return Err(CoreError::BadDimension(dim));
    }
    let cap = 2.0 * (dim as f64 + 2.0) / dim as f64;
    if !(p >= 1.0) || p > cap {
        return Err(CoreError::BadParameter(format!(
            "p must lie in [1, {cap}] for dimension {dim}, got {p}"
        )));
    }
    Ok(())
}

/// Max ratio over trials at one cutoff; `r` must be at least N^{max(2, alpha)}.
pub fn discrete_restriction_ratio(
    dim: usize,
    alpha: f64,
    n: u64,
    p: f64,
    r: f64,
    trials: usize,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    validate(dim, p)?;
    if n == 0 || trials == 0 || samples == 0 {
        return Err(CoreError::BadParameter(
            "cutoff, trials, and samples must all be positive".into(),
        ));
    }
    let r_min = (n as f64).powf(2.0f64.max(alpha));
    if r < r_min * (1.0 - 1e-9) {
        return Err(CoreError::BadParameter(format!(
            "ball radius {r} is below the separation scale {r_min}"
        )));
    }
    let (freqs, disp) = frequency_grid(dim, n, alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(max_ratio(&freqs, &disp, p, r, trials, samples, &mut rng))
}

/// Sweeps the cutoffs with the default radius R = N^{max(2, alpha)} and fits
/// the growth of the max ratio.
pub fn discrete_restriction_experiment(
    dim: usize,
    alpha: f64,
    cutoffs: &[u64],
    p: f64,
    trials: usize,
    samples: usize,
    seed: u64,
) -> Result<RestrictionReport> {
    super::validate_cutoffs(cutoffs)?;
    let mut pairs = Vec::with_capacity(cutoffs.len());
    let mut radii = Vec::with_capacity(cutoffs.len());
    for &n in cutoffs {
        let r = (n as f64).powf(2.0f64.max(alpha));
        let ratio = discrete_restriction_ratio(dim, alpha, n, p, r, trials, samples, seed)?;
        pairs.push((n as f64, ratio));
        radii.push(r);
    }
    let fit = fit_exponent(&pairs)?;
    Ok(RestrictionReport { pairs, fit, radii })
}
