//! Thin multidimensional wrappers over rustfft.
//!
//! Transforms are unnormalized: `inverse` sums with e^{+2 pi i km/M}, which is
//! exactly the synthesis sum for coefficients scattered onto the grid, and
//! `forward` with e^{-2 pi i km/M}, so forward(inverse(x)) = M^d x.

use rustfft::FftPlanner;

use crate::Complex64;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// In-place transform along every axis of a row-major array with the given
/// per-axis lengths.
pub fn dft_nd(values: &mut [Complex64], dims: &[usize], direction: Direction) {
    let total: usize = dims.iter().product();
    assert_eq!(values.len(), total, "value buffer disagrees with dims");
    let mut planner = FftPlanner::new();
    let mut scratch: Vec<Complex64> = Vec::new();
    for (axis, &len) in dims.iter().enumerate() {
        if len == 1 {
            continue;
        }
        let fft = match direction {
            Direction::Forward => planner.plan_fft_forward(len),
            Direction::Inverse => planner.plan_fft_inverse(len),
        };
        // Stride between consecutive elements along `axis`, and the number of
        // independent lines to transform.
        let stride: usize = dims[axis + 1..].iter().product();
        let lines = total / len;
        scratch.resize(len, Complex64::new(0.0, 0.0));
        for line in 0..lines {
            // Decompose the line index into (outer block, inner offset).
            let inner = line % stride;
            let outer = line / stride;
            let base = outer * stride * len + inner;
            if stride == 1 {
                fft.process(&mut values[base..base + len]);
            } else {
                for i in 0..len {
                    scratch[i] = values[base + i * stride];
                }
                fft.process(&mut scratch);
                for i in 0..len {
                    values[base + i * stride] = scratch[i];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_dft_1d(x: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|m| {
                (0..n)
                    .map(|k| {
                        let ang = sign * 2.0 * std::f64::consts::PI * (k * m % n) as f64 / n as f64;
                        x[k] * Complex64::new(ang.cos(), ang.sin())
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_direct_sum_in_one_dimension() {
        let x: Vec<Complex64> = (0..12)
            .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.7).cos()))
            .collect();
        let mut inv = x.clone();
        dft_nd(&mut inv, &[12], Direction::Inverse);
        let direct = direct_dft_1d(&x, 1.0);
        for (a, b) in inv.iter().zip(&direct) {
            assert!((a - b).norm() < 1e-12);
        }
        let mut fwd = x.clone();
        dft_nd(&mut fwd, &[12], Direction::Forward);
        let direct = direct_dft_1d(&x, -1.0);
        for (a, b) in fwd.iter().zip(&direct) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn forward_then_inverse_scales_by_size() {
        let dims = [6usize, 5];
        let n: usize = dims.iter().product();
        let x: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(i as f64, -(i as f64) * 0.3))
            .collect();
        let mut y = x.clone();
        dft_nd(&mut y, &dims, Direction::Forward);
        dft_nd(&mut y, &dims, Direction::Inverse);
        for (a, b) in y.iter().zip(&x) {
            assert!((a / n as f64 - b).norm() < 1e-12);
        }
    }
}
