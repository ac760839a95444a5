//! Space-time sampling grids and the synthesis of Fourier states onto them.
//!
//! Two kinds of grid occur. The full torus [0,1)^d with M points per axis is
//! FFT-friendly: synthesis scatters coefficients and runs one inverse DFT per
//! time slice, which reproduces the defining sum exactly (up to roundoff)
//! provided M >= 2 max|k_i| + 1 so distinct frequencies stay distinct mod M.
//! A window grid covers a small box around a point of interest; there
//! synthesis evaluates the defining sum directly at every sample, which is
//! exact at any resolution.

use crate::fft::{dft_nd, Direction};
use crate::field::{unit_phase, FourierState, OrthonormalSystem, PropagatorSpec};
use crate::parallel::chunked_fold;
use crate::{Complex64, CoreError, Result};

/// Uniform rectangle-rule grid in time and space.
///
/// Time samples are the left endpoints t_start + i * (t_len / n_time). A grid
/// with n_time = 1 and t_len = 0 represents a single time slice with unit
/// quadrature weight (used for purely spatial norms). Spatial samples per
/// axis a are x_origin[a] + m * (x_len[a] / n_space), row-major flattened.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeGrid {
    dim: usize,
    pub t_start: f64,
    pub t_len: f64,
    pub n_time: usize,
    pub x_origin: Vec<f64>,
    pub x_len: Vec<f64>,
    pub n_space: usize,
    full_torus: bool,
}

impl SpaceTimeGrid {
    /// Grid over I x [0,1)^d.
    pub fn full_torus(
        dim: usize,
        t_start: f64,
        t_len: f64,
        n_time: usize,
        n_space: usize,
    ) -> Result<Self> {
        Self::validate(dim, t_len, n_time, n_space)?;
        Ok(Self {
            dim,
            t_start,
            t_len,
            n_time,
            x_origin: vec![0.0; dim],
            x_len: vec![1.0; dim],
            n_space,
            full_torus: true,
        })
    }

    /// Centered box |t - t_center| < t_half, |x_a - x_center| < x_half.
    pub fn window(
        dim: usize,
        t_center: f64,
        t_half: f64,
        n_time: usize,
        x_center: f64,
        x_half: f64,
        n_space: usize,
    ) -> Result<Self> {
        if !(t_half >= 0.0) || !(x_half > 0.0) {
            return Err(CoreError::BadParameter(
                "window half-widths must be nonnegative (time) and positive (space)".into(),
            ));
        }
        Self::validate(dim, 2.0 * t_half, n_time, n_space)?;
        Ok(Self {
            dim,
            t_start: t_center - t_half,
            t_len: 2.0 * t_half,
            n_time,
            x_origin: vec![x_center - x_half; dim],
            x_len: vec![2.0 * x_half; dim],
            n_space,
            full_torus: false,
        })
    }

    fn validate(dim: usize, t_len: f64, n_time: usize, n_space: usize) -> Result<()> {
        if !(1..=3).contains(&dim) {
            return Err(CoreError::BadDimension(dim));
        }
        if n_time == 0 || n_space == 0 {
            return Err(CoreError::BadParameter(
                "grids need at least one sample per axis".into(),
            ));
        }
        if !(t_len >= 0.0) {
            return Err(CoreError::BadParameter(
                "time interval length must be nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// Default time-sample count resolving the fastest phase on the interval:
    /// 8 ceil(max dispersion * |I|) + 1.
    pub fn default_time_samples(max_dispersion: f64, t_len: f64) -> usize {
        8 * (max_dispersion * t_len).abs().ceil() as usize + 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_torus(&self) -> bool {
        self.full_torus
    }

    pub fn spatial_count(&self) -> usize {
        self.n_space.pow(self.dim as u32)
    }

    pub fn len(&self) -> usize {
        self.n_time * self.spatial_count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time_at(&self, i: usize) -> f64 {
        self.t_start + self.t_len * i as f64 / self.n_time as f64
    }

    /// Quadrature weight of one time sample.
    pub fn time_weight(&self) -> f64 {
        if self.n_time == 1 && self.t_len == 0.0 {
            1.0
        } else {
            self.t_len / self.n_time as f64
        }
    }

    /// Quadrature weight (cell volume) of one spatial sample.
    pub fn cell_volume(&self) -> f64 {
        self.x_len
            .iter()
            .map(|l| l / self.n_space as f64)
            .product()
    }

    /// Decodes a flattened spatial index into coordinates.
    pub fn spatial_point(&self, mut flat: usize, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim);
        for a in (0..self.dim).rev() {
            let m = flat % self.n_space;
            flat /= self.n_space;
            out[a] = self.x_origin[a] + self.x_len[a] * m as f64 / self.n_space as f64;
        }
    }
}

/// Complex samples of a field on a grid, row-major [time][space...].
#[derive(Debug, Clone)]
pub struct SpaceTimeField {
    pub grid: SpaceTimeGrid,
    pub values: Vec<Complex64>,
}

/// Real samples (a weighted density) on a grid.
#[derive(Debug, Clone)]
pub struct DensityField {
    pub grid: SpaceTimeGrid,
    pub values: Vec<f64>,
}

impl SpaceTimeField {
    pub fn time_slice(&self, i: usize) -> &[Complex64] {
        let s = self.grid.spatial_count();
        &self.values[i * s..(i + 1) * s]
    }
}

/// Samples e^{itP} f on the grid: u(t, x) = sum_k a_k e^{2 pi i (k.x + t disp(|k|))}.
pub fn synthesize(
    state: &FourierState,
    grid: &SpaceTimeGrid,
    propagator: &PropagatorSpec,
) -> Result<SpaceTimeField> {
    if state.dim() != grid.dim() {
        return Err(CoreError::DimensionMismatch(format!(
            "state dimension {} vs grid dimension {}",
            state.dim(),
            grid.dim()
        )));
    }
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    if grid.is_full_torus() {
        let needed = 2 * state.max_abs_coord() as usize + 1;
        if grid.n_space < needed {
            return Err(CoreError::AliasedGrid {
                points: grid.n_space,
                needed,
            });
        }
        synthesize_torus_fft(state, grid, propagator, &mut values);
    } else {
        synthesize_direct(state, grid, propagator, &mut values);
    }
    Ok(SpaceTimeField {
        grid: grid.clone(),
        values,
    })
}

fn synthesize_torus_fft(
    state: &FourierState,
    grid: &SpaceTimeGrid,
    propagator: &PropagatorSpec,
    values: &mut [Complex64],
) {
    let m = grid.n_space;
    let s = grid.spatial_count();
    let dims = vec![m; grid.dim()];
    // Precompute per-coefficient dispersion and grid position.
    let entries: Vec<(usize, f64, Complex64)> = state
        .iter()
        .map(|(k, &a)| {
            let mut idx = 0usize;
            for &c in k {
                let r = c.rem_euclid(m as i64) as usize;
                idx = idx * m + r;
            }
            let nsq: f64 = k.iter().map(|c| (c * c) as f64).sum();
            (idx, propagator.dispersion_of_norm_sq(nsq), a)
        })
        .collect();
    let mut slice = vec![Complex64::new(0.0, 0.0); s];
    for i in 0..grid.n_time {
        let t = grid.time_at(i);
        slice.fill(Complex64::new(0.0, 0.0));
        for &(idx, disp, a) in &entries {
            slice[idx] += a * unit_phase(t * disp);
        }
        dft_nd(&mut slice, &dims, Direction::Inverse);
        values[i * s..(i + 1) * s].copy_from_slice(&slice);
    }
}

fn synthesize_direct(
    state: &FourierState,
    grid: &SpaceTimeGrid,
    propagator: &PropagatorSpec,
    values: &mut [Complex64],
) {
    let s = grid.spatial_count();
    let d = grid.dim();
    let entries: Vec<(Vec<f64>, f64, Complex64)> = state
        .iter()
        .map(|(k, &a)| {
            let kf: Vec<f64> = k.iter().map(|&c| c as f64).collect();
            let nsq: f64 = k.iter().map(|c| (c * c) as f64).sum();
            (kf, propagator.dispersion_of_norm_sq(nsq), a)
        })
        .collect();
    let mut x = vec![0.0; d];
    for i in 0..grid.n_time {
        let t = grid.time_at(i);
        for p in 0..s {
            grid.spatial_point(p, &mut x);
            let mut acc = Complex64::new(0.0, 0.0);
            for (kf, disp, a) in &entries {
                let dot: f64 = kf.iter().zip(&x).map(|(kc, xc)| kc * xc).sum();
                acc += a * unit_phase(dot + t * disp);
            }
            values[i * s + p] = acc;
        }
    }
}

/// Weighted density of a system: rho(t, x) = sum_j nu_j |u_j(t, x)|^2, with
/// every state evaluated by the exact defining sum at the sample points (no
/// resolution requirement; values at samples are exact regardless of grid
/// spacing). States are processed in fixed-size chunks combined in order, so
/// the result is independent of thread count.
pub fn density(
    system: &OrthonormalSystem,
    grid: &SpaceTimeGrid,
    propagator: &PropagatorSpec,
) -> Result<DensityField> {
    if system.dim() != grid.dim() {
        return Err(CoreError::DimensionMismatch(format!(
            "system dimension {} vs grid dimension {}",
            system.dim(),
            grid.dim()
        )));
    }
    let n = system.states.len();
    let values = chunked_fold(
        n,
        64,
        || vec![0.0f64; grid.len()],
        |acc, range| {
            let mut buf = vec![Complex64::new(0.0, 0.0); grid.len()];
            for j in range {
                buf.fill(Complex64::new(0.0, 0.0));
                synthesize_direct(&system.states[j], grid, propagator, &mut buf);
                let w = system.weights[j];
                for (r, v) in acc.iter_mut().zip(&buf) {
                    *r += w * v.norm_sqr();
                }
            }
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(&b) {
                *x += y;
            }
            a
        },
    );
    Ok(DensityField {
        grid: grid.clone(),
        values,
    })
}
