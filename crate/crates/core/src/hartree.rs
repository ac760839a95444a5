//! Split-step integrator for the coupled system
//!
//!   i d/dt u_j = P u_j + (W rho) u_j,   rho = sum_j nu_j |u_j|^2,
//!
//! on the discrete torus. The flow direction is u(t) = e^{-it(P + W rho)} u,
//! so with the e^{2 pi i} phase convention of the propagator module the free
//! factor per step is e^{-2 pi i dt disp(|k|)} and the potential factor is
//! the pointwise phase e^{-2 pi i dt (W rho)(x)}.
//!
//! States evolve on the full grid spectrum with sawtooth wavenumbers (index
//! t maps to t or t - M per axis); nothing is ever truncated mid-run, and
//! the potential substep has unit modulus pointwise, so every ||u_j||_2 is
//! conserved to roundoff by construction. The grid is sized to at least
//! three times the initial bandwidth so the first quadratic density is
//! alias-free; afterwards the discrete system is self-consistent and its
//! distance to the continuum is what the convergence tests measure.

use crate::fft::{dft_nd, Direction};
use crate::field::{unit_phase, FourierState, PropagatorSpec};
use crate::{Complex64, CoreError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Half kinetic, potential, half kinetic; second order.
    Strang,
    /// Full kinetic then potential; first order.
    Lie,
}

/// Coupling operator applied to the density before it enters the phase.
#[derive(Debug, Clone)]
pub enum PotentialSpec {
    Zero,
    /// Fourier multiplier with symbol (1 + |k|^2)^{(a - d)/2}.
    Multiplier { a: f64 },
    /// Convolution with a fixed real kernel given by its coefficients.
    Explicit { kernel: FourierState },
}

impl PotentialSpec {
    /// Validates conjugate symmetry (real kernel) before wrapping.
    pub fn explicit(kernel: FourierState) -> Result<Self> {
        for (k, a) in kernel.iter() {
            let neg: Vec<i64> = k.iter().map(|c| -c).collect();
            let mirror = kernel.coeff(&neg);
            if (mirror.conj() - a).norm() > 1e-12 {
                return Err(CoreError::BadParameter(
                    "explicit kernel must have conjugate-symmetric coefficients".into(),
                ));
            }
        }
        Ok(Self::Explicit { kernel })
    }

    fn symbol(&self, k: &[i64], dim: usize) -> Complex64 {
        match self {
            Self::Zero => Complex64::new(0.0, 0.0),
            Self::Multiplier { a } => {
                let norm_sq: i64 = k.iter().map(|c| c * c).sum();
                Complex64::new((1.0 + norm_sq as f64).powf((a - dim as f64) / 2.0), 0.0)
            }
            Self::Explicit { kernel } => kernel.coeff(k),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    /// Requested grid side; raised to 3 (2B + 1) for initial bandwidth B.
    pub grid_m: usize,
    /// Trajectory recording stride, in steps.
    pub output_every: usize,
    /// Abort when any sup |u_j| exceeds this.
    pub blow_up_threshold: f64,
}

impl SolverConfig {
    pub fn new(dt: f64, t_end: f64, scheme: Scheme, grid_m: usize) -> Result<Self> {
        let config = Self {
            dt,
            t_end,
            scheme,
            grid_m,
            output_every: 1,
            blow_up_threshold: 1e6,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !(self.t_end > 0.0) {
            return Err(CoreError::BadParameter(
                "dt and t_end must be positive".into(),
            ));
        }
        if self.output_every == 0 {
            return Err(CoreError::BadParameter(
                "output stride must be at least 1".into(),
            ));
        }
        if !(self.blow_up_threshold > 0.0) {
            return Err(CoreError::NonPositiveValue(self.blow_up_threshold));
        }
        Ok(())
    }
}

/// Weighted system of evolving states.
#[derive(Debug, Clone)]
pub struct HartreeState {
    pub weights: Vec<f64>,
    pub states: Vec<FourierState>,
    pub time: f64,
}

impl HartreeState {
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
        if let Some(&w) = weights.iter().find(|w| !(**w >= 0.0)) {
            return Err(CoreError::NonPositiveValue(w));
        }
        Ok(Self {
            weights,
            states,
            time: 0.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    fn bandwidth(&self) -> i64 {
        self.states.iter().map(|s| s.max_abs_coord()).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct TrajectoryPoint {
    pub time: f64,
    pub masses: Vec<f64>,
    pub trace: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Conservation {
    /// max_j max_t |M_j(t) - M_j(0)| / M_j(0).
    pub max_mass_drift: f64,
    pub max_trace_drift: f64,
    pub max_energy_drift: f64,
}

#[derive(Debug, Clone)]
pub struct HartreeSolution {
    pub state: HartreeState,
    pub trajectory: Vec<TrajectoryPoint>,
    pub conservation: Conservation,
    /// Grid side actually used.
    pub grid_m: usize,
}

/// Sawtooth wavenumber of a grid index: t for t <= M/2, t - M above.
fn sawtooth(t: usize, m: usize) -> i64 {
    if t <= m / 2 {
        t as i64
    } else {
        t as i64 - m as i64
    }
}

fn wavenumber(flat: usize, dim: usize, m: usize, out: &mut [i64]) {
    let mut rest = flat;
    for axis in (0..dim).rev() {
        out[axis] = sawtooth(rest % m, m);
        rest /= m;
    }
}

/// Grid samples of a state: u(x) = sum_k a_k e^{2 pi i k.x} at x = i/M.
/// Needs M >= 2 max|k_i| + 1 so distinct frequencies stay distinct mod M.
fn to_grid(state: &FourierState, m: usize) -> Result<Vec<Complex64>> {
    let needed = 2 * state.max_abs_coord().unsigned_abs() as usize + 1;
    if m < needed {
        return Err(CoreError::AliasedGrid {
            points: m,
            needed,
        });
    }
    let dim = state.dim();
    let mut values = vec![Complex64::new(0.0, 0.0); m.pow(dim as u32)];
    for (k, &a) in state.iter() {
        let mut flat = 0usize;
        for &c in k {
            flat = flat * m + c.rem_euclid(m as i64) as usize;
        }
        values[flat] += a;
    }
    dft_nd(&mut values, &vec![m; dim], Direction::Inverse);
    Ok(values)
}

/// Inverse of `to_grid`: coefficients on sawtooth wavenumbers, exact zeros
/// dropped.
fn from_grid(values: &[Complex64], dim: usize, m: usize) -> Result<FourierState> {
    let mut spectrum = values.to_vec();
    dft_nd(&mut spectrum, &vec![m; dim], Direction::Forward);
    let scale = 1.0 / values.len() as f64;
    let mut state = FourierState::new(dim)?;
    let mut k = vec![0i64; dim];
    for (flat, &v) in spectrum.iter().enumerate() {
        let a = v * scale;
        if a != Complex64::new(0.0, 0.0) {
            wavenumber(flat, dim, m, &mut k);
            state.set(k.clone(), a)?;
        }
    }
    Ok(state)
}

/// rho(x) = sum_j nu_j |u_j(x)|^2 on an M-per-axis grid. The grid must hold
/// the quadratic's bandwidth: M >= 4B + 1.
pub fn compute_density(state: &HartreeState, m: usize) -> Result<Vec<f64>> {
    let needed = 4 * state.bandwidth().unsigned_abs() as usize + 1;
    if m < needed {
        return Err(CoreError::AliasedGrid {
            points: m,
            needed,
        });
    }
    let mut rho = vec![0.0f64; m.pow(state.dim() as u32)];
    for (u, &w) in state.states.iter().zip(&state.weights) {
        let values = to_grid(u, m)?;
        for (r, v) in rho.iter_mut().zip(&values) {
            *r += w * v.norm_sqr();
        }
    }
    Ok(rho)
}

/// W rho: transform, multiply by the symbol, transform back. Real output for
/// real input (the symbols are conjugate-symmetric).
pub fn apply_potential(rho: &[f64], dim: usize, m: usize, w: &PotentialSpec) -> Result<Vec<f64>> {
    if rho.len() != m.pow(dim as u32) {
        return Err(CoreError::DimensionMismatch(format!(
            "density has {} samples, grid wants {}",
            rho.len(),
            m.pow(dim as u32)
        )));
    }
    if matches!(w, PotentialSpec::Zero) {
        return Ok(vec![0.0; rho.len()]);
    }
    let mut buf: Vec<Complex64> = rho.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let dims = vec![m; dim];
    dft_nd(&mut buf, &dims, Direction::Forward);
    let mut k = vec![0i64; dim];
    for (flat, v) in buf.iter_mut().enumerate() {
        wavenumber(flat, dim, m, &mut k);
        *v *= w.symbol(&k, dim);
    }
    dft_nd(&mut buf, &dims, Direction::Inverse);
    let scale = 1.0 / rho.len() as f64;
    Ok(buf.iter().map(|v| v.re * scale).collect())
}

/// In-place evolution state on a fixed grid.
struct Sim {
    dim: usize,
    m: usize,
    dims: Vec<usize>,
    /// dispersion(|k|) per flat index, sawtooth wavenumbers.
    disp: Vec<f64>,
    weights: Vec<f64>,
    /// Spatial samples per state.
    us: Vec<Vec<Complex64>>,
}

impl Sim {
    fn new(state: &HartreeState, propagator: &PropagatorSpec, m: usize) -> Result<Self> {
        let dim = state.dim();
        let n = m.pow(dim as u32);
        let mut disp = vec![0.0f64; n];
        let mut k = vec![0i64; dim];
        for (flat, d) in disp.iter_mut().enumerate() {
            wavenumber(flat, dim, m, &mut k);
            let norm_sq: i64 = k.iter().map(|c| c * c).sum();
            *d = propagator.dispersion_of_norm_sq(norm_sq as f64);
        }
        let us = state
            .states
            .iter()
            .map(|s| to_grid(s, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim,
            m,
            dims: vec![m; dim],
            disp,
            weights: state.weights.clone(),
            us,
        })
    }

    fn kinetic(&mut self, h: f64) {
        let phases: Vec<Complex64> = self.disp.iter().map(|&d| unit_phase(-h * d)).collect();
        let scale = 1.0 / self.disp.len() as f64;
        for u in &mut self.us {
            dft_nd(u, &self.dims, Direction::Forward);
            for (v, ph) in u.iter_mut().zip(&phases) {
                *v *= ph * scale;
            }
            dft_nd(u, &self.dims, Direction::Inverse);
        }
    }

    fn density(&self) -> Vec<f64> {
        let mut rho = vec![0.0f64; self.disp.len()];
        for (u, &w) in self.us.iter().zip(&self.weights) {
            for (r, v) in rho.iter_mut().zip(u) {
                *r += w * v.norm_sqr();
            }
        }
        rho
    }

    fn potential(&mut self, w: &PotentialSpec, dt: f64) -> Result<()> {
        if matches!(w, PotentialSpec::Zero) {
            return Ok(());
        }
        let wr = apply_potential(&self.density(), self.dim, self.m, w)?;
        let phases: Vec<Complex64> = wr.iter().map(|&v| unit_phase(-dt * v)).collect();
        for u in &mut self.us {
            for (v, ph) in u.iter_mut().zip(&phases) {
                *v *= ph;
            }
        }
        Ok(())
    }

    fn step(&mut self, w: &PotentialSpec, dt: f64, scheme: Scheme) -> Result<()> {
        match scheme {
            Scheme::Strang => {
                self.kinetic(dt / 2.0);
                self.potential(w, dt)?;
                self.kinetic(dt / 2.0);
            }
            Scheme::Lie => {
                self.kinetic(dt);
                self.potential(w, dt)?;
            }
        }
        Ok(())
    }

    /// (mass per state, sup |u| over all states); errors on non-finite data.
    fn masses_and_sup(&self, step: usize) -> Result<(Vec<f64>, f64)> {
        let n = self.disp.len() as f64;
        let mut sup_sq = 0.0f64;
        let mut masses = Vec::with_capacity(self.us.len());
        for u in &self.us {
            let mut sum = 0.0;
            for v in u {
                let s = v.norm_sqr();
                sum += s;
                if s > sup_sq {
                    sup_sq = s;
                }
            }
            if !sum.is_finite() {
                return Err(CoreError::NonFinite(step));
            }
            masses.push(sum / n);
        }
        Ok((masses, sup_sq.sqrt()))
    }

    fn energy(&self, w: &PotentialSpec) -> Result<f64> {
        let n = self.disp.len() as f64;
        let mut kinetic = 0.0f64;
        for (u, &weight) in self.us.iter().zip(&self.weights) {
            let mut spectrum = u.clone();
            dft_nd(&mut spectrum, &self.dims, Direction::Forward);
            let mut sum = 0.0;
            for (v, &d) in spectrum.iter().zip(&self.disp) {
                sum += d * v.norm_sqr();
            }
            kinetic += weight * sum / (n * n);
        }
        let rho = self.density();
        let wr = apply_potential(&rho, self.dim, self.m, w)?;
        let interaction: f64 =
            rho.iter().zip(&wr).map(|(&r, &v)| r * v).sum::<f64>() / n;
        Ok(kinetic + 0.5 * interaction)
    }

    fn observe(&self, w: &PotentialSpec, time: f64) -> Result<TrajectoryPoint> {
        let (masses, _) = self.masses_and_sup(0)?;
        let trace: f64 = masses.iter().zip(&self.weights).map(|(&m, &w)| w * m).sum();
        Ok(TrajectoryPoint {
            time,
            masses,
            trace,
            energy: self.energy(w)?,
        })
    }

    fn into_state(self, time: f64) -> Result<HartreeState> {
        let states = self
            .us
            .iter()
            .map(|u| from_grid(u, self.dim, self.m))
            .collect::<Result<Vec<_>>>()?;
        Ok(HartreeState {
            weights: self.weights,
            states,
            time,
        })
    }
}

fn effective_grid(state: &HartreeState, requested: usize) -> usize {
    requested.max(3 * (2 * state.bandwidth().unsigned_abs() as usize + 1))
}

/// One split step; grid side 3 (2B + 1). For long runs use [`solve`], which
/// keeps a single grid across steps instead of re-deriving it from the
/// (growing) support of the output.
pub fn step(
    state: &HartreeState,
    w: &PotentialSpec,
    propagator: &PropagatorSpec,
    dt: f64,
    scheme: Scheme,
) -> Result<HartreeState> {
    if !(dt > 0.0) {
        return Err(CoreError::BadParameter("dt must be positive".into()));
    }
    let m = effective_grid(state, 0);
    let mut sim = Sim::new(state, propagator, m)?;
    sim.step(w, dt, scheme)?;
    sim.into_state(state.time + dt)
}

/// Iterates the scheme over round(t_end / dt) steps, recording observables
/// every `output_every` steps (plus start and end) and aborting on blow-up
/// or non-finite data.
pub fn solve(
    state0: &HartreeState,
    w: &PotentialSpec,
    propagator: &PropagatorSpec,
    config: &SolverConfig,
) -> Result<HartreeSolution> {
    config.validate()?;
    let steps = (config.t_end / config.dt).round().max(1.0) as usize;
    let m = effective_grid(state0, config.grid_m);
    let mut sim = Sim::new(state0, propagator, m)?;
    let mut trajectory = vec![sim.observe(w, state0.time)?];
    let start = &trajectory[0];
    let (mass0, trace0, energy0) = (start.masses.clone(), start.trace, start.energy);
    let mut conservation = Conservation {
        max_mass_drift: 0.0,
        max_trace_drift: 0.0,
        max_energy_drift: 0.0,
    };
    for s in 1..=steps {
        sim.step(w, config.dt, config.scheme)?;
        let (_, sup) = sim.masses_and_sup(s)?;
        if sup > config.blow_up_threshold {
            return Err(CoreError::BlowUp {
                step: s,
                sup,
                threshold: config.blow_up_threshold,
            });
        }
        if s % config.output_every == 0 || s == steps {
            let point = sim.observe(w, state0.time + s as f64 * config.dt)?;
            for (j, (&m_now, &m_start)) in point.masses.iter().zip(&mass0).enumerate() {
                if m_start > 0.0 {
                    let drift = (m_now - m_start).abs() / m_start;
                    if drift > conservation.max_mass_drift {
                        conservation.max_mass_drift = drift;
                    }
                } else if m_now != 0.0 {
                    conservation.max_mass_drift = f64::INFINITY;
                }
                let _ = j;
            }
            if trace0 > 0.0 {
                conservation.max_trace_drift = conservation
                    .max_trace_drift
                    .max((point.trace - trace0).abs() / trace0);
            }
            let scale = if energy0.abs() > 0.0 { energy0.abs() } else { 1.0 };
            conservation.max_energy_drift = conservation
                .max_energy_drift
                .max((point.energy - energy0).abs() / scale);
            trajectory.push(point);
        }
    }
    Ok(HartreeSolution {
        state: sim.into_state(state0.time + steps as f64 * config.dt)?,
        trajectory,
        conservation,
        grid_m: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::evolve;

    fn two_mode_system() -> HartreeState {
        // u_1 = 1 + e^{2 pi i x}, u_2 = e^{-2 pi i x} - 1/2, nu = (1, 1/2).
        let mut u1 = FourierState::new(1).unwrap();
        u1.set(vec![0], Complex64::new(1.0, 0.0)).unwrap();
        u1.set(vec![1], Complex64::new(1.0, 0.0)).unwrap();
        let mut u2 = FourierState::new(1).unwrap();
        u2.set(vec![-1], Complex64::new(1.0, 0.0)).unwrap();
        u2.set(vec![0], Complex64::new(-0.5, 0.0)).unwrap();
        HartreeState::new(vec![u1, u2], vec![1.0, 0.5]).unwrap()
    }

    fn coeff_distance(a: &FourierState, b: &FourierState) -> f64 {
        let mut sum = 0.0;
        for (k, &va) in a.iter() {
            sum += (va - b.coeff(k)).norm_sqr();
        }
        for (k, &vb) in b.iter() {
            if a.coeff(k) == Complex64::new(0.0, 0.0) {
                sum += vb.norm_sqr();
            }
        }
        sum.sqrt()
    }

    #[test]
    fn density_of_two_mode_state_matches_expansion() {
        // |1 + e^{2 pi i x}|^2 = 2 + 2 cos(2 pi x).
        let mut u = FourierState::new(1).unwrap();
        u.set(vec![0], Complex64::new(1.0, 0.0)).unwrap();
        u.set(vec![1], Complex64::new(1.0, 0.0)).unwrap();
        let state = HartreeState::new(vec![u], vec![1.0]).unwrap();
        let m = 16;
        let rho = compute_density(&state, m).unwrap();
        for (i, &r) in rho.iter().enumerate() {
            let x = i as f64 / m as f64;
            let expect = 2.0 + 2.0 * (2.0 * std::f64::consts::PI * x).cos();
            assert!((r - expect).abs() < 1e-12);
        }
        assert!(compute_density(&state, 4).is_err());
    }

    #[test]
    fn multiplier_scales_single_frequencies() {
        // rho = cos(2 pi x), a = 0, d = 1: W rho = 2^{-1/2} cos(2 pi x).
        let m = 16;
        let rho: Vec<f64> = (0..m)
            .map(|i| (2.0 * std::f64::consts::PI * i as f64 / m as f64).cos())
            .collect();
        let wr = apply_potential(&rho, 1, m, &PotentialSpec::Multiplier { a: 0.0 }).unwrap();
        for (v, r) in wr.iter().zip(&rho) {
            assert!((v - r / 2.0f64.sqrt()).abs() < 1e-12);
        }
        // Constant density is fixed by the multiplier (symbol 1 at k = 0).
        let c = apply_potential(&vec![0.7; m], 1, m, &PotentialSpec::Multiplier { a: 0.3 }).unwrap();
        assert!(c.iter().all(|v| (v - 0.7).abs() < 1e-12));
        let z = apply_potential(&rho, 1, m, &PotentialSpec::Zero).unwrap();
        assert!(z.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_data_follows_the_closed_form_phase() {
        // u = c: rho = nu c^2 is constant, W rho = rho, and every step only
        // rotates the phase: u(T) = c e^{-2 pi i nu c^2 T}.
        let c = 1.3f64;
        let nu = 0.7f64;
        let mut u = FourierState::new(1).unwrap();
        u.set(vec![0], Complex64::new(c, 0.0)).unwrap();
        let state = HartreeState::new(vec![u], vec![nu]).unwrap();
        let prop = PropagatorSpec::fractional(2.0).unwrap();
        let config = SolverConfig::new(1e-3, 0.1, Scheme::Strang, 8).unwrap();
        let out = solve(&state, &PotentialSpec::Multiplier { a: 0.0 }, &prop, &config).unwrap();
        let expect = Complex64::new(c, 0.0) * unit_phase(-nu * c * c * 0.1);
        let got = out.state.states[0].coeff(&[0]);
        assert!((got - expect).norm() < 1e-12);
        assert!(out.conservation.max_energy_drift < 1e-12);
    }

    #[test]
    fn zero_potential_reduces_to_free_evolution() {
        let state = two_mode_system();
        let prop = PropagatorSpec::fractional(2.0).unwrap();
        let config = SolverConfig::new(1e-3, 0.1, Scheme::Strang, 32).unwrap();
        let out = solve(&state, &PotentialSpec::Zero, &prop, &config).unwrap();
        for (u0, u_t) in state.states.iter().zip(&out.state.states) {
            let free = evolve(u0, -0.1, &prop);
            assert!(coeff_distance(u_t, &free) < 1e-12);
        }
        assert!(out.conservation.max_energy_drift < 1e-12);
    }

    #[test]
    fn masses_and_trace_are_conserved() {
        let state = two_mode_system();
        let prop = PropagatorSpec::fractional(2.0).unwrap();
        let config = SolverConfig::new(1e-3, 0.1, Scheme::Strang, 32).unwrap();
        let out = solve(&state, &PotentialSpec::Multiplier { a: 0.0 }, &prop, &config).unwrap();
        assert!(out.conservation.max_mass_drift < 1e-10);
        assert!(out.conservation.max_trace_drift < 1e-10);
        assert_eq!(out.grid_m, 32);
    }

    #[test]
    fn constant_potential_shift_leaves_the_density_alone() {
        // Kernel c delta_0 sends rho to c mean(rho) = c trace: a constant,
        // which only rotates a global phase.
        let state = two_mode_system();
        let prop = PropagatorSpec::fractional(2.0).unwrap();
        let config = SolverConfig::new(1e-3, 0.05, Scheme::Strang, 32).unwrap();
        let mut kernel = FourierState::new(1).unwrap();
        kernel.set(vec![0], Complex64::new(2.5, 0.0)).unwrap();
        let shifted = solve(
            &state,
            &PotentialSpec::explicit(kernel).unwrap(),
            &prop,
            &config,
        )
        .unwrap();
        let free = solve(&state, &PotentialSpec::Zero, &prop, &config).unwrap();
        // The evolved support fills the solve grid, so the quadratic needs a
        // wider alias-free grid here.
        let m = 128;
        let rho_a = compute_density(&shifted.state, m).unwrap();
        let rho_b = compute_density(&free.state, m).unwrap();
        for (a, b) in rho_a.iter().zip(&rho_b) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn single_step_matches_solve_composition() {
        let state = two_mode_system();
        let prop = PropagatorSpec::fractional(2.0).unwrap();
        let w = PotentialSpec::Multiplier { a: 0.0 };
        let stepped = step(&state, &w, &prop, 1e-3, Scheme::Lie).unwrap();
        let mass0: f64 = state.states[0].l2_norm_sq();
        let mass1: f64 = stepped.states[0].l2_norm_sq();
        assert!((mass0 - mass1).abs() < 1e-12);
        assert!((stepped.time - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn blow_up_threshold_aborts_with_the_step_index() {
        let state = two_mode_system();
        let prop = PropagatorSpec::fractional(2.0).unwrap();
        let mut config = SolverConfig::new(1e-3, 0.1, Scheme::Strang, 32).unwrap();
        config.blow_up_threshold = 1.0;
        let err = solve(&state, &PotentialSpec::Zero, &prop, &config).unwrap_err();
        match err {
            CoreError::BlowUp { step, .. } => assert_eq!(step, 1),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn explicit_kernel_must_be_conjugate_symmetric() {
        let mut bad = FourierState::new(1).unwrap();
        bad.set(vec![1], Complex64::new(1.0, 0.0)).unwrap();
        assert!(PotentialSpec::explicit(bad).is_err());
        let mut good = FourierState::new(1).unwrap();
        good.set(vec![1], Complex64::new(0.5, 0.25)).unwrap();
        good.set(vec![-1], Complex64::new(0.5, -0.25)).unwrap();
        assert!(PotentialSpec::explicit(good).is_ok());
    }

    #[test]
    fn rejects_negative_weights() {
        let mut u = FourierState::new(1).unwrap();
        u.set(vec![0], Complex64::new(1.0, 0.0)).unwrap();
        assert!(HartreeState::new(vec![u], vec![-1.0]).is_err());
    }
}
