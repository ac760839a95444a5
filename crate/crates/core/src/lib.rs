//! Numerical laboratory for dispersive evolution on flat tori and the sphere.
//!
//! The crate is organized around a small pipeline:
//!
//! - [`lattice`]: exact integer lattice enumeration and representation counts,
//!   the combinatorial backbone for every torus construction.
//! - [`field`]: sparse Fourier-side states, smooth frequency cutoffs,
//!   Littlewood-Paley pieces, and dispersive propagator phases.
//! - [`grid`]: space-time sampling grids, synthesis of fields onto them, and
//!   weighted densities of state systems.
//! - [`norms`]: mixed Lebesgue norms by rectangle-rule quadrature, Gram
//!   matrices, and Schatten norms of finite operators.
//! - [`fitting`]: log-log least-squares exponent fits.
//! - [`sphere`]: Legendre machinery for zonal spherical harmonics.
//! - [`experiments`]: the measurement drivers (wave packets, Weyl saturation,
//!   shell eigenfunctions, spectral clusters, zonal sums, decoupling ratios,
//!   discrete restriction, operator duality probes).
//! - [`hartree`]: a pseudospectral split-step solver for coupled systems with
//!   a self-consistent convolution potential.
//!
//! Everything that consumes randomness takes an explicit 64-bit seed, and all
//! parallel reductions run over a fixed chunk structure, so results do not
//! depend on thread count.

// Validation guards are written `!(x >= bound)` so that NaN input fails them;
// the positive comparison would silently accept it.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Experiment drivers take every sweep parameter positionally.
#![allow(clippy::too_many_arguments)]

pub mod error;
pub mod fft;
pub mod field;
pub mod fitting;
pub mod grid;
pub mod hartree;
pub mod lattice;
pub mod norms;
pub mod parallel;
pub mod sphere;

pub mod experiments;

pub use error::CoreError;

/// Convenience alias used throughout the crate.
pub type Complex64 = num_complex::Complex<f64>;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, CoreError>;
