//! The `hartree run` subcommand: JSON config in, trajectory CSV and a
//! conservation summary out.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use dispersia_core::field::{FourierState, PropagatorSpec};
use dispersia_core::hartree::{
    solve, HartreeSolution, HartreeState, PotentialSpec, Scheme, SolverConfig,
};
use dispersia_core::{CoreError, Result};

use crate::runner::fmt_float;

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeSpec {
    Strang,
    Lie,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DispersionSpec {
    Fractional { alpha: f64 },
    KleinGordon { mass: f64 },
    Wave,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialJson {
    Zero,
    Multiplier { a: f64 },
    /// Kernel in the coefficient fixture format.
    Explicit { kernel: serde_json::Value },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HartreeConfig {
    pub version: String,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: SchemeSpec,
    #[serde(default)]
    pub grid_m: usize,
    #[serde(default = "default_stride")]
    pub output_every: usize,
    #[serde(default = "default_blow_up")]
    pub blow_up_threshold: f64,
    pub dispersion: DispersionSpec,
    pub potential: PotentialJson,
    pub weights: Vec<f64>,
    /// One coefficient fixture per state.
    pub states: Vec<serde_json::Value>,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
}

fn default_stride() -> usize {
    1
}

fn default_blow_up() -> f64 {
    1e6
}

fn default_out() -> PathBuf {
    PathBuf::from("hartree_out")
}

pub struct Prepared {
    pub state: HartreeState,
    pub potential: PotentialSpec,
    pub propagator: PropagatorSpec,
    pub solver: SolverConfig,
    pub output_dir: PathBuf,
}

pub fn prepare(config: &HartreeConfig, out_override: Option<PathBuf>) -> Result<Prepared> {
    if config.version != "1" {
        return Err(CoreError::BadParameter(format!(
            "unsupported config version {:?} (expected \"1\")",
            config.version
        )));
    }
    let states = config
        .states
        .iter()
        .map(FourierState::from_fixture_value)
        .collect::<Result<Vec<_>>>()?;
    let state = HartreeState::new(states, config.weights.clone())?;
    let potential = match &config.potential {
        PotentialJson::Zero => PotentialSpec::Zero,
        PotentialJson::Multiplier { a } => PotentialSpec::Multiplier { a: *a },
        PotentialJson::Explicit { kernel } => {
            PotentialSpec::explicit(FourierState::from_fixture_value(kernel)?)?
        }
    };
    let propagator = match config.dispersion {
        DispersionSpec::Fractional { alpha } => PropagatorSpec::fractional(alpha)?,
        DispersionSpec::KleinGordon { mass } => PropagatorSpec::klein_gordon(mass)?,
        DispersionSpec::Wave => PropagatorSpec::wave(),
    };
    let mut solver = SolverConfig::new(
        config.dt,
        config.t_end,
        match config.scheme {
            SchemeSpec::Strang => Scheme::Strang,
            SchemeSpec::Lie => Scheme::Lie,
        },
        config.grid_m,
    )?;
    solver.output_every = config.output_every;
    solver.blow_up_threshold = config.blow_up_threshold;
    Ok(Prepared {
        state,
        potential,
        propagator,
        solver,
        output_dir: out_override.unwrap_or_else(|| config.output_dir.clone()),
    })
}

pub fn trajectory_csv(solution: &HartreeSolution) -> String {
    let mut csv = String::from("t,j,mass,trace,energy\n");
    for point in &solution.trajectory {
        for (j, mass) in point.masses.iter().enumerate() {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_float(point.time),
                j,
                fmt_float(*mass),
                fmt_float(point.trace),
                fmt_float(point.energy)
            ));
        }
    }
    csv
}

pub fn conservation_json(solution: &HartreeSolution) -> String {
    format!(
        "{{\n  \"max_mass_drift\": {},\n  \"max_trace_drift\": {},\n  \"max_energy_drift\": {},\n  \"grid_m\": {},\n  \"points\": {},\n  \"final_time\": {}\n}}\n",
        fmt_float(solution.conservation.max_mass_drift),
        fmt_float(solution.conservation.max_trace_drift),
        fmt_float(solution.conservation.max_energy_drift),
        solution.grid_m,
        solution.trajectory.len(),
        fmt_float(solution.state.time)
    )
}

pub fn run(prepared: &Prepared) -> Result<HartreeSolution> {
    solve(
        &prepared.state,
        &prepared.potential,
        &prepared.propagator,
        &prepared.solver,
    )
}

pub fn write_outputs(dir: &Path, solution: &HartreeSolution) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("trajectory.csv"), trajectory_csv(solution))?;
    fs::write(dir.join("conservation.json"), conservation_json(solution))?;
    Ok(())
}
