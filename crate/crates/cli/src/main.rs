//! dispersia: scaling experiments for frequency-localized evolutions on the
//! torus, plus a split-step solver for the self-consistent density flow.
//!
//! Exit codes: 0 success, 1 a computed check failed (or blow-up), 2 the
//! request itself was invalid (flags, config file, parameters).

mod config;
mod fixtures_cmd;
mod hartree_cmd;
mod runner;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{canonical_hash, RunConfig};
use dispersia_core::lattice::{ball_count, count_representations, enumerate_shell};
use dispersia_core::CoreError;
use hartree_cmd::HartreeConfig;
use runner::{fmt_float, render, run_experiment};

#[derive(Parser)]
#[command(
    name = "dispersia",
    version,
    about = "Scaling experiments for frequency-localized evolutions on the torus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch of experiments from a JSON config and write artifacts.
    Run {
        /// Path to the run config.
        config: PathBuf,
        /// Override the seed recorded in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output directory from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lattice point counting.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Evolve weighted states under the self-consistent potential.
    Hartree {
        #[command(subcommand)]
        command: HartreeCommand,
    },
    /// Canonical coefficient fixtures.
    Fixtures {
        #[command(subcommand)]
        command: FixturesCommand,
    },
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Print a lattice point count or a representation number.
    Count(CountArgs),
}

#[derive(clap::Args)]
struct CountArgs {
    /// Lattice dimension.
    #[arg(long = "d")]
    d: usize,
    /// Radius: counts integer points with |k| <= N (ball) or |k| = N (shell).
    #[arg(long = "N")]
    n: Option<u64>,
    /// With --reps: representations of R as an ordered signed sum of d squares.
    #[arg(long = "R")]
    r: Option<u64>,
    /// Count representations of --R instead of points up to a radius.
    #[arg(long)]
    reps: bool,
    #[arg(long, value_enum, default_value_t = Shape::Ball)]
    shape: Shape,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Ball,
    Shell,
}

#[derive(Subcommand)]
enum HartreeCommand {
    /// Integrate a config; writes trajectory.csv and conservation.json.
    Run {
        config: PathBuf,
        /// Override the output directory from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FixturesCommand {
    /// Write the canonical fixture files.
    Emit {
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    if let Err(code) = init_threads() {
        return code;
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, seed, out } => cmd_run(&config, seed, out),
        Command::Lattice {
            command: LatticeCommand::Count(args),
        } => cmd_lattice_count(&args),
        Command::Hartree {
            command: HartreeCommand::Run { config, out },
        } => cmd_hartree_run(&config, out),
        Command::Fixtures {
            command: FixturesCommand::Emit { out },
        } => cmd_fixtures_emit(&out),
    }
}

/// DISPERSIA_THREADS caps worker parallelism; results never depend on it.
fn init_threads() -> Result<(), ExitCode> {
    match std::env::var("DISPERSIA_THREADS") {
        Ok(v) => match v.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
                Ok(())
            }
            _ => {
                eprintln!("DISPERSIA_THREADS must be a positive integer, got {v:?}");
                Err(ExitCode::from(2))
            }
        },
        Err(_) => Ok(()),
    }
}

fn cmd_run(path: &Path, seed_override: Option<u64>, out_override: Option<PathBuf>) -> ExitCode {
    let raw = match fs::read_to_string(path) {
        Ok(raw) => raw,
        Err(e) => {
            eprintln!("{}: {}", path.display(), e);
            return ExitCode::from(2);
        }
    };
    // Parse straight from the text so errors stay line-anchored; nothing is
    // written unless the whole config is good.
    let config: RunConfig = match serde_json::from_str(&raw) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("{}: {}", path.display(), e);
            return ExitCode::from(2);
        }
    };
    if let Err(msg) = config.validate() {
        eprintln!("{}: {}", path.display(), msg);
        return ExitCode::from(2);
    }
    let seed = seed_override.unwrap_or(config.seed);
    let hash = canonical_hash(&raw, seed_override).expect("config already parsed");
    let out_dir = out_override.unwrap_or_else(|| config.output_dir.clone());

    let mut outcomes = Vec::with_capacity(config.experiments.len());
    for (i, spec) in config.experiments.iter().enumerate() {
        match run_experiment(spec, seed) {
            Ok(outcome) => outcomes.push(outcome),
            Err(e) => {
                eprintln!("experiment {} ({}): {}", i, spec.name(), e);
                return ExitCode::from(2);
            }
        }
    }

    let artifacts = render(&outcomes, seed, hash);
    if let Err(e) = write_artifacts(&out_dir, &artifacts) {
        eprintln!("writing {}: {}", out_dir.display(), e);
        return ExitCode::from(1);
    }

    let mut all_pass = true;
    for o in &outcomes {
        if !o.pass {
            all_pass = false;
            eprintln!(
                "FAIL {} {} headline={} ({})",
                o.name,
                o.params,
                fmt_float(o.headline),
                o.detail
            );
        }
    }
    println!(
        "{} experiment(s), {}; artifacts in {}",
        outcomes.len(),
        if all_pass { "all pass" } else { "FAILURES" },
        out_dir.display()
    );
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn write_artifacts(dir: &Path, artifacts: &runner::Artifacts) -> std::io::Result<()> {
    fs::create_dir_all(dir.join("plotdata"))?;
    fs::write(dir.join("results.csv"), &artifacts.results_csv)?;
    fs::write(dir.join("summary.json"), &artifacts.summary_json)?;
    fs::write(dir.join("timings.csv"), &artifacts.timings_csv)?;
    for (name, contents) in &artifacts.plots {
        fs::write(dir.join("plotdata").join(name), contents)?;
    }
    Ok(())
}

fn cmd_lattice_count(args: &CountArgs) -> ExitCode {
    let result = match (args.n, args.r, args.reps) {
        (Some(n), None, false) => match args.shape {
            Shape::Ball => ball_count(args.d, n),
            Shape::Shell => enumerate_shell(args.d, n).map(|s| s.len() as u64),
        },
        (None, Some(r), true) => count_representations(args.d, r),
        _ => {
            eprintln!("pass either --N [--shape ball|shell] or --R together with --reps");
            return ExitCode::from(2);
        }
    };
    match result {
        Ok(count) => {
            println!("{count}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

fn cmd_hartree_run(path: &Path, out_override: Option<PathBuf>) -> ExitCode {
    let raw = match fs::read_to_string(path) {
        Ok(raw) => raw,
        Err(e) => {
            eprintln!("{}: {}", path.display(), e);
            return ExitCode::from(2);
        }
    };
    let config: HartreeConfig = match serde_json::from_str(&raw) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("{}: {}", path.display(), e);
            return ExitCode::from(2);
        }
    };
    let prepared = match hartree_cmd::prepare(&config, out_override) {
        Ok(prepared) => prepared,
        Err(e) => {
            eprintln!("{}: {}", path.display(), e);
            return ExitCode::from(2);
        }
    };
    let solution = match hartree_cmd::run(&prepared) {
        Ok(solution) => solution,
        Err(e @ (CoreError::BlowUp { .. } | CoreError::NonFinite(_))) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = hartree_cmd::write_outputs(&prepared.output_dir, &solution) {
        eprintln!("writing {}: {}", prepared.output_dir.display(), e);
        return ExitCode::from(1);
    }
    println!(
        "steps to t={}: grid_m={} mass_drift={} trace_drift={} energy_drift={}; outputs in {}",
        fmt_float(solution.state.time),
        solution.grid_m,
        fmt_float(solution.conservation.max_mass_drift),
        fmt_float(solution.conservation.max_trace_drift),
        fmt_float(solution.conservation.max_energy_drift),
        prepared.output_dir.display()
    );
    ExitCode::SUCCESS
}

fn cmd_fixtures_emit(dir: &Path) -> ExitCode {
    match fixtures_cmd::emit(dir) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("writing {}: {}", dir.display(), e);
            ExitCode::from(1)
        }
    }
}
