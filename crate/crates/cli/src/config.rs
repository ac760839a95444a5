//! Run configuration: JSON schema, validation, canonical hashing.
//!
//! The schema is strict (unknown fields and experiment names are rejected)
//! and every threshold that feeds a pass/fail verdict comes from the config
//! itself, so a summary row can always be traced back to a written-down
//! tolerance.

use serde::Deserialize;
use std::path::PathBuf;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: String,
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    pub experiments: Vec<ExperimentSpec>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.version != "1" {
            return Err(format!(
                "unsupported config version {:?} (expected \"1\")",
                self.version
            ));
        }
        for (i, e) in self.experiments.iter().enumerate() {
            e.validate()
                .map_err(|m| format!("experiment {} ({}): {}", i, e.name(), m))?;
        }
        Ok(())
    }
}

/// Profile of the amplitude function used by the decoupling experiment; the
/// random variant draws its phases from the run seed.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileSpec {
    Constant,
    RandomPhase,
}

impl ProfileSpec {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::RandomPhase => "random_phase",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentSpec {
    /// Density of the full frequency-ball system: exact count identity plus
    /// the count-versus-cutoff slope.
    WeylSaturation {
        dim: usize,
        p: f64,
        q: f64,
        cutoffs: Vec<u64>,
        identity_tolerance: f64,
        expected_slope: f64,
        tolerance: f64,
    },
    /// Windowed norm of the focusing wave packet against its scaling law.
    PacketLowerBound {
        dim: usize,
        alpha: f64,
        p: f64,
        q: f64,
        cutoffs: Vec<u64>,
        samples: usize,
        expected_slope: f64,
        tolerance: f64,
    },
    /// Sphere-of-frequencies eigenfunction: exact norm and peak identities.
    ShellEigenfunction {
        dim: usize,
        q: f64,
        cutoffs: Vec<u64>,
        samples: usize,
    },
    /// Zonal harmonics on the two-sphere: normalization check plus the
    /// slope of the summed-density norm.
    ZonalSphere {
        cutoffs: Vec<u64>,
        p: f64,
        q: f64,
        norm_check_degree: u64,
        norm_tolerance: f64,
        expected_slope: f64,
        tolerance: f64,
    },
    /// Lower bound on shell sums near the time-frequency origin.
    ClusterConcentration {
        dim: usize,
        alpha: f64,
        levels: Vec<u64>,
        width: f64,
        min_ratio: f64,
    },
    /// Square-function ratio across dyadic scales; passes while the growth
    /// stays below (scale step)^growth_exponent.
    Decoupling {
        dim: usize,
        alpha: f64,
        p: f64,
        deltas: Vec<f64>,
        profile: ProfileSpec,
        growth_exponent: f64,
    },
    /// Averaged exponential-sum ratio over a large ball.
    DiscreteRestriction {
        dim: usize,
        alpha: f64,
        p: f64,
        cutoffs: Vec<u64>,
        trials: usize,
        samples: usize,
        expected_slope: f64,
        tolerance: f64,
    },
    /// Two-sided sampling of the system constant against its dual.
    DualityProbe {
        rows: usize,
        cols: usize,
        p: f64,
        q: f64,
        beta: f64,
        operators: usize,
        systems_per_operator: usize,
        grid_time: usize,
        grid_space: usize,
        tolerance: f64,
    },
}

impl ExperimentSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::WeylSaturation { .. } => "weyl_saturation",
            Self::PacketLowerBound { .. } => "packet_lower_bound",
            Self::ShellEigenfunction { .. } => "shell_eigenfunction",
            Self::ZonalSphere { .. } => "zonal_sphere",
            Self::ClusterConcentration { .. } => "cluster_concentration",
            Self::Decoupling { .. } => "decoupling",
            Self::DiscreteRestriction { .. } => "discrete_restriction",
            Self::DualityProbe { .. } => "duality_probe",
        }
    }

    /// Deterministic parameter echo; semicolon-separated so it never needs
    /// CSV quoting.
    pub fn params(&self) -> String {
        match self {
            Self::WeylSaturation {
                dim,
                p,
                q,
                cutoffs,
                ..
            } => format!("d={dim};p={p};q={q};N={}", join(cutoffs)),
            Self::PacketLowerBound {
                dim,
                alpha,
                p,
                q,
                cutoffs,
                samples,
                ..
            } => format!(
                "d={dim};alpha={alpha};p={p};q={q};N={};samples={samples}",
                join(cutoffs)
            ),
            Self::ShellEigenfunction {
                dim,
                q,
                cutoffs,
                samples,
            } => format!("d={dim};q={q};N={};samples={samples}", join(cutoffs)),
            Self::ZonalSphere {
                cutoffs,
                p,
                q,
                norm_check_degree,
                ..
            } => format!(
                "p={p};q={q};N={};norm_degree={norm_check_degree}",
                join(cutoffs)
            ),
            Self::ClusterConcentration {
                dim,
                alpha,
                levels,
                width,
                min_ratio,
            } => format!(
                "d={dim};alpha={alpha};j={};width={width};min_ratio={min_ratio}",
                join(levels)
            ),
            Self::Decoupling {
                dim,
                alpha,
                p,
                deltas,
                profile,
                growth_exponent,
            } => {
                let ds: Vec<String> = deltas.iter().map(|d| d.to_string()).collect();
                format!(
                    "d={dim};alpha={alpha};p={p};delta={};profile={};growth={growth_exponent}",
                    ds.join("/"),
                    profile.label()
                )
            }
            Self::DiscreteRestriction {
                dim,
                alpha,
                p,
                cutoffs,
                trials,
                samples,
                ..
            } => format!(
                "d={dim};alpha={alpha};p={p};N={};trials={trials};samples={samples}",
                join(cutoffs)
            ),
            Self::DualityProbe {
                rows,
                cols,
                p,
                q,
                beta,
                operators,
                systems_per_operator,
                grid_time,
                grid_space,
                ..
            } => format!(
                "rows={rows};cols={cols};p={p};q={q};beta={beta};ops={operators};systems={systems_per_operator};grid={grid_time}x{grid_space}"
            ),
        }
    }

    fn validate(&self) -> Result<(), String> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 {
                Ok(())
            } else {
                Err(format!("{what} must be positive, got {v}"))
            }
        };
        match self {
            Self::WeylSaturation {
                identity_tolerance,
                tolerance,
                ..
            } => {
                positive(*identity_tolerance, "identity_tolerance")?;
                positive(*tolerance, "tolerance")
            }
            Self::PacketLowerBound { tolerance, .. } => positive(*tolerance, "tolerance"),
            Self::ShellEigenfunction { .. } => Ok(()),
            Self::ZonalSphere {
                norm_tolerance,
                tolerance,
                ..
            } => {
                positive(*norm_tolerance, "norm_tolerance")?;
                positive(*tolerance, "tolerance")
            }
            Self::ClusterConcentration { min_ratio, .. } => positive(*min_ratio, "min_ratio"),
            Self::Decoupling {
                growth_exponent, ..
            } => positive(*growth_exponent, "growth_exponent"),
            Self::DiscreteRestriction { tolerance, .. } => positive(*tolerance, "tolerance"),
            Self::DualityProbe {
                rows,
                grid_time,
                grid_space,
                operators,
                systems_per_operator,
                tolerance,
                ..
            } => {
                if *rows != grid_time * grid_space {
                    return Err(format!(
                        "rows ({rows}) must equal grid_time * grid_space ({})",
                        grid_time * grid_space
                    ));
                }
                if *operators == 0 || *systems_per_operator == 0 {
                    return Err("operators and systems_per_operator must be at least 1".into());
                }
                positive(*tolerance, "tolerance")
            }
        }
    }
}

fn join(values: &[u64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    parts.join("/")
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Hash of the canonicalized config: parse to a JSON value (object keys are
/// kept sorted), apply the seed override, re-serialize compactly, FNV-1a the
/// bytes. Whitespace and key order in the source file do not matter; the
/// effective seed does.
pub fn canonical_hash(raw: &str, seed_override: Option<u64>) -> serde_json::Result<u64> {
    let mut value: serde_json::Value = serde_json::from_str(raw)?;
    if let (Some(seed), Some(obj)) = (seed_override, value.as_object_mut()) {
        obj.insert("seed".to_string(), seed.into());
    }
    Ok(fnv1a64(value.to_string().as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_matches_reference_vectors() {
        // Published FNV-1a test vectors.
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn canonical_hash_ignores_whitespace_and_key_order() {
        let a = r#"{"version": "1", "seed": 3, "experiments": []}"#;
        let b = "{\n  \"experiments\": [],\n  \"seed\": 3,\n  \"version\": \"1\"\n}";
        assert_eq!(
            canonical_hash(a, None).unwrap(),
            canonical_hash(b, None).unwrap()
        );
        assert_ne!(
            canonical_hash(a, None).unwrap(),
            canonical_hash(a, Some(4)).unwrap()
        );
        assert_eq!(
            canonical_hash(a, Some(3)).unwrap(),
            canonical_hash(a, None).unwrap()
        );
    }

    #[test]
    fn unknown_experiment_names_are_rejected() {
        let text = r#"{
            "version": "1",
            "seed": 1,
            "experiments": [ { "name": "no_such_thing" } ]
        }"#;
        let err = serde_json::from_str::<RunConfig>(text).unwrap_err();
        assert!(err.to_string().contains("unknown variant"));
        assert!(err.line() > 1);
    }

    #[test]
    fn version_and_duality_shape_are_checked() {
        let bad_version: RunConfig = serde_json::from_str(
            r#"{"version": "2", "seed": 1, "experiments": []}"#,
        )
        .unwrap();
        assert!(bad_version.validate().is_err());

        let bad_grid: RunConfig = serde_json::from_str(
            r#"{"version": "1", "seed": 1, "experiments": [
                {"name": "duality_probe", "rows": 9, "cols": 4, "p": 4.0, "q": 4.0,
                 "beta": 2.0, "operators": 1, "systems_per_operator": 1,
                 "grid_time": 2, "grid_space": 4, "tolerance": 0.001}
            ]}"#,
        )
        .unwrap();
        assert!(bad_grid.validate().unwrap_err().contains("grid_time"));
    }
}
