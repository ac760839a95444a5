//! Scaling experiments: each submodule builds a named example family, sweeps
//! a cutoff, measures a norm through the same code paths the library exposes,
//! and fits the measured exponent for comparison against a predicted slope.
//! Predictions always come from the caller; the measurement path never
//! consults them.

pub mod cluster;
pub mod decoupling;
pub mod duality;
pub mod packet;
pub mod restriction;
pub mod shell;
pub mod weyl;
pub mod zonal;

pub use crate::fitting::{fit_exponent, ExponentFit};
pub use cluster::{torus_cluster_experiment, ClusterEntry, ClusterReport};
pub use decoupling::{
    decoupling_ratio, decoupling_sweep, DecouplingInstance, DecouplingReport, GProfile,
};
pub use duality::{duality_probe, DualityReport, ProbeGrid};
pub use packet::{packet_experiment, PacketReport};
pub use restriction::{
    discrete_restriction_experiment, discrete_restriction_ratio, RestrictionReport,
};
pub use shell::{shell_eigenfunction_experiment, ShellEntry, ShellReport};
pub use weyl::{weyl_saturation_experiment, WeylReport};
pub use zonal::{zonal_sphere_experiment, ZonalReport};

use crate::{CoreError, Result};

/// Slope sweeps need at least three strictly increasing cutoffs.
pub(crate) fn validate_cutoffs(cutoffs: &[u64]) -> Result<()> {
    if cutoffs.len() < 3 {
        return Err(CoreError::BadParameter(format!(
            "need at least 3 cutoffs, got {}",
            cutoffs.len()
        )));
    }
    if cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CoreError::BadParameter(
            "cutoffs must be strictly increasing".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_validation() {
        assert!(validate_cutoffs(&[8, 16, 32]).is_ok());
        assert!(validate_cutoffs(&[8, 16]).is_err());
        assert!(validate_cutoffs(&[8, 8, 16]).is_err());
        assert!(validate_cutoffs(&[16, 8, 32]).is_err());
    }
}
