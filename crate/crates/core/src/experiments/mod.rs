//! Threshold sweeps, packing extraction, and richness-driven dominance
//! experiments at desk scale.

mod packing;
mod sweep;

pub use packing::{packing_extract, PackingConfig, PackingReport};
pub use sweep::{threshold_sweep, CRule, Method, PGrid, SweepCell, SweepReport, SweepSpec};

// The binomial lower-tail sum is a statistical utility; re-exported here
// because the experiment recipes sanity-check the tail lemma with it.
pub use crate::stats::binomial_lower_tail as binomial_tail;

use crate::coupling::{check_dominance, CouplingError, DominanceConfig, DominanceReport, FamilyKind, RichFamily};
use crate::model::{coupled_q, ham_ell_edge_count, ModelParams};
use serde::Serialize;

/// Dominance experiment wired with the richness parameterization
/// c = ceil((1+eps) m), q = cp / (c - m + 1).
#[derive(Clone, Debug, Serialize)]
pub struct RichExperimentReport {
    pub family: String,
    pub m: usize,
    pub eps: f64,
    pub c: u32,
    pub ell: u32,
    pub q: f64,
    pub dominance: DominanceReport,
}

/// Structure size m for the family kind on n vertices.
fn structure_size(kind: FamilyKind, n: usize, k: usize) -> Result<usize, CouplingError> {
    match kind {
        FamilyKind::Triangle => Ok(3),
        FamilyKind::PerfectMatching => ham_ell_edge_count(n, k, 0).map_err(CouplingError::Model),
        FamilyKind::HamiltonCycle => Ok(n),
        FamilyKind::HamiltonEllCycle { ell } => {
            ham_ell_edge_count(n, k, ell).map_err(CouplingError::Model)
        }
    }
}

/// Runs the dominance check with c = ceil((1+eps) m) colors. The richness is
/// recomputed from the palette (c - m + 1 >= eps m + 1), never assumed.
pub fn rich_experiment(
    kind: FamilyKind,
    n: usize,
    k: usize,
    p: f64,
    eps: f64,
    cfg: &DominanceConfig,
) -> Result<RichExperimentReport, CouplingError> {
    let m = structure_size(kind, n, k)?;
    let c = ((1.0 + eps) * m as f64).ceil() as u32;
    let fam = RichFamily::new(kind, n, k, c)?;
    let ell = fam.ell();
    let q = coupled_q(c, p, ell)?;
    let params = ModelParams::new(n, k, p, c, cfg.seed).map_err(CouplingError::Model)?;
    let dominance = check_dominance(&params, &fam, cfg)?;
    Ok(RichExperimentReport {
        family: fam.name(),
        m,
        eps,
        c,
        ell,
        q,
        dominance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rich_pm_parameterization_matches_hand_values() {
        // n=6, eps=0.5: m=3, c=ceil(4.5)=5, richness 3, q=5p/3
        let cfg = DominanceConfig {
            trials: 2_000,
            ..DominanceConfig::default()
        };
        let rep =
            rich_experiment(FamilyKind::PerfectMatching, 6, 2, 0.3, 0.5, &cfg).unwrap();
        assert_eq!(rep.m, 3);
        assert_eq!(rep.c, 5);
        assert_eq!(rep.ell, 3);
        assert!((rep.q - 5.0 * 0.3 / 3.0).abs() < 1e-12);
        assert!(!rep.dominance.violation);
    }

    #[test]
    fn eps_zero_is_allowed() {
        // c = m, richness 1, q = cp
        let cfg = DominanceConfig {
            trials: 500,
            ..DominanceConfig::default()
        };
        let rep = rich_experiment(FamilyKind::PerfectMatching, 4, 2, 0.2, 0.0, &cfg).unwrap();
        assert_eq!(rep.c, 2);
        assert_eq!(rep.ell, 1);
        assert!((rep.q - 2.0 * 0.2).abs() < 1e-12);
    }

    #[test]
    fn q_above_one_is_refused() {
        let cfg = DominanceConfig::default();
        let err = rich_experiment(FamilyKind::PerfectMatching, 6, 2, 0.9, 0.5, &cfg)
            .unwrap_err();
        assert!(matches!(
            err,
            CouplingError::Model(crate::model::ModelError::CouplingInapplicable { .. })
        ));
    }
}
