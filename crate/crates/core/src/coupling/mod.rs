//! The coupling interpolation between uncolored H^k(n,p) (edges carrying all
//! colors) and colored H^k_c(n,q), plus empirical dominance checks.
//!
//! The hybrid at index i keeps edges e_1..e_i (colex order) as singly-colored
//! edges present with probability q and the rest as multi-edges present with
//! probability p. i = 0 is the uncolored model with full multiplicity; i = N
//! is the colored model at q.

mod family;

pub use family::{hybrid_contains_generic, FamilyKind, RichFamily, RichnessSpotCheck};

use crate::combin::binomial;
use crate::model::{coupled_q, ModelError, ModelParams};
use crate::oracle::{exact_containment_probability, OracleError};
use crate::rng::{bounded, stream, unit_f64, StreamTag};
use crate::stats::{mean_ci, wilson_interval};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CouplingError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("interpolation index {i} out of range 0..={n_slots}")]
    BadIndex { i: u64, n_slots: u64 },
    #[error("family inconsistent with parameters: {0}")]
    FamilyMismatch(String),
    #[error(
        "claimed richness {claimed} overstated: edge {edge:?} of a sampled member \
         admits only {observed} recolorings"
    )]
    RichnessOverstated {
        claimed: u32,
        observed: u64,
        edge: Vec<u32>,
    },
    #[error("instance too large for generic hybrid containment: {0}")]
    SizeRefusal(String),
}

/// One sampled hybrid Gamma_i: singly-colored edges below the cut, full
/// multi-edges above it. Edges are colex ranks.
#[derive(Clone, Debug)]
pub struct HybridState {
    pub n: usize,
    pub k: usize,
    pub c: u32,
    pub i: u64,
    /// Present edges with index <= i, each carrying one color.
    pub single: Vec<(u64, u32)>,
    /// Present edges with index > i, each carrying all colors.
    pub multi: Vec<u64>,
}

/// Draws Gamma_i. Presence uses one uniform per edge shared by both zones
/// (common random numbers across i), colors use a second stream.
pub fn sample_hybrid(params: &ModelParams, q: f64, i: u64) -> Result<HybridState, CouplingError> {
    let n_slots = binomial(params.n, params.k);
    if i > n_slots {
        return Err(CouplingError::BadIndex { i, n_slots });
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(CouplingError::Model(ModelError::BadProbability(q)));
    }
    let mut single = Vec::new();
    let mut multi = Vec::new();
    for rank in 0..n_slots {
        let u = unit_f64(stream(params.seed, StreamTag::HybridPresence, rank));
        if rank < i {
            if u < q {
                let color = bounded(stream(params.seed, StreamTag::HybridColor, rank), params.c);
                single.push((rank, color));
            }
        } else if u < params.p {
            multi.push(rank);
        }
    }
    Ok(HybridState {
        n: params.n,
        k: params.k,
        c: params.c,
        i,
        single,
        multi,
    })
}

/// True iff some choice of one color per multi-edge makes the hybrid contain
/// a member of the family.
pub fn hybrid_contains(state: &HybridState, fam: &RichFamily) -> Result<bool, CouplingError> {
    fam.check_consistent(state.n, state.k, state.c)?;
    fam.hybrid_contains(state)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WilsonEstimate {
    pub successes: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub lo: f64,
    pub hi: f64,
}

fn wilson_estimate(successes: u64, trials: u64, confidence: f64) -> WilsonEstimate {
    let (lo, hi) = wilson_interval(successes, trials, confidence);
    WilsonEstimate {
        successes,
        trials,
        p_hat: successes as f64 / trials.max(1) as f64,
        lo,
        hi,
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LhsEstimate {
    Exact { value: f64 },
    MonteCarlo(WilsonEstimate),
}

impl LhsEstimate {
    /// Lower end of the estimate (the exact value when available).
    pub fn lower(&self) -> f64 {
        match self {
            LhsEstimate::Exact { value } => *value,
            LhsEstimate::MonteCarlo(w) => w.lo,
        }
    }

    pub fn point(&self) -> f64 {
        match self {
            LhsEstimate::Exact { value } => *value,
            LhsEstimate::MonteCarlo(w) => w.p_hat,
        }
    }
}

/// Empirical check of the dominance inequality
/// Pr[H^k(n,p) contains an uncolored member] <= Pr[H^k_c(n,q) contains a member].
#[derive(Clone, Debug, Serialize)]
pub struct DominanceReport {
    pub n: usize,
    pub k: usize,
    pub c: u32,
    pub p: f64,
    pub q: f64,
    pub ell: u32,
    pub family: String,
    pub richness: RichnessSpotCheck,
    pub lhs: LhsEstimate,
    pub rhs: WilsonEstimate,
    /// LHS point estimate does not exceed the RHS upper bound.
    pub consistent: bool,
    /// Statistically significant violation: LHS lower bound above RHS upper.
    pub violation: bool,
}

/// All knobs of the dominance check.
#[derive(Clone, Copy, Debug)]
pub struct DominanceConfig {
    pub trials: u64,
    pub confidence: f64,
    pub spot_check_members: u32,
    pub seed: u64,
}

impl Default for DominanceConfig {
    fn default() -> Self {
        DominanceConfig {
            trials: 100_000,
            confidence: 0.99,
            spot_check_members: 100,
            seed: 0,
        }
    }
}

pub fn check_dominance(
    params: &ModelParams,
    fam: &RichFamily,
    cfg: &DominanceConfig,
) -> Result<DominanceReport, CouplingError> {
    fam.check_consistent(params.n, params.k, params.c)?;
    // misuse guard: verify the claimed richness on sampled members first
    let richness = fam.spot_check_richness(cfg.spot_check_members, cfg.seed);
    if let Some((edge, observed)) = &richness.refutation {
        return Err(CouplingError::RichnessOverstated {
            claimed: fam.ell(),
            observed: *observed,
            edge: edge.clone(),
        });
    }
    let q = coupled_q(params.c, params.p, fam.ell())?;
    // LHS: uncolored containment at p
    let lhs = if binomial(params.n, params.k) <= 24 {
        LhsEstimate::Exact {
            value: exact_containment_probability(params, fam.structure())?,
        }
    } else {
        let successes: u64 = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let seed = stream(cfg.seed, StreamTag::TrialSeed, 2 * t);
                let draw = crate::model::generate(&params.with_seed(seed));
                u64::from(fam.contains_uncolored(&draw))
            })
            .sum();
        LhsEstimate::MonteCarlo(wilson_estimate(successes, cfg.trials, cfg.confidence))
    };
    // RHS: rainbow containment at q
    let q_params = ModelParams::new(params.n, params.k, q, params.c, params.seed)
        .expect("validated q");
    let successes: u64 = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let seed = stream(cfg.seed, StreamTag::TrialSeed, 2 * t + 1);
            let draw = crate::model::generate(&q_params.with_seed(seed));
            u64::from(fam.contains(&draw))
        })
        .sum();
    let rhs = wilson_estimate(successes, cfg.trials, cfg.confidence);
    Ok(DominanceReport {
        n: params.n,
        k: params.k,
        c: params.c,
        p: params.p,
        q,
        ell: fam.ell(),
        family: fam.name(),
        richness,
        consistent: lhs.point() <= rhs.hi,
        violation: lhs.lower() > rhs.hi,
        lhs,
        rhs,
    })
}

/// Paired (common-random-numbers) comparison of Pr[Gamma_i contains] against
/// Pr[Gamma_{i-1} contains], or the exact difference by full enumeration on
/// tiny instances.
#[derive(Clone, Debug, Serialize)]
pub struct StepwiseReport {
    pub i: u64,
    pub q: f64,
    pub trials: u64,
    pub exact: bool,
    pub p_prev: f64,
    pub p_cur: f64,
    pub diff: f64,
    /// Two-sided 99% half-width of the paired difference (0 when exact).
    pub ci99_half_width: f64,
}

/// Budget above which exact hybrid enumeration refuses.
const EXACT_ENUM_BUDGET: f64 = 2e7;

pub fn stepwise_monotonicity(
    params: &ModelParams,
    fam: &RichFamily,
    i: u64,
    trials: u64,
) -> Result<StepwiseReport, CouplingError> {
    fam.check_consistent(params.n, params.k, params.c)?;
    let n_slots = binomial(params.n, params.k);
    if i == 0 || i > n_slots {
        return Err(CouplingError::BadIndex { i, n_slots });
    }
    let q = coupled_q(params.c, params.p, fam.ell())?;
    // leaves of the exact enumeration: (1 + c)^singles * 2^multis at worst
    let log_leaves = i as f64 * (1.0 + params.c as f64).ln()
        + (n_slots - i) as f64 * std::f64::consts::LN_2;
    if log_leaves <= EXACT_ENUM_BUDGET.ln() {
        let p_prev = exact_hybrid_probability(params, q, i - 1, fam)?;
        let p_cur = exact_hybrid_probability(params, q, i, fam)?;
        return Ok(StepwiseReport {
            i,
            q,
            trials: 0,
            exact: true,
            p_prev,
            p_cur,
            diff: p_cur - p_prev,
            ci99_half_width: 0.0,
        });
    }
    let results: Vec<(u64, u64, i64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = stream(params.seed, StreamTag::TrialSeed, t);
            let tp = params.with_seed(seed);
            let prev = sample_hybrid(&tp, q, i - 1).expect("validated index");
            let cur = sample_hybrid(&tp, q, i).expect("validated index");
            let a = fam.hybrid_contains(&prev).expect("checked family") as i64;
            let b = fam.hybrid_contains(&cur).expect("checked family") as i64;
            (a as u64, b as u64, b - a)
        })
        .collect();
    let prev_successes: u64 = results.iter().map(|r| r.0).sum();
    let cur_successes: u64 = results.iter().map(|r| r.1).sum();
    let diff_sum: f64 = results.iter().map(|r| r.2 as f64).sum();
    let diff_sq_sum: f64 = results.iter().map(|r| (r.2 * r.2) as f64).sum();
    let (diff, half) = mean_ci(diff_sum, diff_sq_sum, trials, 0.99);
    Ok(StepwiseReport {
        i,
        q,
        trials,
        exact: false,
        p_prev: prev_successes as f64 / trials as f64,
        p_cur: cur_successes as f64 / trials as f64,
        diff,
        ci99_half_width: half,
    })
}

/// Exact Pr[Gamma_i contains a member] by enumerating presence patterns and
/// single-edge colorings.
pub fn exact_hybrid_probability(
    params: &ModelParams,
    q: f64,
    i: u64,
    fam: &RichFamily,
) -> Result<f64, CouplingError> {
    let n_slots = binomial(params.n, params.k);
    if i > n_slots {
        return Err(CouplingError::BadIndex { i, n_slots });
    }
    let log_leaves = i as f64 * (1.0 + params.c as f64).ln()
        + (n_slots - i) as f64 * std::f64::consts::LN_2;
    if log_leaves > EXACT_ENUM_BUDGET.ln() {
        return Err(CouplingError::SizeRefusal(format!(
            "exact hybrid enumeration needs about exp({log_leaves:.1}) leaves"
        )));
    }
    let mut state = HybridState {
        n: params.n,
        k: params.k,
        c: params.c,
        i,
        single: Vec::new(),
        multi: Vec::new(),
    };
    fn recurse(
        rank: u64,
        n_slots: u64,
        weight: f64,
        state: &mut HybridState,
        params: &ModelParams,
        q: f64,
        fam: &RichFamily,
        acc: &mut f64,
    ) -> Result<(), CouplingError> {
        if weight == 0.0 {
            return Ok(());
        }
        if rank == n_slots {
            if fam.hybrid_contains(state)? {
                *acc += weight;
            }
            return Ok(());
        }
        if rank < state.i {
            // single zone: absent, or present in each color
            recurse(rank + 1, n_slots, weight * (1.0 - q), state, params, q, fam, acc)?;
            for color in 0..params.c {
                state.single.push((rank, color));
                recurse(
                    rank + 1,
                    n_slots,
                    weight * q / params.c as f64,
                    state,
                    params,
                    q,
                    fam,
                    acc,
                )?;
                state.single.pop();
            }
        } else {
            recurse(
                rank + 1,
                n_slots,
                weight * (1.0 - params.p),
                state,
                params,
                q,
                fam,
                acc,
            )?;
            state.multi.push(rank);
            recurse(rank + 1, n_slots, weight * params.p, state, params, q, fam, acc)?;
            state.multi.pop();
        }
        Ok(())
    }
    let mut acc = 0.0;
    recurse(0, n_slots, 1.0, &mut state, params, q, fam, &mut acc)?;
    Ok(acc.clamp(0.0, 1.0))
}
