//! Stage 1: reserve SMALL vertices with two attachment neighbors each, then
//! sample and verify the reservoir W and the color classes C0, C1.
//!
//! The existence proof uses the Local Lemma; here the same random experiment
//! is run with rejection: sample, verify the partition conditions explicitly,
//! retry up to a budget. Verified conditions on G' = G[V \ V0; C*]:
//!
//! (i)   |W| within the slack window around |V'| / ln ln n,
//! (ii)  |C0|, |C1| disjoint, within the slack window around alpha |C*|,
//! (iii) every w in W has d_C0(w, W) inside the lemma's degree window,
//! (iv)  every v in V' has d_C1(v, W) inside the same window,
//! (v)   no C0 color sits on more than 100 ln n / (ln ln n)^2 edges of G'[W].

use crate::bitset::Bitset;
use crate::colorset::ColorSet;
use crate::graph::ColoredHypergraph;
use crate::pipeline::{PipelineConfig, PipelineTrace, Stage, StageFailure};
use crate::rng::{SplitMix64, StreamTag};
use crate::verify::small_set;
use std::collections::HashMap;

/// Verified vertex/color partition plan.
#[derive(Clone, Debug)]
pub struct PartitionPlan {
    pub small: Vec<u32>,
    pub small_set: Bitset,
    /// (small vertex, its two attachment neighbors).
    pub attach: Vec<(u32, [u32; 2])>,
    /// Attachment edges, one per (small vertex, neighbor) pair.
    pub e0: Vec<(u32, u32)>,
    pub c_small: Vec<u32>,
    pub c_small_set: ColorSet,
    pub c_star_size: usize,
    pub w: Vec<u32>,
    pub c0: Vec<u32>,
    pub c1: Vec<u32>,
    pub alpha: f64,
    pub attempts: u32,
}

impl PartitionPlan {
    pub fn attach_vertices(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .attach
            .iter()
            .flat_map(|&(_, pair)| pair.into_iter())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn fail(reason: impl Into<String>) -> StageFailure {
    StageFailure::new(Stage::Partition, reason)
}

pub fn partition(
    g: &ColoredHypergraph,
    cfg: &PipelineConfig,
    seed: u64,
    trace: &mut PipelineTrace,
) -> Result<PartitionPlan, StageFailure> {
    let n = g.n();
    if (g.c() as u64) < n as u64 {
        return Err(fail(format!(
            "palette {} smaller than n = {n}: a rainbow Hamilton cycle needs n distinct colors",
            g.c()
        )));
    }
    if cfg.alpha <= 0.0 || cfg.alpha >= 0.5 {
        return Err(fail(format!(
            "alpha = {} outside (0, 0.5): C0/C1 sampling degenerates",
            cfg.alpha
        )));
    }

    // SMALL handling: pick two attachment neighbors per SMALL vertex, all
    // attachments disjoint and their edges rainbow.
    let small = small_set(g, cfg.delta);
    let mut small_bits = Bitset::new(n);
    for &v in &small {
        small_bits.insert(v as usize);
    }
    let mut used = small_bits.clone();
    let mut e0_colors = ColorSet::new(g.c());
    let mut attach = Vec::new();
    let mut e0 = Vec::new();
    for &v in &small {
        let mut picked = Vec::with_capacity(2);
        for &(u, col) in g.neighbors(v) {
            if picked.len() == 2 {
                break;
            }
            if used.contains(u as usize) || e0_colors.contains(col) {
                continue;
            }
            picked.push((u, col));
        }
        if picked.len() < 2 {
            return Err(fail(format!(
                "SMALL vertex {} has fewer than two usable attachment neighbors",
                v + 1
            )));
        }
        for &(u, col) in &picked {
            used.insert(u as usize);
            e0_colors.insert(col);
            e0.push((v.min(u), v.max(u)));
        }
        attach.push((v, [picked[0].0, picked[1].0]));
    }
    let c_small: Vec<u32> = e0_colors.iter().collect();

    // the partition domain: V' = [n] \ V0 with colors C* = [c] \ C_small
    let v0 = used; // SMALL plus attachments
    let v_prime: Vec<u32> = (0..n as u32).filter(|&v| !v0.contains(v as usize)).collect();
    if v_prime.len() < 4 {
        return Err(fail("fewer than 4 vertices left outside V0"));
    }
    let c_star: Vec<u32> = (0..g.c()).filter(|&x| !e0_colors.contains(x)).collect();
    let g_prime = g.filtered(|v| !v0.contains(v as usize), |x| !e0_colors.contains(x));

    let lnln = (n as f64).ln().ln();
    let w_rate = if lnln > 1.0 { 1.0 / lnln } else { 1.0 };
    let ln_n = (n as f64).ln();
    let color_cap = if lnln > 0.0 {
        100.0 * ln_n / (lnln * lnln)
    } else {
        f64::INFINITY
    };

    let mut last_violation = String::from("no attempts made");
    for attempt in 0..cfg.partition_retries.max(1) {
        let mut rng = SplitMix64::from_stream(seed, StreamTag::PartitionAttempt, attempt as u64);
        let w: Vec<u32> = v_prime
            .iter()
            .copied()
            .filter(|_| rng.coin(w_rate))
            .collect();
        let mut c0 = Vec::new();
        let mut c1 = Vec::new();
        for &x in &c_star {
            if rng.coin(2.0 * cfg.alpha) {
                if rng.coin(0.5) {
                    c0.push(x);
                } else {
                    c1.push(x);
                }
            }
        }
        match verify_conditions(
            &g_prime, &v_prime, c_star.len(), &w, &c0, &c1, cfg, w_rate, lnln, color_cap,
        ) {
            Ok(()) => {
                trace.partition_attempts = attempt + 1;
                return Ok(PartitionPlan {
                    small,
                    small_set: small_bits,
                    attach,
                    e0,
                    c_small,
                    c_small_set: e0_colors,
                    c_star_size: c_star.len(),
                    w,
                    c0,
                    c1,
                    alpha: cfg.alpha,
                    attempts: attempt + 1,
                });
            }
            Err(v) => last_violation = v,
        }
    }
    trace.partition_attempts = cfg.partition_retries.max(1);
    Err(fail(format!(
        "no verified plan in {} attempts; last violation: {last_violation}",
        cfg.partition_retries.max(1)
    )))
}

#[allow(clippy::too_many_arguments)]
fn verify_conditions(
    g_prime: &ColoredHypergraph,
    v_prime: &[u32],
    c_star_len: usize,
    w: &[u32],
    c0: &[u32],
    c1: &[u32],
    cfg: &PipelineConfig,
    w_rate: f64,
    lnln: f64,
    color_cap: f64,
) -> Result<(), String> {
    let s = cfg.size_slack;
    // (i)
    let w_target = v_prime.len() as f64 * w_rate;
    if (w.len() as f64) < (1.0 - s) * w_target || (w.len() as f64) > (1.0 + s) * w_target {
        return Err(format!(
            "(i) |W| = {} outside ({:.1}, {:.1})",
            w.len(),
            (1.0 - s) * w_target,
            (1.0 + s) * w_target
        ));
    }
    // (ii) sizes concentrate around alpha |C*|
    let target = cfg.alpha * c_star_len as f64;
    for (name, set) in [("C0", c0.len()), ("C1", c1.len())] {
        if (set as f64) < (1.0 - s) * target || (set as f64) > (1.0 + s) * target {
            return Err(format!(
                "(ii) |{name}| = {set} outside ({:.1}, {:.1})",
                (1.0 - s) * target,
                (1.0 + s) * target
            ));
        }
    }
    let w_bits = Bitset::from_indices(g_prime.n(), w.iter().map(|&v| v as usize));
    let c0_set = ColorSet::from_iter_with_palette(g_prime.c(), c0.iter().copied());
    let c1_set = ColorSet::from_iter_with_palette(g_prime.c(), c1.iter().copied());
    // degree window: (alpha d / (2 lnln n), 2 alpha d / lnln n), widened by
    // degree_slack; empty when d = 0
    let window = |d: usize| -> (f64, f64) {
        let lo = cfg.alpha * d as f64 / (2.0 * lnln) * (1.0 - cfg.degree_slack);
        let hi = 2.0 * cfg.alpha * d as f64 / lnln * (1.0 + cfg.degree_slack);
        (lo, hi)
    };
    // (iii) and (iv)
    for &v in v_prime {
        let d = g_prime.degree(v);
        let (lo, hi) = window(d);
        let mut d_c0_w = 0usize;
        let mut d_c1_w = 0usize;
        for &(u, col) in g_prime.neighbors(v) {
            if w_bits.contains(u as usize) {
                if c0_set.contains(col) {
                    d_c0_w += 1;
                }
                if c1_set.contains(col) {
                    d_c1_w += 1;
                }
            }
        }
        if w_bits.contains(v as usize) {
            let x = d_c0_w as f64;
            if x <= lo || x >= hi {
                return Err(format!(
                    "(iii) d_C0({}, W) = {d_c0_w} outside ({lo:.2}, {hi:.2})",
                    v + 1
                ));
            }
        }
        let x = d_c1_w as f64;
        if x <= lo || x >= hi {
            return Err(format!(
                "(iv) d_C1({}, W) = {d_c1_w} outside ({lo:.2}, {hi:.2})",
                v + 1
            ));
        }
    }
    // (v)
    let mut counts: HashMap<u32, u32> = HashMap::new();
    for (vs, col) in g_prime.edges() {
        if c0_set.contains(col)
            && w_bits.contains(vs[0] as usize)
            && w_bits.contains(vs[1] as usize)
        {
            let c = counts.entry(col).or_insert(0);
            *c += 1;
            if f64::from(*c) > color_cap {
                return Err(format!(
                    "(v) color {} exceeds {color_cap:.1} edges inside G'[W]",
                    col + 1
                ));
            }
        }
    }
    Ok(())
}
