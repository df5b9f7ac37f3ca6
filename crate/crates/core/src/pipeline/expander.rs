//! Stage 4: extract a rainbow expander from H = G[W; C0] by random d-out
//! sampling with rejection.
//!
//! Every reservoir vertex draws d incident H-edges with repetition; the union
//! is kept when it is rainbow and (k_bound, d_required)-expanding, otherwise
//! the whole sample is redrawn.

use crate::colorset::ColorSet;
use crate::graph::ColoredHypergraph;
use crate::pipeline::{PipelineConfig, Stage, StageFailure};
use crate::rng::{SplitMix64, StreamTag};
use crate::verify::{is_expander_with, ExpanderCheckConfig};
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct ExpanderOutcome {
    /// Global vertex pairs of the sampled subgraph R.
    pub edges: Vec<(u32, u32)>,
    pub colors: Vec<u32>,
    pub attempts: u32,
}

fn fail(reason: impl Into<String>) -> StageFailure {
    StageFailure::new(Stage::Expander, reason)
}

pub fn rainbow_expander(
    g: &ColoredHypergraph,
    w: &[u32],
    c0: &ColorSet,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<ExpanderOutcome, StageFailure> {
    assert_eq!(g.k(), 2);
    if cfg.expander_d == 0 {
        return Err(fail("d = 0 samples an empty graph, which cannot expand"));
    }
    let local_of: HashMap<u32, u32> = w.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    // H = G[W; C0] as a local edge list
    let mut h_edges: Vec<(u32, u32, u32)> = Vec::new(); // local a, local b, color
    for (vs, col) in g.edges() {
        if c0.contains(col) {
            if let (Some(&a), Some(&b)) = (local_of.get(&vs[0]), local_of.get(&vs[1])) {
                h_edges.push((a, b, col));
            }
        }
    }
    if h_edges.is_empty() {
        return Err(fail("G[W; C0] has no edges"));
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); w.len()];
    for (i, &(a, b, _)) in h_edges.iter().enumerate() {
        incident[a as usize].push(i);
        incident[b as usize].push(i);
    }
    if let Some(lonely) = incident.iter().position(|l| l.is_empty()) {
        return Err(fail(format!(
            "reservoir vertex {} is isolated in G[W; C0]",
            w[lonely] + 1
        )));
    }
    let k_bound = ((cfg.expander_beta * w.len() as f64).ceil() as usize).max(1);
    let mut last_reason = String::new();
    for attempt in 0..cfg.expander_retries.max(1) {
        let mut rng = SplitMix64::from_stream(seed, StreamTag::ExpanderAttempt, attempt as u64);
        let mut chosen: Vec<bool> = vec![false; h_edges.len()];
        for lists in &incident {
            for _ in 0..cfg.expander_d {
                chosen[lists[rng.below_usize(lists.len())]] = true;
            }
        }
        let picked: Vec<usize> = (0..h_edges.len()).filter(|&i| chosen[i]).collect();
        debug_assert!(picked.len() <= cfg.expander_d as usize * w.len());
        // rainbow rejection
        let mut seen = ColorSet::new(g.c());
        let mut rainbow = true;
        for &i in &picked {
            let col = h_edges[i].2;
            if seen.contains(col) {
                rainbow = false;
                last_reason = format!("color {} sampled twice", col + 1);
                break;
            }
            seen.insert(col);
        }
        if !rainbow {
            continue;
        }
        // expansion check on the local sample
        let local_edges: Vec<(Vec<u32>, u32)> = picked
            .iter()
            .map(|&i| {
                let (a, b, col) = h_edges[i];
                (vec![a.min(b), a.max(b)], col)
            })
            .collect();
        let r_local = ColoredHypergraph::new(w.len(), 2, g.c(), local_edges)
            .expect("sampled edges are valid");
        let report = is_expander_with(
            &r_local,
            k_bound,
            cfg.expansion_factor,
            &ExpanderCheckConfig {
                seed: crate::rng::stream(seed, StreamTag::ExpanderAttempt, 1_000_000 + attempt as u64),
                ..ExpanderCheckConfig::default()
            },
        );
        if let Some(witness) = report.witness {
            last_reason = format!(
                "sample is not a ({k_bound}, {})-expander; witness size {}",
                cfg.expansion_factor,
                witness.len()
            );
            continue;
        }
        let edges: Vec<(u32, u32)> = picked
            .iter()
            .map(|&i| {
                let (a, b, _) = h_edges[i];
                let (ga, gb) = (w[a as usize], w[b as usize]);
                (ga.min(gb), ga.max(gb))
            })
            .collect();
        let colors: Vec<u32> = picked.iter().map(|&i| h_edges[i].2).collect();
        return Ok(ExpanderOutcome {
            edges,
            colors,
            attempts: attempt + 1,
        });
    }
    Err(fail(format!(
        "no accepted sample in {} attempts; last rejection: {last_reason}",
        cfg.expander_retries.max(1)
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_colors(c: u32) -> ColorSet {
        ColorSet::from_iter_with_palette(c, 0..c)
    }

    #[test]
    fn dense_rainbow_host_succeeds_often() {
        // rainbow K20 reservoir, d = 5: expect >= 45 successes in 50 seeds
        let g = ColoredHypergraph::complete_rainbow(20);
        let w: Vec<u32> = (0..20).collect();
        let cfg = PipelineConfig {
            expander_d: 5,
            expander_beta: 0.1,
            expansion_factor: 2.0,
            expander_retries: 1, // count per-seed first-try successes
            ..PipelineConfig::default()
        };
        let mut successes = 0;
        for seed in 0..50 {
            if let Ok(out) = rainbow_expander(&g, &w, &all_colors(g.c()), &cfg, seed) {
                successes += 1;
                assert!(out.edges.len() <= 5 * 20);
                // rainbow by construction; double check
                let mut cols = out.colors.clone();
                cols.sort_unstable();
                cols.dedup();
                assert_eq!(cols.len(), out.edges.len());
            }
        }
        assert!(successes >= 45, "only {successes}/50 first-try successes");
    }

    #[test]
    fn monochromatic_host_cannot_be_rainbow() {
        // all H-edges share one color: any sample with >= 2 edges is rejected,
        // and a single edge cannot expand
        let mut edges = Vec::new();
        for a in 0..8u32 {
            for b in a + 1..8 {
                edges.push((vec![a, b], 0));
            }
        }
        let g = ColoredHypergraph::new(8, 2, 1, edges).unwrap();
        let w: Vec<u32> = (0..8).collect();
        let err = rainbow_expander(&g, &w, &all_colors(1), &PipelineConfig::default(), 3)
            .unwrap_err();
        assert_eq!(err.stage, Stage::Expander);
    }

    #[test]
    fn d_zero_fails() {
        let g = ColoredHypergraph::complete_rainbow(10);
        let w: Vec<u32> = (0..10).collect();
        let cfg = PipelineConfig {
            expander_d: 0,
            ..PipelineConfig::default()
        };
        let err = rainbow_expander(&g, &w, &all_colors(g.c()), &cfg, 3).unwrap_err();
        assert!(err.reason.contains("d = 0"));
    }

    #[test]
    fn isolated_reservoir_vertex_detected() {
        let g = ColoredHypergraph::complete_rainbow(10);
        // restrict colors so vertex 9's edges into W = {0..4, 9} are excluded
        let mut c0 = ColorSet::new(g.c());
        for a in 0..5u32 {
            for b in a + 1..5 {
                c0.insert(g.color_between(a, b).unwrap());
            }
        }
        let w = vec![0, 1, 2, 3, 4, 9];
        let err = rainbow_expander(&g, &w, &c0, &PipelineConfig::default(), 3).unwrap_err();
        assert!(err.reason.contains("isolated"), "{}", err.reason);
    }
}
