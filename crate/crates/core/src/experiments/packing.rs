//! Greedy extraction of edge-disjoint rainbow Hamilton cycles.
//!
//! Rainbowness is per cycle (colors may repeat across cycles, matching the
//! family the packing theorem couples against). Extraction removes each found
//! cycle's edges and repeats until the finder fails; the report compares the
//! count against the (1 - eps) n p / 2 target.

use crate::cert::RainbowCertificate;
use crate::graph::ColoredHypergraph;
use crate::oracle::{find_rainbow_hamilton_cycle, SearchBudget, SearchOutcome};
use crate::pipeline::{run_pipeline_on, PipelineConfig};
use crate::rng::{stream, StreamTag};
use crate::verify::certificate_ok;
use serde::Serialize;
use std::collections::HashSet;

#[derive(Clone, Debug)]
pub struct PackingConfig {
    /// Oracle below/at this n, pipeline above.
    pub oracle_max_n: usize,
    pub oracle_node_limit: u64,
    pub pipeline: PipelineConfig,
    pub seed: u64,
}

impl Default for PackingConfig {
    fn default() -> Self {
        PackingConfig {
            oracle_max_n: 12,
            oracle_node_limit: 50_000_000,
            pipeline: PipelineConfig::default(),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PackingReport {
    pub extracted: usize,
    /// (1 - eps) n p_hat / 2 with p_hat the host's edge density.
    pub target: f64,
    pub eps: f64,
    pub p_hat: f64,
    /// Certificates in extraction order, rendered in the text format.
    pub cycles: Vec<String>,
    /// Pairwise edge-disjointness, asserted by intersection checks.
    pub edge_disjoint: bool,
}

pub fn packing_extract(
    g: &ColoredHypergraph,
    eps: f64,
    cfg: &PackingConfig,
) -> (PackingReport, Vec<RainbowCertificate>) {
    assert_eq!(g.k(), 2);
    let n = g.n();
    let p_hat = if n >= 2 {
        2.0 * g.edge_count() as f64 / (n as f64 * (n as f64 - 1.0))
    } else {
        0.0
    };
    let target = (1.0 - eps) * n as f64 * p_hat / 2.0;
    let mut current = g.clone();
    let mut certs: Vec<RainbowCertificate> = Vec::new();
    let mut used_edges: HashSet<(u32, u32)> = HashSet::new();
    let mut disjoint = true;
    let mut round = 0u64;
    loop {
        let found = if n <= cfg.oracle_max_n {
            match find_rainbow_hamilton_cycle(
                &current,
                &SearchBudget::nodes(cfg.oracle_node_limit),
            ) {
                SearchOutcome::Found(cert) => Some(cert),
                _ => None,
            }
        } else {
            let seed = stream(cfg.seed, StreamTag::TrialSeed, round);
            run_pipeline_on(&current, &cfg.pipeline, seed).0.ok()
        };
        round += 1;
        let Some(cert) = found else {
            break;
        };
        assert!(
            certificate_ok(&current, &cert),
            "extraction produced an unverified cycle"
        );
        // disjointness bookkeeping against all earlier cycles
        let mut ids = Vec::with_capacity(cert.edges.len());
        for vs in &cert.edges {
            let key = (vs[0], vs[1]);
            if !used_edges.insert(key) {
                disjoint = false;
            }
            ids.push(
                current
                    .find_edge(vs)
                    .expect("verified certificate edges exist"),
            );
        }
        current = current.without_edges(&ids.into_iter().collect());
        certs.push(cert);
    }
    let report = PackingReport {
        extracted: certs.len(),
        target,
        eps,
        p_hat,
        cycles: certs.iter().map(|c| c.to_text()).collect(),
        edge_disjoint: disjoint,
    };
    (report, certs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rainbow_k7_gives_three_disjoint_cycles() {
        let g = ColoredHypergraph::complete_rainbow(7);
        let (report, certs) = packing_extract(&g, 0.1, &PackingConfig::default());
        assert!(report.extracted >= 3, "extracted {}", report.extracted);
        assert!(report.edge_disjoint);
        assert_eq!(certs.len(), report.extracted);
        // K7 has 21 edges; 3 cycles of 7 edges exhaust it
        assert_eq!(report.extracted, 3);
    }

    #[test]
    fn empty_graph_extracts_nothing() {
        let g = ColoredHypergraph::new(6, 2, 3, vec![]).unwrap();
        let (report, _) = packing_extract(&g, 0.1, &PackingConfig::default());
        assert_eq!(report.extracted, 0);
        assert_eq!(report.target, 0.0);
        assert!(report.edge_disjoint);
    }

    #[test]
    fn monochromatic_host_extracts_nothing() {
        let mut edges = Vec::new();
        for a in 0..6u32 {
            for b in a + 1..6 {
                edges.push((vec![a, b], 0));
            }
        }
        let g = ColoredHypergraph::new(6, 2, 1, edges).unwrap();
        let (report, _) = packing_extract(&g, 0.0, &PackingConfig::default());
        assert_eq!(report.extracted, 0);
    }
}
