//! Empirical audit of the typical-graph properties used by the pipeline
//! analysis. P1-P5 and P9 are checked exactly on the given graph; P10/P11
//! (subset edge counts) are refutation-sampled with heuristic candidates.

use crate::bitset::Bitset;
use crate::graph::ColoredHypergraph;
use crate::rng::{SplitMix64, StreamTag};
use crate::verify::small_set_in_base;
use crate::verify::CheckMode;
use serde::Serialize;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct AuditConfig {
    /// epsilon in the palette rule c = (1+eps) n; echoed in the report.
    pub eps: f64,
    /// SMALL threshold coefficient (degree <= delta * log n).
    pub delta: f64,
    /// Base of the logarithm in all thresholds; natural log by default.
    pub log_base: f64,
    /// Edge probability used by the P11 bound; estimated from the edge count
    /// when absent.
    pub p_hint: Option<f64>,
    /// Random subsets drawn for P10/P11.
    pub subset_samples: u64,
    pub seed: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            eps: 0.2,
            delta: 0.05,
            log_base: std::f64::consts::E,
            p_hint: None,
            subset_samples: 100_000,
            seed: 0,
        }
    }
}

/// One exactly-checked property: the measured quantity and its bound.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyCheck {
    pub pass: bool,
    pub measured: f64,
    pub bound: f64,
}

/// One sampled property: pass means "no violation found".
#[derive(Clone, Debug, Serialize)]
pub struct SampledCheck {
    pub pass: bool,
    pub mode: CheckMode,
    pub sets_checked: u64,
    /// Violating set, its edge count, and the bound it broke.
    pub witness: Option<(Vec<u32>, u64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyAuditReport {
    pub n: usize,
    pub c: u32,
    pub edge_count: usize,
    pub eps: f64,
    pub delta: f64,
    pub p_used: f64,
    /// P1: max degree <= 10 log n.
    pub p1_max_degree: PropertyCheck,
    /// P2: |SMALL| <= n^0.4.
    pub p2_small_size: PropertyCheck,
    /// P3: color degree deficit d(v) - d^c(v) <= 2 at every vertex.
    pub p3_color_degree_deficit: PropertyCheck,
    /// P4: edges touching SMALL carry pairwise distinct colors.
    pub p4_small_edges_rainbow: PropertyCheck,
    /// P5: no two SMALL vertices within distance 4 (nor a short cycle at one).
    pub p5_small_far_apart: PropertyCheck,
    /// P9: largest color class <= 10 log n.
    pub p9_max_color_class: PropertyCheck,
    /// P10: e(X) <= 8|X| for small X (sampled).
    pub p10_sparse_sets: SampledCheck,
    /// P11: e(X) <= |X|^2 p sqrt(n/|X|) for large X (sampled).
    pub p11_dense_sets: SampledCheck,
    pub small: Vec<u32>,
}

impl PropertyAuditReport {
    /// All exactly-checked properties pass and no sampled witness was found.
    pub fn all_pass(&self) -> bool {
        self.p1_max_degree.pass
            && self.p2_small_size.pass
            && self.p3_color_degree_deficit.pass
            && self.p4_small_edges_rainbow.pass
            && self.p5_small_far_apart.pass
            && self.p9_max_color_class.pass
            && self.p10_sparse_sets.pass
            && self.p11_dense_sets.pass
    }
}

fn edges_inside(g: &ColoredHypergraph, xs: &[u32], member: &mut Bitset) -> u64 {
    member.clear();
    for &v in xs {
        member.insert(v as usize);
    }
    let mut twice = 0u64;
    for &v in xs {
        twice += g.adj(v).intersection_count(member) as u64;
    }
    twice / 2
}

pub fn audit_properties(g: &ColoredHypergraph, cfg: &AuditConfig) -> PropertyAuditReport {
    assert_eq!(g.k(), 2, "the property audit is defined for graphs");
    let n = g.n();
    let log_n = (n as f64).log(cfg.log_base);
    let p_used = cfg
        .p_hint
        .unwrap_or_else(|| 2.0 * g.edge_count() as f64 / (n as f64 * (n as f64 - 1.0)));

    // P1
    let max_degree = (0..n as u32).map(|v| g.degree(v)).max().unwrap_or(0) as f64;
    let p1 = PropertyCheck {
        pass: max_degree <= 10.0 * log_n,
        measured: max_degree,
        bound: 10.0 * log_n,
    };

    // P2
    let small = small_set_in_base(g, cfg.delta, cfg.log_base);
    let p2_bound = (n as f64).powf(0.4);
    let p2 = PropertyCheck {
        pass: (small.len() as f64) <= p2_bound,
        measured: small.len() as f64,
        bound: p2_bound,
    };

    // P3: max over v of d(v) - d^c(v)
    let mut max_deficit = 0usize;
    for v in 0..n as u32 {
        let mut colors: Vec<u32> = g.neighbors(v).iter().map(|&(_, c)| c).collect();
        colors.sort_unstable();
        colors.dedup();
        max_deficit = max_deficit.max(g.degree(v) - colors.len());
    }
    let p3 = PropertyCheck {
        pass: max_deficit <= 2,
        measured: max_deficit as f64,
        bound: 2.0,
    };

    // P4: colors on edges touching SMALL
    let mut in_small = vec![false; n];
    for &v in &small {
        in_small[v as usize] = true;
    }
    let mut touching_colors: Vec<u32> = g
        .edges()
        .filter(|(vs, _)| vs.iter().any(|&v| in_small[v as usize]))
        .map(|(_, c)| c)
        .collect();
    let total_touching = touching_colors.len();
    touching_colors.sort_unstable();
    touching_colors.dedup();
    let repeats = total_touching - touching_colors.len();
    let p4 = PropertyCheck {
        pass: repeats == 0,
        measured: repeats as f64,
        bound: 0.0,
    };

    // P5: BFS to depth 4 from each SMALL vertex; short cycles at a SMALL
    // vertex count as the x = y case.
    let p5_violations = count_small_proximity_violations(g, &small, &in_small);
    let p5 = PropertyCheck {
        pass: p5_violations == 0,
        measured: p5_violations as f64,
        bound: 0.0,
    };

    // P9: color class sizes
    let mut class_sizes: HashMap<u32, u64> = HashMap::new();
    for (_, color) in g.edges() {
        *class_sizes.entry(color).or_insert(0) += 1;
    }
    let max_class = class_sizes.values().copied().max().unwrap_or(0) as f64;
    let p9 = PropertyCheck {
        pass: max_class <= 10.0 * log_n,
        measured: max_class,
        bound: 10.0 * log_n,
    };

    // P10/P11 by sampling plus dense-neighborhood candidates.
    let size_split = (n as f64 / log_n.powf(4.0 / 3.0)).floor().max(1.0) as usize;
    let mut member = Bitset::new(n);
    let mut rng = SplitMix64::from_stream(cfg.seed, StreamTag::SubsetSample, 2);
    let p10_bound = |len: usize| 8.0 * len as f64;
    let p11_bound =
        |len: usize| (len * len) as f64 * p_used * (n as f64 / len as f64).sqrt();

    let mut p10_checked = 0u64;
    let mut p10_witness: Option<(Vec<u32>, u64, f64)> = None;
    let mut p11_checked = 0u64;
    let mut p11_witness: Option<(Vec<u32>, u64, f64)> = None;

    // candidates: closed neighborhoods (usually the densest small sets)
    for v in 0..n as u32 {
        let mut xs: Vec<u32> = g.neighbors(v).iter().map(|&(w, _)| w).collect();
        xs.push(v);
        xs.sort_unstable();
        let e = edges_inside(g, &xs, &mut member);
        if xs.len() <= size_split {
            p10_checked += 1;
            if e as f64 > p10_bound(xs.len()) && p10_witness.is_none() {
                let b = p10_bound(xs.len());
                p10_witness = Some((xs, e, b));
            }
        } else if xs.len() <= n {
            p11_checked += 1;
            if e as f64 > p11_bound(xs.len()) && p11_witness.is_none() {
                let b = p11_bound(xs.len());
                p11_witness = Some((xs, e, b));
            }
        }
    }
    // random subsets, alternating between the two size regimes
    for t in 0..cfg.subset_samples {
        if t % 2 == 0 {
            let len = 1 + rng.below_usize(size_split);
            let xs: Vec<u32> = rng
                .sample_distinct(n, len)
                .into_iter()
                .map(|v| v as u32)
                .collect();
            let e = edges_inside(g, &xs, &mut member);
            p10_checked += 1;
            if e as f64 > p10_bound(len) && p10_witness.is_none() {
                let b = p10_bound(len);
                p10_witness = Some((xs, e, b));
            }
        } else {
            let span = n - size_split.min(n);
            if span == 0 {
                continue;
            }
            let len = size_split + 1 + rng.below_usize(span);
            let len = len.min(n);
            let xs: Vec<u32> = rng
                .sample_distinct(n, len)
                .into_iter()
                .map(|v| v as u32)
                .collect();
            let e = edges_inside(g, &xs, &mut member);
            p11_checked += 1;
            if e as f64 > p11_bound(len) && p11_witness.is_none() {
                let b = p11_bound(len);
                p11_witness = Some((xs, e, b));
            }
        }
    }

    PropertyAuditReport {
        n,
        c: g.c(),
        edge_count: g.edge_count(),
        eps: cfg.eps,
        delta: cfg.delta,
        p_used,
        p1_max_degree: p1,
        p2_small_size: p2,
        p3_color_degree_deficit: p3,
        p4_small_edges_rainbow: p4,
        p5_small_far_apart: p5,
        p9_max_color_class: p9,
        p10_sparse_sets: SampledCheck {
            pass: p10_witness.is_none(),
            mode: CheckMode::Sampled,
            sets_checked: p10_checked,
            witness: p10_witness,
        },
        p11_dense_sets: SampledCheck {
            pass: p11_witness.is_none(),
            mode: CheckMode::Sampled,
            sets_checked: p11_checked,
            witness: p11_witness,
        },
        small,
    }
}

/// Number of violating SMALL pairs (x, y), x <= y: distinct pairs within
/// graph distance 4, or a cycle of length <= 4 through a single SMALL vertex.
fn count_small_proximity_violations(
    g: &ColoredHypergraph,
    small: &[u32],
    in_small: &[bool],
) -> u64 {
    let n = g.n();
    let mut violations = 0u64;
    let mut dist = vec![u8::MAX; n];
    for &x in small {
        // distinct pairs, counted once via x < y
        dist.fill(u8::MAX);
        dist[x as usize] = 0;
        let mut frontier = vec![x];
        for d in 1..=4u8 {
            let mut next = Vec::new();
            for &u in &frontier {
                for &(v, _) in g.neighbors(u) {
                    if dist[v as usize] == u8::MAX {
                        dist[v as usize] = d;
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        for y in (x + 1)..n as u32 {
            if in_small[y as usize] && dist[y as usize] <= 4 {
                violations += 1;
            }
        }
        // x = y: triangle or 4-cycle through x
        let nbrs: Vec<u32> = g.neighbors(x).iter().map(|&(v, _)| v).collect();
        let mut cycle = false;
        'outer: for (i, &u) in nbrs.iter().enumerate() {
            for &w in nbrs.iter().skip(i + 1) {
                if g.has_edge2(u, w) {
                    cycle = true; // triangle x-u-w
                    break 'outer;
                }
                let mut common = g.adj(u).clone();
                common.intersect_with(g.adj(w));
                common.remove(x as usize);
                if !common.is_empty() {
                    cycle = true; // 4-cycle x-u-z-w
                    break 'outer;
                }
            }
        }
        if cycle {
            violations += 1;
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ColoredHypergraph;

    #[test]
    fn empty_graph_fails_only_p2() {
        let g = ColoredHypergraph::new(8, 2, 3, vec![]).unwrap();
        let rep = audit_properties(&g, &AuditConfig::default());
        assert!(rep.p1_max_degree.pass);
        assert!(!rep.p2_small_size.pass, "SMALL = all n > n^0.4");
        assert!(rep.p3_color_degree_deficit.pass);
        assert!(rep.p4_small_edges_rainbow.pass);
        assert!(rep.p5_small_far_apart.pass);
        assert!(rep.p9_max_color_class.pass);
        assert!(rep.p10_sparse_sets.pass && rep.p11_dense_sets.pass);
    }

    #[test]
    fn monochromatic_k20_fails_p9() {
        let mut edges = Vec::new();
        for a in 0..20u32 {
            for b in a + 1..20 {
                edges.push((vec![a, b], 0));
            }
        }
        let g = ColoredHypergraph::new(20, 2, 1, edges).unwrap();
        let rep = audit_properties(&g, &AuditConfig::default());
        assert!(!rep.p9_max_color_class.pass);
        assert_eq!(rep.p9_max_color_class.measured, 190.0);
        // P3 also collapses: color degree 1 vs degree 19
        assert!(!rep.p3_color_degree_deficit.pass);
    }

    #[test]
    fn small_proximity_detected() {
        // path 0-1-2: with delta high enough both ends are SMALL and at
        // distance 2 -> P5 violation; P4 sees the repeated color.
        let g = ColoredHypergraph::new(
            3,
            2,
            2,
            vec![(vec![0, 1], 0), (vec![1, 2], 0)],
        )
        .unwrap();
        let cfg = AuditConfig {
            delta: 3.0,
            ..AuditConfig::default()
        };
        let rep = audit_properties(&g, &cfg);
        assert!(!rep.p5_small_far_apart.pass);
        assert!(!rep.p4_small_edges_rainbow.pass);
    }

    #[test]
    fn triangle_at_small_vertex_counts_as_cycle() {
        let g = ColoredHypergraph::new(
            3,
            2,
            3,
            vec![(vec![0, 1], 0), (vec![1, 2], 1), (vec![0, 2], 2)],
        )
        .unwrap();
        let cfg = AuditConfig {
            delta: 5.0,
            ..AuditConfig::default()
        };
        let rep = audit_properties(&g, &cfg);
        assert!(!rep.p5_small_far_apart.pass);
    }
}
