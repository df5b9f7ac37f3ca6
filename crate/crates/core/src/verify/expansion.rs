//! Vertex expansion and rainbow pseudorandomness checks.
//!
//! Both checks are exhaustive when the set-enumeration budget allows and fall
//! back to randomized refutation search otherwise. Sampled mode reports a
//! witness or "no violation found in N samples"; it never claims proof.

use crate::bitset::Bitset;
use crate::colorset::ColorSet;
use crate::combin::{binomial, for_each_subset};
use crate::graph::ColoredHypergraph;
use crate::rng::{SplitMix64, StreamTag};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug)]
pub struct ExpanderCheckConfig {
    /// Max number of candidate sets an exhaustive pass may enumerate.
    pub budget: u64,
    /// Random sets drawn in sampled mode.
    pub samples: u64,
    pub seed: u64,
}

impl Default for ExpanderCheckConfig {
    fn default() -> Self {
        ExpanderCheckConfig {
            budget: 2_000_000,
            samples: 100_000,
            seed: 0,
        }
    }
}

/// Result of a (k, d)-expansion check: a witness X has |N(X) \ X| < d |X|.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    pub k_bound: usize,
    pub d: f64,
    pub mode: CheckMode,
    pub samples: u64,
    pub witness: Option<Vec<u32>>,
}

impl ExpansionReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

fn external_neighborhood_count(g: &ColoredHypergraph, xs: &[u32], scratch: &mut Bitset) -> usize {
    scratch.clear();
    for &v in xs {
        scratch.union_with(g.adj(v));
    }
    let mut count = scratch.count();
    for &v in xs {
        if scratch.contains(v as usize) {
            count -= 1;
        }
    }
    count
}

fn violates(g: &ColoredHypergraph, xs: &[u32], d: f64, scratch: &mut Bitset) -> bool {
    (external_neighborhood_count(g, xs, scratch) as f64) < d * xs.len() as f64
}

/// (k, d)-expansion check with default budgets.
pub fn is_expander(g: &ColoredHypergraph, k_bound: usize, d: f64) -> ExpansionReport {
    is_expander_with(g, k_bound, d, &ExpanderCheckConfig::default())
}

pub fn is_expander_with(
    g: &ColoredHypergraph,
    k_bound: usize,
    d: f64,
    cfg: &ExpanderCheckConfig,
) -> ExpansionReport {
    assert_eq!(g.k(), 2, "expansion is defined on graph views");
    let n = g.n();
    let k_bound = k_bound.min(n);
    let mut scratch = Bitset::new(n);
    let total: u64 = (1..=k_bound).map(|s| binomial(n, s)).sum();
    let verts: Vec<u32> = (0..n as u32).collect();
    if total <= cfg.budget {
        let mut witness = None;
        for s in 1..=k_bound {
            if witness.is_some() {
                break;
            }
            for_each_subset(&verts, s, |xs| {
                if violates(g, xs, d, &mut scratch) {
                    witness = Some(xs.to_vec());
                    false
                } else {
                    true
                }
            });
        }
        return ExpansionReport {
            k_bound,
            d,
            mode: CheckMode::Exhaustive,
            samples: total,
            witness,
        };
    }
    // Sampled refutation: all singletons, all vertex neighborhoods that fit,
    // then random sets.
    let mut witness = None;
    for v in 0..n as u32 {
        if violates(g, &[v], d, &mut scratch) {
            witness = Some(vec![v]);
            break;
        }
    }
    if witness.is_none() {
        for v in 0..n as u32 {
            let mut xs: Vec<u32> = g.neighbors(v).iter().map(|&(w, _)| w).collect();
            xs.push(v);
            xs.sort_unstable();
            if xs.len() <= k_bound && violates(g, &xs, d, &mut scratch) {
                witness = Some(xs);
                break;
            }
        }
    }
    let mut rng = SplitMix64::from_stream(cfg.seed, StreamTag::SubsetSample, 0);
    let mut drawn = 0;
    while witness.is_none() && drawn < cfg.samples {
        drawn += 1;
        let size = 1 + rng.below_usize(k_bound);
        let mut xs: Vec<u32> = rng
            .sample_distinct(n, size)
            .into_iter()
            .map(|v| v as u32)
            .collect();
        xs.sort_unstable();
        if violates(g, &xs, d, &mut scratch) {
            witness = Some(xs);
        }
    }
    ExpansionReport {
        k_bound,
        d,
        mode: CheckMode::Sampled,
        samples: drawn,
        witness,
    }
}

/// Result of a k-rainbow-pseudorandomness check; a witness (A, B) spans fewer
/// than n colors.
#[derive(Clone, Debug, Serialize)]
pub struct PseudorandomReport {
    pub set_size: usize,
    pub mode: CheckMode,
    pub samples: u64,
    pub witness: Option<(Vec<u32>, Vec<u32>, usize)>,
}

impl PseudorandomReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

fn colors_between(g: &ColoredHypergraph, a: &[u32], b: &[u32]) -> usize {
    let mut seen = ColorSet::new(g.c());
    let mut count = 0;
    for &u in a {
        for &v in b {
            if let Some(col) = g.color_between(u, v) {
                if !seen.contains(col) {
                    seen.insert(col);
                    count += 1;
                }
            }
        }
    }
    count
}

/// Every pair of disjoint `set_size`-sets must span at least n distinct colors.
pub fn is_rainbow_pseudorandom(g: &ColoredHypergraph, set_size: usize) -> PseudorandomReport {
    is_rainbow_pseudorandom_with(g, set_size, &ExpanderCheckConfig::default())
}

pub fn is_rainbow_pseudorandom_with(
    g: &ColoredHypergraph,
    set_size: usize,
    cfg: &ExpanderCheckConfig,
) -> PseudorandomReport {
    assert_eq!(g.k(), 2);
    let n = g.n();
    if 2 * set_size > n || set_size == 0 {
        // no disjoint pair of sets exists: vacuously pseudorandom
        return PseudorandomReport {
            set_size,
            mode: CheckMode::Exhaustive,
            samples: 0,
            witness: None,
        };
    }
    let pairs = binomial(n, set_size).saturating_mul(binomial(n - set_size, set_size));
    let verts: Vec<u32> = (0..n as u32).collect();
    if pairs <= cfg.budget {
        let mut witness = None;
        for_each_subset(&verts, set_size, |a| {
            let rest: Vec<u32> = verts.iter().copied().filter(|v| !a.contains(v)).collect();
            for_each_subset(&rest, set_size, |b| {
                let colors = colors_between(g, a, b);
                if colors < n {
                    witness = Some((a.to_vec(), b.to_vec(), colors));
                    false
                } else {
                    true
                }
            });
            witness.is_none()
        });
        return PseudorandomReport {
            set_size,
            mode: CheckMode::Exhaustive,
            samples: pairs,
            witness,
        };
    }
    let mut rng = SplitMix64::from_stream(cfg.seed, StreamTag::SubsetSample, 1);
    let mut witness = None;
    let mut drawn = 0;
    while witness.is_none() && drawn < cfg.samples {
        drawn += 1;
        let both = rng.sample_distinct(n, 2 * set_size);
        let mut a: Vec<u32> = both[..set_size].iter().map(|&v| v as u32).collect();
        let mut b: Vec<u32> = both[set_size..].iter().map(|&v| v as u32).collect();
        a.sort_unstable();
        b.sort_unstable();
        let colors = colors_between(g, &a, &b);
        if colors < n {
            witness = Some((a, b, colors));
        }
    }
    PseudorandomReport {
        set_size,
        mode: CheckMode::Sampled,
        samples: drawn,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ColoredHypergraph;

    #[test]
    fn k5_singletons_expand() {
        let k5 = ColoredHypergraph::complete_rainbow(5);
        let rep = is_expander(&k5, 1, 4.0);
        assert!(rep.passed());
        assert_eq!(rep.mode, CheckMode::Exhaustive);
        assert!(!is_expander(&k5, 1, 4.5).passed());
    }

    #[test]
    fn perfect_matching_fails_to_expand() {
        let g = ColoredHypergraph::new(
            6,
            2,
            3,
            vec![(vec![0, 1], 0), (vec![2, 3], 1), (vec![4, 5], 2)],
        )
        .unwrap();
        let rep = is_expander(&g, 2, 2.0);
        let w = rep.witness.expect("matching cannot 2-expand");
        // any single endpoint is a witness: |N({u}) \ {u}| = 1 < 2
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn cycle_c10_drops_at_kbound_3() {
        let edges = (0..10)
            .map(|i| {
                let (a, b) = (i as u32, ((i + 1) % 10) as u32);
                (vec![a.min(b), a.max(b)], i as u32)
            })
            .collect();
        let c10 = ColoredHypergraph::new(10, 2, 10, edges).unwrap();
        // consecutive triple has only 2 external neighbors < 2*3
        let rep = is_expander(&c10, 3, 2.0);
        assert_eq!(rep.mode, CheckMode::Exhaustive);
        let w = rep.witness.expect("C10 is not a (3,2)-expander");
        assert!(w.len() >= 2);
        // but it is a (1,2)-expander
        assert!(is_expander(&c10, 1, 2.0).passed());
    }

    #[test]
    fn pseudorandom_examples() {
        // rainbow K6: disjoint pairs span 4 edges -> 4 < 6 colors
        let k6 = ColoredHypergraph::complete_rainbow(6);
        let rep = is_rainbow_pseudorandom(&k6, 2);
        let (_, _, colors) = rep.witness.expect("4 crossing edges < n = 6");
        assert_eq!(colors, 4);
        // 2k > n: vacuously true
        assert!(is_rainbow_pseudorandom(&k6, 4).passed());
        // monochromatic K20 at k = 5: one color < 20
        let edges: Vec<_> = {
            let mut out = Vec::new();
            for a in 0..20u32 {
                for b in a + 1..20 {
                    out.push((vec![a, b], 0));
                }
            }
            out
        };
        let mono = ColoredHypergraph::new(20, 2, 1, edges).unwrap();
        let rep = is_rainbow_pseudorandom(&mono, 5);
        assert!(!rep.passed());
        assert_eq!(rep.witness.unwrap().2, 1);
    }
}
