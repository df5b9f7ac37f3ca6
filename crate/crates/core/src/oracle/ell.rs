//! Complete search for rainbow Hamilton ell-cycles in k-uniform hypergraphs.
//!
//! A Hamilton ell-cycle is a cyclic ordering whose edges are the m = n/(k-ell)
//! consecutive k-blocks starting at multiples of k-ell. The search enumerates
//! orderings with the canonical rotation (the smallest block-start vertex sits
//! at position 0), pruning each block as soon as its last position is filled.

use crate::cert::RainbowCertificate;
use crate::colorset::ColorSet;
use crate::graph::ColoredHypergraph;
use crate::oracle::{BudgetClock, OracleError, SearchBudget, SearchOutcome};

struct EllSearch<'a> {
    g: &'a ColoredHypergraph,
    step: usize,
    order: Vec<u32>,
    assigned: Vec<bool>,
    used: ColorSet,
    block_positions: Vec<Vec<usize>>,
    completes_at: Vec<Vec<usize>>,
    block_color: Vec<u32>,
    clock: BudgetClock,
}

impl<'a> EllSearch<'a> {
    fn block_check(&mut self, b: usize) -> Option<u32> {
        let mut vs: Vec<u32> = self.block_positions[b]
            .iter()
            .map(|&p| self.order[p])
            .collect();
        vs.sort_unstable();
        let color = self.g.edge_color(&vs)?;
        if self.used.contains(color) {
            return None;
        }
        Some(color)
    }

    fn dfs(&mut self, pos: usize) -> bool {
        if !self.clock.tick() {
            return false;
        }
        let n = self.g.n();
        if pos == n {
            return true;
        }
        let is_block_start = pos.is_multiple_of(self.step);
        for v in 0..n as u32 {
            if self.assigned[v as usize] {
                continue;
            }
            // canonical rotation: position 0 holds the least block-start vertex
            if is_block_start && pos > 0 && v < self.order[0] {
                continue;
            }
            // for ell = 0 blocks are vertex sets on disjoint segments; demand
            // ascending order inside each block
            if self.step == self.g.k() && !is_block_start && v < self.order[pos - 1] {
                continue;
            }
            self.order[pos] = v;
            self.assigned[v as usize] = true;
            let mut ok = true;
            let mut checked: Vec<usize> = Vec::new();
            for &b in &self.completes_at[pos].clone() {
                match self.block_check(b) {
                    Some(color) => {
                        self.used.insert(color);
                        self.block_color[b] = color;
                        checked.push(b);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && self.dfs(pos + 1) {
                return true;
            }
            for &b in &checked {
                self.used.remove(self.block_color[b]);
            }
            self.assigned[v as usize] = false;
            if self.clock.exhausted() {
                return false;
            }
        }
        false
    }
}

pub fn find_rainbow_ell_cycle(
    g: &ColoredHypergraph,
    ell: usize,
    budget: &SearchBudget,
) -> Result<SearchOutcome, OracleError> {
    let (n, k) = (g.n(), g.k());
    assert!(ell < k, "overlap must satisfy 0 <= ell < k");
    let step = k - ell;
    if n % step != 0 {
        return Err(OracleError::NotDivisible { n, step });
    }
    let m = n / step;
    if (g.c() as u64) < m as u64 {
        return Ok(SearchOutcome::NotFound); // pigeonhole: m edges need m colors
    }
    let block_positions: Vec<Vec<usize>> = (0..m)
        .map(|b| (0..k).map(|j| (b * step + j) % n).collect())
        .collect();
    let mut completes_at = vec![Vec::new(); n];
    for (b, ps) in block_positions.iter().enumerate() {
        let last = *ps.iter().max().expect("blocks are nonempty");
        completes_at[last].push(b);
    }
    let mut search = EllSearch {
        g,
        step,
        order: vec![0; n],
        assigned: vec![false; n],
        used: ColorSet::new(g.c()),
        block_positions,
        completes_at,
        block_color: vec![0; m],
        clock: BudgetClock::new(budget),
    };
    if search.dfs(0) {
        let colors = search.block_color.clone();
        let cert = RainbowCertificate::hamilton_ell_cycle(ell, k, search.order.clone(), colors);
        Ok(SearchOutcome::Found(cert))
    } else if search.clock.exhausted() {
        Ok(SearchOutcome::BudgetExhausted)
    } else {
        Ok(SearchOutcome::NotFound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::ColexSubsets;
    use crate::model::{generate, ModelParams};
    use crate::oracle::find_rainbow_perfect_matching;
    use crate::verify::certificate_ok;

    fn complete_three_uniform_rainbow(n: usize) -> ColoredHypergraph {
        let mut edges = Vec::new();
        let mut it = ColexSubsets::new(n, 3);
        let mut color = 0u32;
        while let Some(s) = it.next_subset() {
            edges.push((s.to_vec(), color));
            color += 1;
        }
        ColoredHypergraph::new(n, 3, color, edges).unwrap()
    }

    #[test]
    fn complete_3_uniform_has_rainbow_matching() {
        let g = complete_three_uniform_rainbow(6);
        assert_eq!(g.edge_count(), 20);
        let out = find_rainbow_ell_cycle(&g, 0, &SearchBudget::default()).unwrap();
        let cert = out.found().expect("two disjoint triples exist");
        assert!(certificate_ok(&g, cert));
        assert_eq!(cert.edges.len(), 2);
    }

    #[test]
    fn empty_hypergraph_has_none() {
        let g = ColoredHypergraph::new(6, 3, 4, vec![]).unwrap();
        let out = find_rainbow_ell_cycle(&g, 1, &SearchBudget::default()).unwrap();
        assert!(out.is_not_found());
    }

    #[test]
    fn divisibility_is_an_error() {
        let g = ColoredHypergraph::new(7, 3, 4, vec![]).unwrap();
        assert!(matches!(
            find_rainbow_ell_cycle(&g, 1, &SearchBudget::default()),
            Err(OracleError::NotDivisible { .. })
        ));
    }

    #[test]
    fn ell1_cycle_on_constructed_host() {
        // host holds exactly the blocks of the ordering 0..5 plus noise
        let g = ColoredHypergraph::new(
            6,
            3,
            9,
            vec![
                (vec![0, 1, 2], 0),
                (vec![2, 3, 4], 1),
                (vec![0, 4, 5], 2),
                (vec![1, 2, 3], 3),
            ],
        )
        .unwrap();
        let out = find_rainbow_ell_cycle(&g, 1, &SearchBudget::default()).unwrap();
        let cert = out.found().expect("the 0..5 ordering works");
        assert!(certificate_ok(&g, cert));
        assert_eq!(cert.edges.len(), 3);
    }

    #[test]
    fn ell0_agrees_with_matching_search() {
        // independent route: reduce ell = 0 to rainbow perfect matching
        for seed in 0..400 {
            let params = ModelParams::new(6, 3, 0.25, 5, seed).unwrap();
            let g = generate(&params);
            let via_cycle = find_rainbow_ell_cycle(&g, 0, &SearchBudget::default())
                .unwrap()
                .found()
                .is_some();
            let via_matching = find_rainbow_perfect_matching(&g, &SearchBudget::default())
                .found()
                .is_some();
            assert_eq!(via_cycle, via_matching, "seed {seed}");
        }
    }
}
