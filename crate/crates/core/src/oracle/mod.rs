//! Exact decision and search for rainbow structures on small instances:
//! the ground truth every heuristic and statistical claim is measured
//! against.
//!
//! `find_rainbow_hamilton_cycle` is complete backtracking over vertex
//! orderings (anchor at vertex 0, orientation fixed by second < last) with
//! color-usage, degree, and connectivity pruning. The naive counter
//! `count_rainbow_hamilton_cycles` enumerates orderings with no pruning
//! beyond edge existence, so the two answer the same question through
//! different code paths.

mod containment;
mod ell;

pub use containment::{exact_containment_probability, StructureKind};
pub use ell::find_rainbow_ell_cycle;

use crate::bitset::Bitset;
use crate::cert::RainbowCertificate;
use crate::colorset::ColorSet;
use crate::graph::ColoredHypergraph;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("n = {n} not divisible by k - ell = {step}")]
    NotDivisible { n: usize, step: usize },
}

/// Caps on the backtracking search.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub node_limit: u64,
    /// Wall-clock cap; `None` keeps the search fully deterministic.
    pub time_limit: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            node_limit: 50_000_000,
            time_limit: None,
        }
    }
}

impl SearchBudget {
    pub fn nodes(node_limit: u64) -> Self {
        SearchBudget {
            node_limit,
            time_limit: None,
        }
    }
}

/// Search result; budget exhaustion is distinct from a proven absence.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(RainbowCertificate),
    NotFound,
    BudgetExhausted,
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&RainbowCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_not_found(&self) -> bool {
        matches!(self, SearchOutcome::NotFound)
    }
}

pub(crate) struct BudgetClock {
    node_limit: u64,
    nodes: u64,
    deadline: Option<Instant>,
    exhausted: bool,
}

impl BudgetClock {
    pub(crate) fn new(budget: &SearchBudget) -> Self {
        BudgetClock {
            node_limit: budget.node_limit,
            nodes: 0,
            deadline: budget.time_limit.map(|d| Instant::now() + d),
            exhausted: false,
        }
    }

    /// Counts a node; returns false once the budget is spent.
    #[inline]
    pub(crate) fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.exhausted = true;
        } else if self.nodes.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.exhausted = true;
                }
            }
        }
        !self.exhausted
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.exhausted
    }
}

struct HcSearch<'a> {
    g: &'a ColoredHypergraph,
    path: Vec<u32>,
    on_path: Bitset,
    used: ColorSet,
    edge_colors: Vec<u32>,
    clock: BudgetClock,
    scratch: Bitset,
    queue: Vec<u32>,
}

impl<'a> HcSearch<'a> {
    fn new(g: &'a ColoredHypergraph, budget: &SearchBudget) -> Self {
        HcSearch {
            g,
            path: vec![0],
            on_path: Bitset::from_indices(g.n(), [0]),
            used: ColorSet::new(g.c()),
            edge_colors: Vec::with_capacity(g.n()),
            clock: BudgetClock::new(budget),
            scratch: Bitset::new(g.n()),
            queue: Vec::with_capacity(g.n()),
        }
    }

    /// Necessary conditions for completing the cycle, ignoring colors:
    /// every unvisited vertex keeps two usable cycle slots and the remainder
    /// is connected.
    fn feasible(&mut self) -> bool {
        let n = self.g.n();
        let current = *self.path.last().expect("path never empty");
        let remaining = n - self.path.len();
        if remaining == 0 {
            return true;
        }
        // degree screen
        for v in 0..n as u32 {
            if self.on_path.contains(v as usize) {
                continue;
            }
            let mut slots = 0;
            for &(w, _) in self.g.neighbors(v) {
                if !self.on_path.contains(w as usize) || w == current || w == 0 {
                    slots += 1;
                    if slots == 2 {
                        break;
                    }
                }
            }
            if slots < 2 {
                return false;
            }
        }
        // connectivity of {unvisited} + current + anchor
        self.scratch.clear();
        self.queue.clear();
        self.scratch.insert(current as usize);
        self.queue.push(current);
        let mut seen_unvisited = 0;
        while let Some(u) = self.queue.pop() {
            for &(w, _) in self.g.neighbors(u) {
                let wi = w as usize;
                if self.scratch.contains(wi) {
                    continue;
                }
                let unvisited = !self.on_path.contains(wi);
                if unvisited || w == 0 {
                    self.scratch.insert(wi);
                    if unvisited {
                        seen_unvisited += 1;
                        self.queue.push(w);
                    }
                }
            }
        }
        seen_unvisited == remaining && self.scratch.contains(0)
    }

    fn dfs(&mut self) -> Option<RainbowCertificate> {
        if !self.clock.tick() {
            return None;
        }
        let n = self.g.n();
        let current = *self.path.last().expect("path never empty");
        if self.path.len() == n {
            // close the cycle; orientation canon: path[1] < path[n-1]
            if self.path[1] > self.path[n - 1] {
                return None;
            }
            if let Some(color) = self.g.color_between(current, 0) {
                if !self.used.contains(color) {
                    let mut colors = self.edge_colors.clone();
                    colors.push(color);
                    return Some(RainbowCertificate::hamilton_cycle(
                        self.path.clone(),
                        colors,
                    ));
                }
            }
            return None;
        }
        if !self.feasible() {
            return None;
        }
        let neighbors: Vec<(u32, u32)> = self.g.neighbors(current).to_vec();
        for (v, color) in neighbors {
            if self.on_path.contains(v as usize) || self.used.contains(color) {
                continue;
            }
            self.path.push(v);
            self.on_path.insert(v as usize);
            self.used.insert(color);
            self.edge_colors.push(color);
            if let Some(cert) = self.dfs() {
                return Some(cert);
            }
            self.edge_colors.pop();
            self.used.remove(color);
            self.on_path.remove(v as usize);
            self.path.pop();
            if self.clock.exhausted() {
                return None;
            }
        }
        None
    }
}

/// Complete backtracking search for a rainbow Hamilton cycle (k = 2).
pub fn find_rainbow_hamilton_cycle(g: &ColoredHypergraph, budget: &SearchBudget) -> SearchOutcome {
    assert_eq!(g.k(), 2, "Hamilton cycle search is defined for graphs");
    let n = g.n();
    if n < 3 || (g.c() as u64) < n as u64 {
        // fewer colors than cycle edges: pigeonhole rules out any rainbow cycle
        return SearchOutcome::NotFound;
    }
    let mut search = HcSearch::new(g, budget);
    match search.dfs() {
        Some(cert) => SearchOutcome::Found(cert),
        None if search.clock.exhausted() => SearchOutcome::BudgetExhausted,
        None => SearchOutcome::NotFound,
    }
}

/// Exact count of rainbow Hamilton cycles (orderings modulo rotation and
/// reflection) by naive enumeration; refuses n > 10.
pub fn count_rainbow_hamilton_cycles(g: &ColoredHypergraph) -> Result<u64, OracleError> {
    assert_eq!(g.k(), 2);
    let n = g.n();
    if n > 10 {
        return Err(OracleError::TooLarge(format!(
            "counting enumerates (n-1)!/2 orderings; n = {n} > 10"
        )));
    }
    if n < 3 {
        return Ok(0);
    }
    let mut rest: Vec<u32> = (1..n as u32).collect();
    let mut count = 0u64;
    permute_count(g, &mut rest, 0, &mut count);
    Ok(count)
}

fn permute_count(g: &ColoredHypergraph, rest: &mut Vec<u32>, at: usize, count: &mut u64) {
    let n = g.n();
    if at == rest.len() {
        // canonical orientation: second vertex below last
        if rest[0] > rest[n - 2] {
            return;
        }
        // check the full ordering 0, rest[0], ..., rest[n-2]
        let mut used = ColorSet::new(g.c());
        let mut prev = 0u32;
        for &v in rest.iter() {
            match g.color_between(prev, v) {
                Some(c) if !used.contains(c) => used.insert(c),
                _ => return,
            }
            prev = v;
        }
        match g.color_between(prev, 0) {
            Some(c) if !used.contains(c) => *count += 1,
            _ => {}
        }
        return;
    }
    for i in at..rest.len() {
        rest.swap(at, i);
        permute_count(g, rest, at + 1, count);
        rest.swap(at, i);
    }
}

/// Complete backtracking search for a rainbow perfect matching in a
/// k-uniform hypergraph. Returns NotFound when k does not divide n.
pub fn find_rainbow_perfect_matching(
    g: &ColoredHypergraph,
    budget: &SearchBudget,
) -> SearchOutcome {
    let (n, k) = (g.n(), g.k());
    if n % k != 0 {
        return SearchOutcome::NotFound;
    }
    let mut covered = Bitset::new(n);
    let mut used = ColorSet::new(g.c());
    let mut chosen: Vec<usize> = Vec::with_capacity(n / k);
    let mut clock = BudgetClock::new(budget);
    let found = pm_dfs(g, &mut covered, &mut used, &mut chosen, &mut clock);
    if found {
        let edges: Vec<Vec<u32>> = chosen.iter().map(|&e| g.edge(e).to_vec()).collect();
        let colors: Vec<u32> = chosen.iter().map(|&e| g.color(e)).collect();
        SearchOutcome::Found(RainbowCertificate::perfect_matching(edges, colors))
    } else if clock.exhausted() {
        SearchOutcome::BudgetExhausted
    } else {
        SearchOutcome::NotFound
    }
}

fn pm_dfs(
    g: &ColoredHypergraph,
    covered: &mut Bitset,
    used: &mut ColorSet,
    chosen: &mut Vec<usize>,
    clock: &mut BudgetClock,
) -> bool {
    if !clock.tick() {
        return false;
    }
    let n = g.n();
    // smallest uncovered vertex
    let Some(v) = (0..n as u32).find(|&v| !covered.contains(v as usize)) else {
        return true;
    };
    for &e in g.edges_at(v) {
        let e = e as usize;
        let color = g.color(e);
        if used.contains(color) {
            continue;
        }
        let vs = g.edge(e);
        if vs.iter().any(|&u| covered.contains(u as usize)) {
            continue;
        }
        for &u in vs {
            covered.insert(u as usize);
        }
        used.insert(color);
        chosen.push(e);
        if pm_dfs(g, covered, used, chosen, clock) {
            return true;
        }
        chosen.pop();
        used.remove(color);
        for &u in vs {
            covered.remove(u as usize);
        }
        if clock.exhausted() {
            return false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ColoredHypergraph;
    use crate::verify::certificate_ok;

    #[test]
    fn k4_distinct_colors_found() {
        let g = ColoredHypergraph::complete_rainbow(4);
        let out = find_rainbow_hamilton_cycle(&g, &SearchBudget::default());
        let cert = out.found().expect("K4 rainbow has a Hamilton cycle");
        assert!(certificate_ok(&g, cert));
    }

    #[test]
    fn c5_with_repeated_color_none() {
        // cycle edges only, colored (1,1,2,3,4): the unique Hamilton cycle
        // repeats color 1
        let edges = vec![
            (vec![0, 1], 0),
            (vec![1, 2], 0),
            (vec![2, 3], 1),
            (vec![3, 4], 2),
            (vec![0, 4], 3),
        ];
        let g = ColoredHypergraph::new(5, 2, 5, edges).unwrap();
        assert!(find_rainbow_hamilton_cycle(&g, &SearchBudget::default()).is_not_found());
    }

    #[test]
    fn count_examples() {
        assert_eq!(
            count_rainbow_hamilton_cycles(&ColoredHypergraph::complete_rainbow(4)).unwrap(),
            3
        );
        assert_eq!(
            count_rainbow_hamilton_cycles(&ColoredHypergraph::complete_rainbow(5)).unwrap(),
            12
        );
        let mut edges = Vec::new();
        for a in 0..5u32 {
            for b in a + 1..5 {
                edges.push((vec![a, b], 0));
            }
        }
        let mono = ColoredHypergraph::new(5, 2, 1, edges).unwrap();
        assert_eq!(count_rainbow_hamilton_cycles(&mono).unwrap(), 0);
        assert!(count_rainbow_hamilton_cycles(&ColoredHypergraph::complete_rainbow(11)).is_err());
    }

    #[test]
    fn adversarial_k5_paired_colors_decided_by_enumeration() {
        // K5 with color classes of size 2: 5 colors on 10 edges, paired so
        // that opposite edges share a color.
        let mut edges = Vec::new();
        let mut idx = 0u32;
        for a in 0..5u32 {
            for b in a + 1..5 {
                edges.push((vec![a, b], idx % 5));
                idx += 1;
            }
        }
        let g = ColoredHypergraph::new(5, 2, 5, edges).unwrap();
        let count = count_rainbow_hamilton_cycles(&g).unwrap();
        let found = find_rainbow_hamilton_cycle(&g, &SearchBudget::default());
        assert_eq!(count > 0, found.found().is_some());
        if let Some(cert) = found.found() {
            assert!(certificate_ok(&g, cert));
        }
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        let g = ColoredHypergraph::complete_rainbow(9);
        let out = find_rainbow_hamilton_cycle(&g, &SearchBudget::nodes(2));
        assert!(matches!(out, SearchOutcome::BudgetExhausted));
    }

    #[test]
    fn pigeonhole_short_circuit() {
        let mut edges = Vec::new();
        for a in 0..5u32 {
            for b in a + 1..5 {
                edges.push((vec![a, b], (a + b) % 4));
            }
        }
        let g = ColoredHypergraph::new(5, 2, 4, edges).unwrap();
        assert!(find_rainbow_hamilton_cycle(&g, &SearchBudget::default()).is_not_found());
    }

    #[test]
    fn rainbow_pm_search() {
        let g = ColoredHypergraph::new(
            6,
            3,
            20,
            vec![(vec![0, 1, 2], 3), (vec![3, 4, 5], 7), (vec![0, 1, 3], 7)],
        )
        .unwrap();
        let out = find_rainbow_perfect_matching(&g, &SearchBudget::default());
        let cert = out.found().unwrap();
        assert!(certificate_ok(&g, cert));
        // make the only matching non-rainbow
        let g2 = ColoredHypergraph::new(
            6,
            3,
            20,
            vec![(vec![0, 1, 2], 3), (vec![3, 4, 5], 3)],
        )
        .unwrap();
        assert!(find_rainbow_perfect_matching(&g2, &SearchBudget::default()).is_not_found());
    }
}
