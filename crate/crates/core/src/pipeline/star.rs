//! Stage 3: rainbow D-matching from S into the reservoir W with colors
//! from C1.
//!
//! Every s in S needs exactly D edges into W; reservoir vertices and colors
//! are each used at most once. Two matching relaxations (ignore colors /
//! ignore reservoir conflicts) run first: if either maxes out below D|S| the
//! instance is infeasible and the deficient side is reported as a cut.
//! Otherwise an exact backtracking search settles the joint problem.

use crate::bitset::Bitset;
use crate::colorset::ColorSet;
use crate::graph::ColoredHypergraph;
use crate::pipeline::{Stage, StageFailure};
use crate::verify::is_d_matching;
use std::collections::HashMap;

fn fail(reason: impl Into<String>) -> StageFailure {
    StageFailure::new(Stage::StarMatching, reason)
}

/// Bipartite matching of slots (d copies of each left vertex) against
/// abstract right ids; returns the matched count and, when deficient, the
/// Hall violator built from alternating reachability.
struct SlotMatcher {
    /// adjacency: per left vertex, right ids
    adj: Vec<Vec<usize>>,
    right_match: Vec<Option<usize>>, // right -> left
    d: usize,
}

impl SlotMatcher {
    fn new(adj: Vec<Vec<usize>>, right_count: usize, d: usize) -> Self {
        SlotMatcher {
            adj,
            right_match: vec![None; right_count],
            d,
        }
    }

    /// Kuhn augmentation: stealing a right forces its owner to replace
    /// exactly that unit, so per-unit augmentation handles left quotas.
    fn augment(&mut self, left: usize, visited: &mut [bool]) -> bool {
        for idx in 0..self.adj[left].len() {
            let r = self.adj[left][idx];
            if visited[r] {
                continue;
            }
            visited[r] = true;
            let owner = self.right_match[r];
            if owner.is_none() || self.augment(owner.expect("checked"), visited) {
                self.right_match[r] = Some(left);
                return true;
            }
        }
        false
    }

    /// Runs max matching with quota d per left vertex; returns total matched.
    fn run(&mut self) -> usize {
        let lefts = self.adj.len();
        let rights = self.right_match.len();
        let mut total = 0;
        for left in 0..lefts {
            for _ in 0..self.d {
                let mut visited = vec![false; rights];
                if self.augment(left, &mut visited) {
                    total += 1;
                }
            }
        }
        total
    }
}

/// Runs one relaxation; `right_of` maps an available edge to its abstract
/// right id (reservoir vertex or color).
fn relaxation_bound(
    avail: &[Vec<(u32, u32)>],
    right_count: usize,
    right_of: impl Fn(&(u32, u32)) -> usize,
    d: usize,
) -> usize {
    let adj: Vec<Vec<usize>> = avail
        .iter()
        .map(|list| {
            let mut rights: Vec<usize> = list.iter().map(&right_of).collect();
            rights.sort_unstable();
            rights.dedup();
            rights
        })
        .collect();
    SlotMatcher::new(adj, right_count, d).run()
}

pub fn star_matching(
    g: &ColoredHypergraph,
    s: &[u32],
    w: &[u32],
    c1: &ColorSet,
    d: u32,
    node_budget: u64,
) -> Result<Vec<(u32, u32)>, StageFailure> {
    assert_eq!(g.k(), 2);
    if d == 0 {
        return Err(fail("D = 0 makes the matching vacuous"));
    }
    let need = d as usize * s.len();
    if need > w.len() {
        return Err(fail(format!(
            "counting cut: D|S| = {need} exceeds |W| = {}",
            w.len()
        )));
    }
    let w_bits = Bitset::from_indices(g.n(), w.iter().map(|&v| v as usize));
    // availability lists: edges s-w with color in C1
    let avail: Vec<Vec<(u32, u32)>> = s
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|&(u, col)| w_bits.contains(u as usize) && c1.contains(col))
                .collect()
        })
        .collect();
    for (i, list) in avail.iter().enumerate() {
        if list.len() < d as usize {
            return Err(fail(format!(
                "vertex {} has only {} C1-colored edges into W, needs {d}",
                s[i] + 1,
                list.len()
            )));
        }
    }
    // relaxation screens
    let w_index: HashMap<u32, usize> = w.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let matched = relaxation_bound(&avail, w.len(), |&(u, _)| w_index[&u], d as usize);
    if matched < need {
        return Err(fail(format!(
            "reservoir cut: ignoring colors, at most {matched} of {need} slot assignments exist"
        )));
    }
    let mut color_ids: Vec<u32> = avail
        .iter()
        .flat_map(|l| l.iter().map(|&(_, col)| col))
        .collect();
    color_ids.sort_unstable();
    color_ids.dedup();
    let color_index: HashMap<u32, usize> = color_ids
        .iter()
        .enumerate()
        .map(|(i, &col)| (col, i))
        .collect();
    let matched = relaxation_bound(&avail, color_ids.len(), |&(_, col)| color_index[&col], d as usize);
    if matched < need {
        return Err(fail(format!(
            "color cut: ignoring reservoir conflicts, at most {matched} of {need} slot assignments exist"
        )));
    }
    // exact search, scarcest vertices first
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by_key(|&i| avail[i].len());
    let mut w_used = Bitset::new(g.n());
    let mut used_colors = ColorSet::new(g.c());
    let mut picked: Vec<(u32, u32)> = Vec::with_capacity(need);
    let mut nodes = 0u64;
    if !search(
        g,
        s,
        &avail,
        &order,
        0,
        d as usize,
        &mut w_used,
        &mut used_colors,
        &mut picked,
        &mut nodes,
        node_budget,
    ) {
        if nodes > node_budget {
            return Err(fail(format!("search budget {node_budget} exhausted")));
        }
        return Err(fail(
            "no rainbow D-matching despite both relaxations passing",
        ));
    }
    debug_assert!(is_d_matching(g, s, w, &picked, d));
    Ok(picked)
}

#[allow(clippy::too_many_arguments)]
fn search(
    g: &ColoredHypergraph,
    s: &[u32],
    avail: &[Vec<(u32, u32)>],
    order: &[usize],
    pos: usize,
    d: usize,
    w_used: &mut Bitset,
    used_colors: &mut ColorSet,
    picked: &mut Vec<(u32, u32)>,
    nodes: &mut u64,
    node_budget: u64,
) -> bool {
    if pos == order.len() {
        return true;
    }
    *nodes += 1;
    if *nodes > node_budget {
        return false;
    }
    let i = order[pos];
    let free: Vec<(u32, u32)> = avail[i]
        .iter()
        .copied()
        .filter(|&(u, col)| !w_used.contains(u as usize) && !used_colors.contains(col))
        .collect();
    if free.len() < d {
        return false;
    }
    // choose d of the free options
    choose_rec(
        g, s, avail, order, pos, d, &free, 0, 0, w_used, used_colors, picked, nodes, node_budget,
    )
}

#[allow(clippy::too_many_arguments)]
fn choose_rec(
    g: &ColoredHypergraph,
    s: &[u32],
    avail: &[Vec<(u32, u32)>],
    order: &[usize],
    pos: usize,
    d: usize,
    free: &[(u32, u32)],
    start: usize,
    taken: usize,
    w_used: &mut Bitset,
    used_colors: &mut ColorSet,
    picked: &mut Vec<(u32, u32)>,
    nodes: &mut u64,
    node_budget: u64,
) -> bool {
    if taken == d {
        return search(
            g,
            s,
            avail,
            order,
            pos + 1,
            d,
            w_used,
            used_colors,
            picked,
            nodes,
            node_budget,
        );
    }
    if free.len() - start < d - taken {
        return false;
    }
    for idx in start..free.len() {
        let (u, col) = free[idx];
        if w_used.contains(u as usize) || used_colors.contains(col) {
            continue;
        }
        let v = s[order[pos]];
        w_used.insert(u as usize);
        used_colors.insert(col);
        picked.push((v.min(u), v.max(u)));
        if choose_rec(
            g,
            s,
            avail,
            order,
            pos,
            d,
            free,
            idx + 1,
            taken + 1,
            w_used,
            used_colors,
            picked,
            nodes,
            node_budget,
        ) {
            return true;
        }
        picked.pop();
        used_colors.remove(col);
        w_used.remove(u as usize);
        if *nodes > node_budget {
            return false;
        }
    }
    false
}
