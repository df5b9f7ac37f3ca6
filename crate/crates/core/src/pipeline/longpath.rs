//! Stage 2: greedy DFS for a long rainbow path on the eligible vertices.
//!
//! A step to a new vertex is legal only along an edge whose color is allowed
//! and unused; dead ends backtrack and release their color. When an attempt's
//! node budget runs out, the best path found so far is rotated at its far
//! endpoint and the search resumes from the new endpoint.

use crate::bitset::Bitset;
use crate::colorset::ColorSet;
use crate::graph::ColoredHypergraph;
use crate::pipeline::{PipelineConfig, Stage, StageFailure};
use crate::rng::{SplitMix64, StreamTag};

#[derive(Clone, Debug)]
pub struct LongPathOutcome {
    pub path: Vec<u32>,
    /// colors[i] colors the edge path[i]-path[i+1].
    pub colors: Vec<u32>,
}

struct PathState {
    c: u32,
    path: Vec<u32>,
    colors: Vec<u32>,
    on_path: Bitset,
    used: ColorSet,
}

impl PathState {
    fn new(n: usize, c: u32, start: u32) -> Self {
        PathState {
            c,
            path: vec![start],
            colors: Vec::new(),
            on_path: Bitset::from_indices(n, [start as usize]),
            used: ColorSet::new(c),
        }
    }

    fn push(&mut self, v: u32, color: u32) {
        self.path.push(v);
        self.colors.push(color);
        self.on_path.insert(v as usize);
        self.used.insert(color);
    }

    fn pop(&mut self) {
        let v = self.path.pop().expect("pop on nonempty path");
        self.on_path.remove(v as usize);
        let c = self.colors.pop().expect("colors parallel to path");
        self.used.remove(c);
    }
}

pub fn rainbow_long_path(
    g: &ColoredHypergraph,
    allowed: &ColorSet,
    forbidden: &Bitset,
    target_deficit: u64,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<LongPathOutcome, StageFailure> {
    assert_eq!(g.k(), 2);
    let n = g.n();
    let eligible: Vec<u32> = (0..n as u32)
        .filter(|&v| !forbidden.contains(v as usize))
        .collect();
    if eligible.len() < 2 {
        return Err(StageFailure::new(
            Stage::LongPath,
            format!("only {} eligible vertices", eligible.len()),
        ));
    }
    // a path must keep two distinct endpoints
    let bar = (eligible.len() as u64).saturating_sub(target_deficit).max(2) as usize;

    let mut best: Option<(Vec<u32>, Vec<u32>)> = None;
    for attempt in 0..=cfg.path_restarts {
        let mut rng = SplitMix64::from_stream(seed, StreamTag::PathSearch, attempt as u64);
        let mut state = match (&best, attempt % 2) {
            // odd attempts resume from the best path after a rotation
            (Some((path, colors)), 1) => {
                let mut st = PathState::new(n, g.c(), path[0]);
                for (i, &v) in path.iter().enumerate().skip(1) {
                    st.push(v, colors[i - 1]);
                }
                rotate(g, &mut st, allowed, &mut rng);
                st
            }
            _ => PathState::new(
                n,
                g.c(),
                eligible[rng.below_usize(eligible.len())],
            ),
        };
        if dfs_extend(g, &mut state, allowed, forbidden, bar, cfg.path_node_budget, &mut rng) {
            return Ok(LongPathOutcome {
                path: state.path,
                colors: state.colors,
            });
        }
        if best.as_ref().is_none_or(|(p, _)| p.len() < state.path.len()) {
            best = Some((state.path.clone(), state.colors.clone()));
        }
    }
    let best_len = best.map(|(p, _)| p.len()).unwrap_or(0);
    Err(StageFailure::new(
        Stage::LongPath,
        format!(
            "best path covers {best_len} of {} eligible vertices, need {bar}",
            eligible.len()
        ),
    ))
}

/// DFS with full backtracking under a node budget; true once the path covers
/// `bar` vertices. On return false, `state` holds the deepest prefix reached
/// when the budget died, or the start vertex after exhausting the space.
fn dfs_extend(
    g: &ColoredHypergraph,
    state: &mut PathState,
    allowed: &ColorSet,
    forbidden: &Bitset,
    bar: usize,
    node_budget: u64,
    rng: &mut SplitMix64,
) -> bool {
    let mut nodes = 0u64;
    let mut deepest: Vec<u32> = state.path.clone();
    let mut deepest_colors: Vec<u32> = state.colors.clone();
    // frames: candidate lists per depth
    let mut frames: Vec<Vec<(u32, u32)>> = vec![candidates(g, state, allowed, forbidden, rng)];
    while let Some(frame) = frames.last_mut() {
        if state.path.len() >= bar {
            return true;
        }
        nodes += 1;
        if nodes > node_budget {
            // keep the deepest path seen
            restore(state, &deepest, &deepest_colors);
            return state.path.len() >= bar;
        }
        match frame.pop() {
            Some((v, color)) => {
                if state.on_path.contains(v as usize) || state.used.contains(color) {
                    continue;
                }
                state.push(v, color);
                if state.path.len() > deepest.len() {
                    deepest = state.path.clone();
                    deepest_colors = state.colors.clone();
                }
                frames.push(candidates(g, state, allowed, forbidden, rng));
            }
            None => {
                frames.pop();
                if !frames.is_empty() {
                    state.pop();
                }
            }
        }
    }
    restore(state, &deepest, &deepest_colors);
    state.path.len() >= bar
}

fn restore(state: &mut PathState, path: &[u32], colors: &[u32]) {
    *state = PathState::new(state.on_path.capacity(), state.c, path[0]);
    for (i, &v) in path.iter().enumerate().skip(1) {
        state.push(v, colors[i - 1]);
    }
}

fn candidates(
    g: &ColoredHypergraph,
    state: &PathState,
    allowed: &ColorSet,
    forbidden: &Bitset,
    rng: &mut SplitMix64,
) -> Vec<(u32, u32)> {
    let u = *state.path.last().expect("path nonempty");
    let mut out: Vec<(u32, u32)> = g
        .neighbors(u)
        .iter()
        .copied()
        .filter(|&(v, col)| {
            !forbidden.contains(v as usize)
                && !state.on_path.contains(v as usize)
                && allowed.contains(col)
                && !state.used.contains(col)
        })
        .collect();
    rng.shuffle(&mut out);
    out
}

/// Posa rotation at the far endpoint: pick an allowed edge from the endpoint
/// to a path interior vertex, flip the tail, release the removed edge's color.
fn rotate(g: &ColoredHypergraph, state: &mut PathState, allowed: &ColorSet, rng: &mut SplitMix64) {
    let t = state.path.len();
    if t < 3 {
        return;
    }
    let y = state.path[t - 1];
    let mut options: Vec<usize> = Vec::new();
    for i in 0..t.saturating_sub(2) {
        let v = state.path[i];
        if let Some(col) = g.color_between(y, v) {
            let removed = state.colors[i]; // edge path[i]-path[i+1]
            if allowed.contains(col) && (!state.used.contains(col) || col == removed) {
                options.push(i);
            }
        }
    }
    if options.is_empty() {
        return;
    }
    let i = options[rng.below_usize(options.len())];
    let v = state.path[i];
    let new_col = g.color_between(y, v).expect("option came from adjacency");
    let removed = state.colors[i];
    state.used.remove(removed);
    state.used.insert(new_col);
    // path: p0..pi, y, p_{t-1}.., p_{i+1}; colors re-derived for the flipped tail
    let tail: Vec<u32> = state.path[i + 1..].iter().rev().copied().collect();
    state.path.truncate(i + 1);
    state.path.extend_from_slice(&tail);
    state.colors[i] = new_col;
    for j in i + 1..t - 1 {
        let col = g
            .color_between(state.path[j], state.path[j + 1])
            .expect("tail edges existed on the path");
        state.colors[j] = col;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ColoredHypergraph;

    fn all_colors(c: u32) -> ColorSet {
        ColorSet::from_iter_with_palette(c, 0..c)
    }

    #[test]
    fn rainbow_k10_reaches_hamilton_path() {
        let g = ColoredHypergraph::complete_rainbow(10);
        let out = rainbow_long_path(
            &g,
            &all_colors(g.c()),
            &Bitset::new(10),
            0,
            &PipelineConfig::default(),
            3,
        )
        .expect("greedy succeeds on a complete rainbow host");
        assert_eq!(out.path.len(), 10);
        assert_eq!(out.colors.len(), 9);
        // rainbow and edges exist
        let mut seen = std::collections::HashSet::new();
        for (w, &col) in out.path.windows(2).zip(&out.colors) {
            assert_eq!(g.color_between(w[0], w[1]), Some(col));
            assert!(seen.insert(col));
        }
    }

    #[test]
    fn monochromatic_path_graph_fails_small_deficits() {
        // P10 colored all-1: adjacent edges share the color, no rainbow path
        // beyond one edge
        let edges = (0..9)
            .map(|i| (vec![i as u32, i as u32 + 1], 0))
            .collect();
        let g = ColoredHypergraph::new(10, 2, 1, edges).unwrap();
        let err = rainbow_long_path(
            &g,
            &all_colors(1),
            &Bitset::new(10),
            7,
            &PipelineConfig::default(),
            3,
        )
        .unwrap_err();
        assert_eq!(err.stage, Stage::LongPath);
        // deficit 8 passes: a 2-vertex path suffices
        let ok = rainbow_long_path(
            &g,
            &all_colors(1),
            &Bitset::new(10),
            8,
            &PipelineConfig::default(),
            3,
        )
        .unwrap();
        assert_eq!(ok.path.len(), 2);
    }

    #[test]
    fn forbidden_vertices_stay_off_the_path() {
        let g = ColoredHypergraph::complete_rainbow(12);
        let forbidden = Bitset::from_indices(12, [0usize, 5, 7]);
        let out = rainbow_long_path(
            &g,
            &all_colors(g.c()),
            &forbidden,
            0,
            &PipelineConfig::default(),
            9,
        )
        .unwrap();
        assert_eq!(out.path.len(), 9);
        assert!(out.path.iter().all(|&v| !forbidden.contains(v as usize)));
    }

    #[test]
    fn color_restriction_respected() {
        // allow only colors of edges at vertex 0: path length limited
        let g = ColoredHypergraph::complete_rainbow(6);
        let mut allowed = ColorSet::new(g.c());
        for &(_, col) in g.neighbors(0) {
            allowed.insert(col);
        }
        let out = rainbow_long_path(
            &g,
            &allowed,
            &Bitset::new(6),
            4,
            &PipelineConfig::default(),
            11,
        )
        .unwrap();
        for (w, &col) in out.path.windows(2).zip(&out.colors) {
            assert_eq!(g.color_between(w[0], w[1]), Some(col));
            assert!(allowed.contains(col));
        }
    }
}
