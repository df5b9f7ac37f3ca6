//! Stage 5: close the cycle with boosters.
//!
//! A virtual edge joins the designated endpoints x', y'; the goal is a
//! Hamilton cycle of G1 through it, equivalently a Hamilton x'-y' path.
//! While rotation-extension fails, one booster is added: a non-edge of G1,
//! present in G with an unused admissible color, that merges components,
//! extends the longest path the rotations found, or closes the cycle.
//! Tie-breaking is smallest global colex rank, then smallest color, so runs
//! replay exactly.

use crate::colorset::ColorSet;
use crate::combin::colex_rank;
use crate::graph::ColoredHypergraph;
use crate::pipeline::{Subgraph, PipelineConfig, Stage, StageFailure};
use crate::rng::{SplitMix64, StreamTag};

#[derive(Clone, Debug)]
pub struct BoosterOutcome {
    /// Hamilton path from x' to y' in global vertex ids.
    pub path: Vec<u32>,
    pub iterations: u32,
    pub added: u32,
    pub available_per_iteration: Vec<usize>,
}

fn fail(reason: impl Into<String>) -> StageFailure {
    StageFailure::new(Stage::Boosters, reason)
}

enum RotationResult {
    /// Local-id Hamilton path from x to y.
    Found(Vec<usize>),
    Stuck {
        path: Vec<usize>,
        endpoints_seen: Vec<(usize, usize)>,
    },
}

pub fn booster_close(
    g: &ColoredHypergraph,
    g1: &mut Subgraph,
    x_prime: u32,
    y_prime: u32,
    available: &mut ColorSet,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<BoosterOutcome, StageFailure> {
    let nv = g1.len();
    if nv < 3 {
        return Err(fail(format!("G1 has only {nv} vertices")));
    }
    let (x, y) = (g1.local(x_prime), g1.local(y_prime));
    if x == y {
        return Err(fail("endpoints coincide"));
    }
    let cap = 2 * nv as u32;
    let mut added = 0u32;
    let mut available_per_iteration = Vec::new();
    for iter in 0..cap {
        available_per_iteration.push(available.len());
        let comps = components_with_virtual(g1, x, y);
        let candidate = if comps.classes > 1 {
            // merge two components
            best_admissible(g, g1, available, |a, b| comps.id[a] != comps.id[b])
        } else {
            let mut rng = SplitMix64::from_stream(seed, StreamTag::BoosterSearch, iter as u64);
            match rotation_search(g1, x, y, cfg.booster_search_steps, &mut rng) {
                RotationResult::Found(path_local) => {
                    let path = path_local.iter().map(|&v| g1.label(v)).collect();
                    return Ok(BoosterOutcome {
                        path,
                        iterations: iter + 1,
                        added,
                        available_per_iteration,
                    });
                }
                RotationResult::Stuck {
                    path,
                    endpoints_seen,
                } => {
                    let on_path = vec_to_mask(nv, &path);
                    let mut interesting = endpoints_seen;
                    interesting.push((path[0], *path.last().expect("nonempty")));
                    best_admissible(g, g1, available, |a, b| {
                        interesting.iter().any(|&(u, v)| {
                            // closure of a rotated path, or extension from
                            // one of its endpoints to an off-path vertex
                            (a == u && b == v)
                                || (a == v && b == u)
                                || ((a == u || a == v) && !on_path[b])
                                || ((b == u || b == v) && !on_path[a])
                        })
                    })
                }
            }
        };
        match candidate {
            Some((ga, gb, color)) => {
                g1.insert(ga, gb, color);
                available.remove(color);
                added += 1;
            }
            None => {
                return Err(fail(format!(
                    "no admissible booster at iteration {} ({} colors left)",
                    iter + 1,
                    available.len()
                )))
            }
        }
    }
    Err(fail(format!("iteration cap {cap} reached")))
}

fn vec_to_mask(n: usize, xs: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in xs {
        mask[v] = true;
    }
    mask
}

struct Components {
    id: Vec<usize>,
    classes: usize,
}

fn components_with_virtual(g1: &Subgraph, x: usize, y: usize) -> Components {
    let n = g1.len();
    let mut id = vec![usize::MAX; n];
    let mut classes = 0;
    for start in 0..n {
        if id[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        id[start] = classes;
        while let Some(u) = stack.pop() {
            let push = |v: usize, id: &mut Vec<usize>, stack: &mut Vec<usize>| {
                if id[v] == usize::MAX {
                    id[v] = classes;
                    stack.push(v);
                }
            };
            for &v in g1.neighbors(u) {
                push(v, &mut id, &mut stack);
            }
            if u == x {
                push(y, &mut id, &mut stack);
            }
            if u == y {
                push(x, &mut id, &mut stack);
            }
        }
        classes += 1;
    }
    Components { id, classes }
}

/// Smallest admissible booster under (global colex rank, color): a non-edge
/// of G1 on V(G1), present in G, whose color is still available, and
/// satisfying the stage predicate on local endpoints.
fn best_admissible(
    g: &ColoredHypergraph,
    g1: &Subgraph,
    available: &ColorSet,
    pred: impl Fn(usize, usize) -> bool,
) -> Option<(u32, u32, u32)> {
    let n = g1.len();
    let mut best: Option<(u64, u32, u32, u32, u32)> = None;
    for a in 0..n {
        for b in a + 1..n {
            if g1.has(a, b) || !pred(a, b) {
                continue;
            }
            let (ga, gb) = (g1.label(a), g1.label(b));
            let (ga, gb) = (ga.min(gb), ga.max(gb));
            let Some(color) = g.color_between(ga, gb) else {
                continue;
            };
            if !available.contains(color) {
                continue;
            }
            let key = (colex_rank(&[ga, gb]), color);
            if best.is_none_or(|(r, c, ..)| (key.0, key.1) < (r, c)) {
                best = Some((key.0, key.1, ga, gb, color));
            }
        }
    }
    best.map(|(_, _, ga, gb, color)| (ga, gb, color))
}

/// Rotation-extension on G1 + virtual xy. The path always keeps x adjacent
/// to y (the virtual edge); success is a spanning path whose real closing
/// edge completes a cycle through the virtual edge.
fn rotation_search(
    g1: &Subgraph,
    x: usize,
    y: usize,
    steps: u64,
    rng: &mut SplitMix64,
) -> RotationResult {
    let n = g1.len();
    let mut path: Vec<usize> = vec![x, y];
    let mut on_path = vec![false; n];
    on_path[x] = true;
    on_path[y] = true;
    let mut endpoints_seen: Vec<(usize, usize)> = Vec::new();
    let virtual_pair = |a: usize, b: usize| (a == x && b == y) || (a == y && b == x);

    for _ in 0..steps {
        // extend greedily at both ends
        let mut extended = true;
        while extended {
            extended = false;
            for end in [false, true] {
                let u = if end {
                    *path.last().expect("nonempty")
                } else {
                    path[0]
                };
                let free: Vec<usize> = g1
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&v| !on_path[v])
                    .collect();
                if !free.is_empty() {
                    let v = free[rng.below_usize(free.len())];
                    if end {
                        path.push(v);
                    } else {
                        path.insert(0, v);
                    }
                    on_path[v] = true;
                    extended = true;
                }
            }
        }
        let (front, back) = (path[0], *path.last().expect("nonempty"));
        let closable = path.len() >= 3 && g1.has(front, back) && !virtual_pair(front, back);
        if closable {
            if path.len() == n {
                return RotationResult::Found(ham_path_from_cycle(&path, x, y));
            }
            // non-spanning cycle: absorb an off-path vertex adjacent to it
            if let Some((pos, z)) = cycle_attachment(g1, &path, &on_path, rng) {
                // new path starts at z, enters the cycle at position pos,
                // and walks the cycle leaving out one edge next to pos
                let rotated = reattach_cycle(&path, pos, virtual_pair);
                if let Some(mut new_path) = rotated {
                    new_path.insert(0, z);
                    on_path[z] = true;
                    path = new_path;
                    continue;
                }
            }
        }
        // rotate at a random end
        let rotated = if rng.coin(0.5) {
            try_rotate_back(g1, &mut path, rng, &virtual_pair)
        } else {
            try_rotate_front(g1, &mut path, rng, &virtual_pair)
        };
        if !rotated {
            // try the other end before giving up
            let other = if rng.coin(0.5) {
                try_rotate_back(g1, &mut path, rng, &virtual_pair)
            } else {
                try_rotate_front(g1, &mut path, rng, &virtual_pair)
            };
            if !other {
                break;
            }
        }
        let pair = (path[0], *path.last().expect("nonempty"));
        if endpoints_seen.len() < 4 * n && !endpoints_seen.contains(&pair) {
            endpoints_seen.push(pair);
        }
    }
    RotationResult::Stuck {
        path,
        endpoints_seen,
    }
}

/// Hamilton x-y path from a spanning cycle (path + closing edge) by cutting
/// the x-y adjacency.
fn ham_path_from_cycle(path: &[usize], x: usize, y: usize) -> Vec<usize> {
    let n = path.len();
    let pos_x = path.iter().position(|&v| v == x).expect("x on path");
    // x and y are cyclically adjacent; walk away from y
    let next = path[(pos_x + 1) % n];
    let step_back = next == y;
    let mut out = Vec::with_capacity(n);
    let mut i = pos_x;
    for _ in 0..n {
        out.push(path[i]);
        i = if step_back { (i + n - 1) % n } else { (i + 1) % n };
    }
    debug_assert_eq!(out[0], x);
    debug_assert_eq!(*out.last().expect("nonempty"), y);
    out
}

/// Finds an off-path vertex adjacent to the cycle, returning (position, z).
fn cycle_attachment(
    g1: &Subgraph,
    path: &[usize],
    on_path: &[bool],
    rng: &mut SplitMix64,
) -> Option<(usize, usize)> {
    let mut options: Vec<(usize, usize)> = Vec::new();
    for (pos, &u) in path.iter().enumerate() {
        for &z in g1.neighbors(u) {
            if !on_path[z] {
                options.push((pos, z));
            }
        }
    }
    if options.is_empty() {
        None
    } else {
        Some(options[rng.below_usize(options.len())])
    }
}

/// Reorders the cycle (path + closing edge) into a path beginning at
/// `path[pos]`, dropping one cycle edge incident to that vertex (never the
/// virtual one).
fn reattach_cycle(
    path: &[usize],
    pos: usize,
    virtual_pair: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let n = path.len();
    let prev = path[(pos + n - 1) % n];
    let next = path[(pos + 1) % n];
    let at = path[pos];
    if !virtual_pair(prev, at) {
        // drop edge (prev, at): walk forward from at
        let mut out = Vec::with_capacity(n);
        let mut i = pos;
        for _ in 0..n {
            out.push(path[i]);
            i = (i + 1) % n;
        }
        Some(out)
    } else if !virtual_pair(at, next) {
        let mut out = Vec::with_capacity(n);
        let mut i = pos;
        for _ in 0..n {
            out.push(path[i]);
            i = (i + n - 1) % n;
        }
        Some(out)
    } else {
        None
    }
}

fn collect_rotations(
    g1: &Subgraph,
    path: &[usize],
    at_back: bool,
    virtual_pair: &impl Fn(usize, usize) -> bool,
) -> Vec<usize> {
    let t = path.len();
    if t < 3 {
        return Vec::new();
    }
    let endpoint = if at_back { path[t - 1] } else { path[0] };
    let mut pivots = Vec::new();
    for &u in g1.neighbors(endpoint) {
        // pivot index i in path coordinates
        let Some(i) = path.iter().position(|&v| v == u) else {
            continue;
        };
        if at_back {
            if i + 2 < t && !virtual_pair(path[i], path[i + 1]) {
                pivots.push(i);
            }
        } else if i >= 2 && !virtual_pair(path[i - 1], path[i]) {
            pivots.push(i);
        }
    }
    pivots
}

fn try_rotate_back(
    g1: &Subgraph,
    path: &mut Vec<usize>,
    rng: &mut SplitMix64,
    virtual_pair: &impl Fn(usize, usize) -> bool,
) -> bool {
    let pivots = collect_rotations(g1, path, true, virtual_pair);
    if pivots.is_empty() {
        return false;
    }
    let i = pivots[rng.below_usize(pivots.len())];
    path[i + 1..].reverse();
    true
}

fn try_rotate_front(
    g1: &Subgraph,
    path: &mut Vec<usize>,
    rng: &mut SplitMix64,
    virtual_pair: &impl Fn(usize, usize) -> bool,
) -> bool {
    let pivots = collect_rotations(g1, path, false, virtual_pair);
    if pivots.is_empty() {
        return false;
    }
    let i = pivots[rng.below_usize(pivots.len())];
    path[..i].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::certificate_ok;

    fn local_from_edges(labels: &[u32], edges: &[(u32, u32, u32)]) -> Subgraph {
        let mut lg = Subgraph::new(labels);
        for &(a, b, c) in edges {
            lg.insert(a, b, c);
        }
        lg
    }

    fn all_available(c: u32, except: &[u32]) -> ColorSet {
        let mut s = ColorSet::new(c);
        for x in 0..c {
            if !except.contains(&x) {
                s.insert(x);
            }
        }
        s
    }

    #[test]
    fn existing_ham_path_needs_no_boosters() {
        // G1 is already a rainbow Hamilton 0-4 path
        let g = ColoredHypergraph::complete_rainbow(5);
        let labels: Vec<u32> = (0..5).collect();
        let mut edges = Vec::new();
        for i in 0..4u32 {
            edges.push((i, i + 1, g.color_between(i, i + 1).unwrap()));
        }
        let used: Vec<u32> = edges.iter().map(|e| e.2).collect();
        let mut g1 = local_from_edges(&labels, &edges);
        let mut avail = all_available(g.c(), &used);
        let out = booster_close(&g, &mut g1, 0, 4, &mut avail, &PipelineConfig::default(), 1)
            .expect("path already present");
        assert_eq!(out.added, 0);
        assert_eq!(out.path.first(), Some(&0));
        assert_eq!(out.path.last(), Some(&4));
        assert_eq!(out.path.len(), 5);
    }

    #[test]
    fn disjoint_paths_get_merged() {
        // two disjoint path pieces inside a complete rainbow host
        let g = ColoredHypergraph::complete_rainbow(10);
        let labels: Vec<u32> = (0..10).collect();
        let mut edges = Vec::new();
        for i in 0..4u32 {
            edges.push((i, i + 1, g.color_between(i, i + 1).unwrap()));
        }
        for i in 5..9u32 {
            edges.push((i, i + 1, g.color_between(i, i + 1).unwrap()));
        }
        let used: Vec<u32> = edges.iter().map(|e| e.2).collect();
        let mut g1 = local_from_edges(&labels, &edges);
        let mut avail = all_available(g.c(), &used);
        let out = booster_close(&g, &mut g1, 0, 9, &mut avail, &PipelineConfig::default(), 5)
            .expect("complete host supplies boosters");
        assert!(out.added >= 1, "merging needs at least one booster");
        assert_eq!(out.path.len(), 10);
        // the returned path is a real rainbow subgraph of G
        let mut cert_edges = Vec::new();
        let mut cert_colors = Vec::new();
        for w in out.path.windows(2) {
            cert_edges.push(vec![w[0].min(w[1]), w[0].max(w[1])]);
            cert_colors.push(g1.color_of(w[0], w[1]).unwrap());
        }
        let cert = crate::cert::RainbowCertificate::subgraph_copy(cert_edges, cert_colors);
        assert!(certificate_ok(&g, &cert));
    }

    #[test]
    fn no_colors_no_connection_fails() {
        // disconnected G1, empty available palette
        let g = ColoredHypergraph::complete_rainbow(6);
        let labels: Vec<u32> = (0..6).collect();
        let edges = vec![
            (0u32, 1u32, g.color_between(0, 1).unwrap()),
            (2, 3, g.color_between(2, 3).unwrap()),
            (4, 5, g.color_between(4, 5).unwrap()),
        ];
        let mut g1 = local_from_edges(&labels, &edges);
        let mut avail = ColorSet::new(g.c());
        let err = booster_close(&g, &mut g1, 0, 1, &mut avail, &PipelineConfig::default(), 2)
            .unwrap_err();
        assert!(err.reason.contains("no admissible booster"));
    }
}
