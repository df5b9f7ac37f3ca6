//! Shipped rich families: rainbow triangles, rainbow perfect matchings,
//! rainbow Hamilton cycles, and rainbow Hamilton ell-cycles.
//!
//! Each family is the set of ALL rainbow copies of one structure on [n] with
//! colors from [c]; recoloring a member edge avoids the other m - 1 colors,
//! so the family is exactly (c - m + 1)-rich. The spot checker verifies this
//! on sampled members by recounting, not by the formula.

use crate::colorset::ColorSet;
use crate::combin::colex_unrank;
use crate::coupling::{CouplingError, HybridState};
use crate::graph::ColoredHypergraph;
use crate::model::ham_ell_edge_count;
use crate::oracle::{
    find_rainbow_ell_cycle, find_rainbow_hamilton_cycle, find_rainbow_perfect_matching,
    SearchBudget, SearchOutcome, StructureKind,
};
use crate::rng::{SplitMix64, StreamTag};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Triangle,
    PerfectMatching,
    HamiltonCycle,
    HamiltonEllCycle { ell: usize },
}

/// An ell-rich family with a membership predicate, given by its structure.
#[derive(Clone, Debug)]
pub struct RichFamily {
    kind: FamilyKind,
    n: usize,
    k: usize,
    c: u32,
    /// Claimed richness; `new` sets the exact value c - m + 1.
    ell: u32,
    /// Edges in one structure copy.
    m: usize,
}

/// Outcome of re-counting per-edge recolorings on sampled members.
#[derive(Clone, Debug, Serialize)]
pub struct RichnessSpotCheck {
    pub members_checked: u32,
    pub claimed_ell: u32,
    pub min_recolorings: u64,
    pub max_recolorings: u64,
    /// Edge of a sampled member admitting fewer recolorings than claimed.
    pub refutation: Option<(Vec<u32>, u64)>,
}

impl RichFamily {
    pub fn new(kind: FamilyKind, n: usize, k: usize, c: u32) -> Result<Self, CouplingError> {
        let m = match kind {
            FamilyKind::Triangle => {
                if k != 2 || n < 3 {
                    return Err(CouplingError::FamilyMismatch(
                        "triangles need k = 2 and n >= 3".into(),
                    ));
                }
                3
            }
            FamilyKind::PerfectMatching => {
                if n % k != 0 {
                    return Err(CouplingError::FamilyMismatch(format!(
                        "perfect matching needs k | n, got n={n}, k={k}"
                    )));
                }
                n / k
            }
            FamilyKind::HamiltonCycle => {
                if k != 2 || n < 3 {
                    return Err(CouplingError::FamilyMismatch(
                        "Hamilton cycles need k = 2 and n >= 3".into(),
                    ));
                }
                n
            }
            FamilyKind::HamiltonEllCycle { ell } => {
                if ell >= k {
                    return Err(CouplingError::FamilyMismatch(format!(
                        "need ell < k, got ell={ell}, k={k}"
                    )));
                }
                ham_ell_edge_count(n, k, ell).map_err(CouplingError::Model)?
            }
        };
        if (c as u64) < m as u64 {
            return Err(CouplingError::FamilyMismatch(format!(
                "palette {c} smaller than structure size {m}: family is empty"
            )));
        }
        Ok(RichFamily {
            kind,
            n,
            k,
            c,
            ell: c - m as u32 + 1,
            m,
        })
    }

    /// Test fixture: overrides the claimed richness (possibly overstating it).
    pub fn with_claimed_ell(mut self, ell: u32) -> Self {
        self.ell = ell;
        self
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Edges in one structure copy.
    pub fn structure_edges(&self) -> usize {
        self.m
    }

    pub fn name(&self) -> String {
        match self.kind {
            FamilyKind::Triangle => "rainbow-triangle".into(),
            FamilyKind::PerfectMatching => "rainbow-pm".into(),
            FamilyKind::HamiltonCycle => "rainbow-hc".into(),
            FamilyKind::HamiltonEllCycle { ell } => format!("rainbow-ell-cycle({ell})"),
        }
    }

    pub(crate) fn structure(&self) -> StructureKind {
        match self.kind {
            FamilyKind::Triangle => StructureKind::Triangle,
            FamilyKind::PerfectMatching => StructureKind::PerfectMatching,
            FamilyKind::HamiltonCycle => StructureKind::HamiltonCycle,
            FamilyKind::HamiltonEllCycle { ell } => StructureKind::HamiltonEllCycle { ell },
        }
    }

    pub(crate) fn check_consistent(&self, n: usize, k: usize, c: u32) -> Result<(), CouplingError> {
        if self.n != n || self.k != k || self.c != c {
            return Err(CouplingError::FamilyMismatch(format!(
                "family built for (n={}, k={}, c={}), instance has (n={n}, k={k}, c={c})",
                self.n, self.k, self.c
            )));
        }
        Ok(())
    }

    fn search_budget() -> SearchBudget {
        SearchBudget::nodes(200_000_000)
    }

    fn decide(out: SearchOutcome) -> bool {
        match out {
            SearchOutcome::Found(_) => true,
            SearchOutcome::NotFound => false,
            SearchOutcome::BudgetExhausted => {
                panic!("family containment search exhausted its budget; instance too large")
            }
        }
    }

    /// Membership: the colored hypergraph holds a rainbow copy of the structure.
    pub fn contains(&self, h: &ColoredHypergraph) -> bool {
        debug_assert!(self.check_consistent(h.n(), h.k(), h.c()).is_ok());
        match self.kind {
            FamilyKind::Triangle => {
                for (vs, c0) in h.edges() {
                    let (u, v) = (vs[0], vs[1]);
                    for w in 0..h.n() as u32 {
                        if w == u || w == v {
                            continue;
                        }
                        if let (Some(c1), Some(c2)) =
                            (h.color_between(u, w), h.color_between(v, w))
                        {
                            if c0 != c1 && c0 != c2 && c1 != c2 {
                                return true;
                            }
                        }
                    }
                }
                false
            }
            FamilyKind::PerfectMatching => {
                Self::decide(find_rainbow_perfect_matching(h, &Self::search_budget()))
            }
            FamilyKind::HamiltonCycle => {
                Self::decide(find_rainbow_hamilton_cycle(h, &Self::search_budget()))
            }
            FamilyKind::HamiltonEllCycle { ell } => Self::decide(
                find_rainbow_ell_cycle(h, ell, &Self::search_budget())
                    .expect("divisibility checked at family construction"),
            ),
        }
    }

    /// Membership of the decolored family: a copy exists ignoring colors.
    pub fn contains_uncolored(&self, h: &ColoredHypergraph) -> bool {
        self.with_palette(h.edge_count().max(1) as u32)
            .contains(&h.recolored_distinct())
    }

    fn with_palette(&self, c: u32) -> RichFamily {
        let mut f = self.clone();
        f.c = c.max(self.m as u32);
        f.ell = f.c - self.m as u32 + 1;
        f
    }

    /// Samples a member: a uniform structure copy with distinct colors.
    pub fn sample_member(&self, seed: u64) -> (Vec<Vec<u32>>, Vec<u32>) {
        let mut rng = SplitMix64::from_stream(seed, StreamTag::FamilyMember, 0);
        let colors: Vec<u32> = rng
            .sample_distinct(self.c as usize, self.m)
            .into_iter()
            .map(|x| x as u32)
            .collect();
        let edges = match self.kind {
            FamilyKind::Triangle => {
                let mut vs: Vec<u32> = rng
                    .sample_distinct(self.n, 3)
                    .into_iter()
                    .map(|v| v as u32)
                    .collect();
                vs.sort_unstable();
                vec![
                    vec![vs[0], vs[1]],
                    vec![vs[0], vs[2]],
                    vec![vs[1], vs[2]],
                ]
            }
            FamilyKind::PerfectMatching => {
                let mut perm: Vec<u32> = (0..self.n as u32).collect();
                rng.shuffle(&mut perm);
                perm.chunks_exact(self.k)
                    .map(|b| {
                        let mut b = b.to_vec();
                        b.sort_unstable();
                        b
                    })
                    .collect()
            }
            FamilyKind::HamiltonCycle => {
                let mut perm: Vec<u32> = (0..self.n as u32).collect();
                rng.shuffle(&mut perm);
                (0..self.n)
                    .map(|i| {
                        let (a, b) = (perm[i], perm[(i + 1) % self.n]);
                        vec![a.min(b), a.max(b)]
                    })
                    .collect()
            }
            FamilyKind::HamiltonEllCycle { ell } => {
                let mut perm: Vec<u32> = (0..self.n as u32).collect();
                rng.shuffle(&mut perm);
                crate::cert::ell_cycle_blocks(&perm, self.k, ell)
            }
        };
        (edges, colors)
    }

    /// Number of colors x such that recoloring `edge_idx` to x keeps the
    /// member in the family (counted by testing, not by formula).
    pub fn member_recolorings(&self, colors: &[u32], edge_idx: usize) -> u64 {
        let mut others = ColorSet::new(self.c);
        for (i, &col) in colors.iter().enumerate() {
            if i != edge_idx {
                others.insert(col);
            }
        }
        (0..self.c).filter(|&x| !others.contains(x)).count() as u64
    }

    /// Samples members and recounts recolorings for every member edge.
    pub fn spot_check_richness(&self, members: u32, seed: u64) -> RichnessSpotCheck {
        let mut min_recolor = u64::MAX;
        let mut max_recolor = 0u64;
        let mut refutation = None;
        for t in 0..members {
            let member_seed = crate::rng::stream(seed, StreamTag::FamilyMember, t as u64 + 1);
            let (edges, colors) = self.sample_member(member_seed);
            for e in 0..edges.len() {
                let r = self.member_recolorings(&colors, e);
                min_recolor = min_recolor.min(r);
                max_recolor = max_recolor.max(r);
                if r < self.ell as u64 && refutation.is_none() {
                    refutation = Some((edges[e].clone(), r));
                }
            }
        }
        RichnessSpotCheck {
            members_checked: members,
            claimed_ell: self.ell,
            min_recolorings: min_recolor,
            max_recolorings: max_recolor,
            refutation,
        }
    }

    /// Specialized hybrid membership: a structure copy whose single-zone
    /// edges carry pairwise distinct colors (multi-edges are free since the
    /// palette is at least the structure size by construction).
    pub(crate) fn hybrid_contains(&self, state: &HybridState) -> Result<bool, CouplingError> {
        let host = HybridHost::from_state(state);
        match self.kind {
            FamilyKind::Triangle => Ok(host.has_triangle()),
            FamilyKind::PerfectMatching => {
                if self.n > 24 {
                    return Err(CouplingError::SizeRefusal(format!(
                        "hybrid matching search at n = {} refused",
                        self.n
                    )));
                }
                Ok(host.has_perfect_matching())
            }
            FamilyKind::HamiltonCycle => {
                if self.n > 16 {
                    return Err(CouplingError::SizeRefusal(format!(
                        "hybrid Hamilton search at n = {} refused",
                        self.n
                    )));
                }
                Ok(host.has_hamilton_cycle())
            }
            FamilyKind::HamiltonEllCycle { ell } => {
                if self.n > 12 {
                    return Err(CouplingError::SizeRefusal(format!(
                        "hybrid ell-cycle search at n = {} refused",
                        self.n
                    )));
                }
                Ok(host.has_ell_cycle(self.k, ell))
            }
        }
    }
}

/// Generic hybrid membership by enumerating one color per multi-edge.
/// Exponential in the multi-edge count; refuses beyond the budget.
pub fn hybrid_contains_generic(
    state: &HybridState,
    fam: &RichFamily,
) -> Result<bool, CouplingError> {
    fam.check_consistent(state.n, state.k, state.c)?;
    let assignments = (state.c as f64).powi(state.multi.len() as i32);
    if assignments > 2e6 {
        return Err(CouplingError::SizeRefusal(format!(
            "{} color assignments over {} multi-edges",
            assignments,
            state.multi.len()
        )));
    }
    let single_edges: Vec<(Vec<u32>, u32)> = state
        .single
        .iter()
        .map(|&(r, col)| (colex_unrank(r, state.k), col))
        .collect();
    let multi_edges: Vec<Vec<u32>> = state
        .multi
        .iter()
        .map(|&r| colex_unrank(r, state.k))
        .collect();
    let mut choice = vec![0u32; multi_edges.len()];
    loop {
        let mut edges = single_edges.clone();
        for (vs, &col) in multi_edges.iter().zip(&choice) {
            edges.push((vs.clone(), col));
        }
        let h = ColoredHypergraph::new(state.n, state.k, state.c, edges)
            .expect("hybrid edges are valid");
        if fam.contains(&h) {
            return Ok(true);
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(false);
            }
            choice[pos] += 1;
            if choice[pos] < state.c {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Presence structure of a hybrid: each present edge is either singly colored
/// or a free multi-edge.
struct HybridHost {
    n: usize,
    k: usize,
    /// (vertices, color or None for multi)
    edges: Vec<(Vec<u32>, Option<u32>)>,
    by_vertex: Vec<Vec<usize>>,
    /// k = 2 only: flattened presence/color matrix.
    pair: Vec<Option<Option<u32>>>,
}

impl HybridHost {
    fn from_state(state: &HybridState) -> Self {
        let mut edges: Vec<(Vec<u32>, Option<u32>)> = Vec::new();
        for &(r, col) in &state.single {
            edges.push((colex_unrank(r, state.k), Some(col)));
        }
        for &r in &state.multi {
            edges.push((colex_unrank(r, state.k), None));
        }
        let mut by_vertex = vec![Vec::new(); state.n];
        let mut pair = Vec::new();
        if state.k == 2 {
            pair = vec![None; state.n * state.n];
        }
        for (i, (vs, col)) in edges.iter().enumerate() {
            for &v in vs {
                by_vertex[v as usize].push(i);
            }
            if state.k == 2 {
                let (a, b) = (vs[0] as usize, vs[1] as usize);
                pair[a * state.n + b] = Some(*col);
                pair[b * state.n + a] = Some(*col);
            }
        }
        HybridHost {
            n: state.n,
            k: state.k,
            edges,
            by_vertex,
            pair,
        }
    }

    fn pair_at(&self, u: usize, v: usize) -> Option<Option<u32>> {
        self.pair[u * self.n + v]
    }

    fn has_triangle(&self) -> bool {
        for u in 0..self.n {
            for v in u + 1..self.n {
                let Some(cuv) = self.pair_at(u, v) else {
                    continue;
                };
                for w in v + 1..self.n {
                    let (Some(cuw), Some(cvw)) = (self.pair_at(u, w), self.pair_at(v, w))
                    else {
                        continue;
                    };
                    let fixed: Vec<u32> =
                        [cuv, cuw, cvw].into_iter().flatten().collect();
                    let mut dedup = fixed.clone();
                    dedup.sort_unstable();
                    dedup.dedup();
                    if dedup.len() == fixed.len() {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn has_perfect_matching(&self) -> bool {
        if self.n % self.k != 0 {
            return false;
        }
        let mut covered = vec![false; self.n];
        let mut used: Vec<u32> = Vec::new();
        self.pm_rec(&mut covered, &mut used)
    }

    fn pm_rec(&self, covered: &mut Vec<bool>, used: &mut Vec<u32>) -> bool {
        let Some(v) = covered.iter().position(|&c| !c) else {
            return true;
        };
        for &e in &self.by_vertex[v] {
            let (vs, col) = &self.edges[e];
            if vs.iter().any(|&u| covered[u as usize]) {
                continue;
            }
            if let Some(col) = col {
                if used.contains(col) {
                    continue;
                }
                used.push(*col);
            }
            for &u in vs {
                covered[u as usize] = true;
            }
            if self.pm_rec(covered, used) {
                return true;
            }
            for &u in vs {
                covered[u as usize] = false;
            }
            if col.is_some() {
                used.pop();
            }
        }
        false
    }

    fn has_hamilton_cycle(&self) -> bool {
        if self.n < 3 {
            return false;
        }
        let mut path = vec![0u32];
        let mut on_path = vec![false; self.n];
        on_path[0] = true;
        let mut used: Vec<u32> = Vec::new();
        self.hc_rec(&mut path, &mut on_path, &mut used)
    }

    fn hc_rec(&self, path: &mut Vec<u32>, on_path: &mut Vec<bool>, used: &mut Vec<u32>) -> bool {
        let current = *path.last().expect("nonempty") as usize;
        if path.len() == self.n {
            if path[1] > path[self.n - 1] {
                return false;
            }
            return match self.pair_at(current, 0) {
                Some(Some(col)) => !used.contains(&col),
                Some(None) => true,
                None => false,
            };
        }
        for v in 0..self.n {
            if on_path[v] {
                continue;
            }
            let Some(col) = self.pair_at(current, v) else {
                continue;
            };
            if let Some(col) = col {
                if used.contains(&col) {
                    continue;
                }
                used.push(col);
            }
            path.push(v as u32);
            on_path[v] = true;
            if self.hc_rec(path, on_path, used) {
                return true;
            }
            on_path[v] = false;
            path.pop();
            if col.is_some() {
                used.pop();
            }
        }
        false
    }

    fn has_ell_cycle(&self, k: usize, ell: usize) -> bool {
        let step = k - ell;
        if self.n % step != 0 {
            return false;
        }
        let m = self.n / step;
        let block_positions: Vec<Vec<usize>> = (0..m)
            .map(|b| (0..k).map(|j| (b * step + j) % self.n).collect())
            .collect();
        let mut completes_at = vec![Vec::new(); self.n];
        for (b, ps) in block_positions.iter().enumerate() {
            completes_at[*ps.iter().max().expect("nonempty")].push(b);
        }
        let mut order = vec![0u32; self.n];
        let mut assigned = vec![false; self.n];
        let mut used: Vec<u32> = Vec::new();
        self.ell_rec(
            0,
            &mut order,
            &mut assigned,
            &mut used,
            &block_positions,
            &completes_at,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn ell_rec(
        &self,
        pos: usize,
        order: &mut Vec<u32>,
        assigned: &mut Vec<bool>,
        used: &mut Vec<u32>,
        block_positions: &[Vec<usize>],
        completes_at: &[Vec<usize>],
    ) -> bool {
        if pos == self.n {
            return true;
        }
        for v in 0..self.n {
            if assigned[v] {
                continue;
            }
            order[pos] = v as u32;
            assigned[v] = true;
            let mut pushed = 0;
            let mut ok = true;
            for &b in &completes_at[pos] {
                let mut vs: Vec<u32> =
                    block_positions[b].iter().map(|&p| order[p]).collect();
                vs.sort_unstable();
                match self.lookup(&vs) {
                    Some(Some(col)) if !used.contains(&col) => {
                        used.push(col);
                        pushed += 1;
                    }
                    Some(None) => {}
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok
                && self.ell_rec(
                    pos + 1,
                    order,
                    assigned,
                    used,
                    block_positions,
                    completes_at,
                )
            {
                return true;
            }
            for _ in 0..pushed {
                used.pop();
            }
            assigned[v] = false;
        }
        false
    }

    fn lookup(&self, vs: &[u32]) -> Option<Option<u32>> {
        if self.k == 2 {
            return self.pair_at(vs[0] as usize, vs[1] as usize);
        }
        for &e in &self.by_vertex[vs[0] as usize] {
            if self.edges[e].0 == vs {
                return Some(self.edges[e].1);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::sample_hybrid;
    use crate::model::ModelParams;

    #[test]
    fn family_richness_values() {
        let pm = RichFamily::new(FamilyKind::PerfectMatching, 6, 2, 5).unwrap();
        assert_eq!(pm.ell(), 3); // c - m + 1 = 5 - 3 + 1
        let hc = RichFamily::new(FamilyKind::HamiltonCycle, 10, 2, 15).unwrap();
        assert_eq!(hc.ell(), 6);
        assert!(RichFamily::new(FamilyKind::HamiltonCycle, 10, 2, 9).is_err());
    }

    #[test]
    fn spot_check_catches_overstated_ell() {
        let fam = RichFamily::new(FamilyKind::HamiltonCycle, 6, 2, 8)
            .unwrap()
            .with_claimed_ell(8);
        let check = fam.spot_check_richness(20, 1);
        assert!(check.refutation.is_some());
        assert_eq!(check.min_recolorings, 3); // true richness c - n + 1
    }

    #[test]
    fn all_multi_triangle_needs_three_colors() {
        // underlying triangle, all edges multi, c >= 3 -> contained
        let params = ModelParams::new(3, 2, 1.0, 3, 0).unwrap();
        let state = sample_hybrid(&params, 0.5, 0).unwrap();
        let fam = RichFamily::new(FamilyKind::Triangle, 3, 2, 3).unwrap();
        assert!(fam.hybrid_contains(&state).unwrap());
    }

    #[test]
    fn colored_only_state_reduces_to_contains() {
        let params = ModelParams::new(5, 2, 0.7, 6, 3).unwrap();
        let n_slots = crate::combin::binomial(5, 2);
        let state = sample_hybrid(&params, 0.7, n_slots).unwrap();
        let fam = RichFamily::new(FamilyKind::Triangle, 5, 2, 6).unwrap();
        // materialize the same colored graph and compare
        let edges: Vec<(Vec<u32>, u32)> = state
            .single
            .iter()
            .map(|&(r, col)| (colex_unrank(r, 2), col))
            .collect();
        let h = ColoredHypergraph::new(5, 2, 6, edges).unwrap();
        assert_eq!(fam.hybrid_contains(&state).unwrap(), fam.contains(&h));
    }

    #[test]
    fn specialized_checkers_agree_with_generic_enumeration() {
        // n = 4, c = 2, rainbow-pm family: 10^4 random mixed states
        let fam = RichFamily::new(FamilyKind::PerfectMatching, 4, 2, 2).unwrap();
        for t in 0..10_000u64 {
            let params = ModelParams::new(4, 2, 0.45, 2, t).unwrap();
            let state = sample_hybrid(&params, 0.7, 3).unwrap();
            let fast = fam.hybrid_contains(&state).unwrap();
            let slow = hybrid_contains_generic(&state, &fam).unwrap();
            assert_eq!(fast, slow, "state diverged at seed {t}");
        }
    }

    #[test]
    fn uncolored_containment_ignores_colors() {
        // monochromatic triangle: no rainbow copy, but the decolored family
        // sees the triangle
        let h = ColoredHypergraph::new(
            3,
            2,
            3,
            vec![(vec![0, 1], 0), (vec![0, 2], 0), (vec![1, 2], 0)],
        )
        .unwrap();
        let fam = RichFamily::new(FamilyKind::Triangle, 3, 2, 3).unwrap();
        assert!(!fam.contains(&h));
        assert!(fam.contains_uncolored(&h));
    }
}
