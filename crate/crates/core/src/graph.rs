//! Edge-colored k-uniform hypergraphs on vertex set `[n]`.
//!
//! Vertices and colors are 0-based internally; the text format and all
//! user-facing output are 1-based. Edges are stored sorted by colex rank,
//! which is the canonical enumeration used by the generator and the coupling
//! interpolation. For graphs (k = 2) adjacency bitsets and colored adjacency
//! lists are built eagerly for the search inner loops.

use crate::bitset::Bitset;
use crate::combin::colex_rank;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("uniformity k must be at least 2, got {0}")]
    BadUniformity(usize),
    #[error("need n >= k, got n={n}, k={k}")]
    TooFewVertices { n: usize, k: usize },
    #[error("palette size must be at least 1")]
    EmptyPalette,
    #[error("edge {0:?} is not a strictly increasing k-subset in range")]
    MalformedEdge(Vec<u32>),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<u32>),
    #[error("color {color} out of range for palette of size {c}")]
    ColorOutOfRange { color: u32, c: u32 },
}

/// Immutable edge-colored k-uniform hypergraph.
#[derive(Clone, Debug)]
pub struct ColoredHypergraph {
    n: usize,
    k: usize,
    c: u32,
    /// Flat vertex array, `k` entries per edge, each edge strictly increasing,
    /// edges sorted by colex rank.
    verts: Vec<u32>,
    /// Color of edge i, in `0..c`.
    colors: Vec<u32>,
    /// Edge ids incident to each vertex.
    incidence: Vec<Vec<u32>>,
    /// k = 2 only: adjacency bitsets.
    adj: Vec<Bitset>,
    /// k = 2 only: `(neighbor, color)` sorted by neighbor.
    adj_colored: Vec<Vec<(u32, u32)>>,
}

impl ColoredHypergraph {
    /// Builds a hypergraph from an edge list, validating every invariant.
    pub fn new(
        n: usize,
        k: usize,
        c: u32,
        edges: Vec<(Vec<u32>, u32)>,
    ) -> Result<Self, GraphError> {
        if k < 2 {
            return Err(GraphError::BadUniformity(k));
        }
        if n < k {
            return Err(GraphError::TooFewVertices { n, k });
        }
        if c == 0 {
            return Err(GraphError::EmptyPalette);
        }
        let mut ranked: Vec<(u64, Vec<u32>, u32)> = Vec::with_capacity(edges.len());
        for (vs, color) in edges {
            if vs.len() != k
                || !vs.windows(2).all(|w| w[0] < w[1])
                || vs.last().is_some_and(|&v| v as usize >= n)
            {
                return Err(GraphError::MalformedEdge(vs));
            }
            if color >= c {
                return Err(GraphError::ColorOutOfRange { color, c });
            }
            ranked.push((colex_rank(&vs), vs, color));
        }
        ranked.sort_unstable_by_key(|e| e.0);
        for w in ranked.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(GraphError::DuplicateEdge(w[1].1.clone()));
            }
        }
        let mut verts = Vec::with_capacity(ranked.len() * k);
        let mut colors = Vec::with_capacity(ranked.len());
        for (_, vs, color) in ranked {
            verts.extend_from_slice(&vs);
            colors.push(color);
        }
        Ok(Self::from_sorted_parts(n, k, c, verts, colors))
    }

    /// Internal constructor for edges already in colex order (generator, filters).
    pub(crate) fn from_sorted_parts(
        n: usize,
        k: usize,
        c: u32,
        verts: Vec<u32>,
        colors: Vec<u32>,
    ) -> Self {
        let m = colors.len();
        let mut incidence = vec![Vec::new(); n];
        for e in 0..m {
            for &v in &verts[e * k..(e + 1) * k] {
                incidence[v as usize].push(e as u32);
            }
        }
        let (mut adj, mut adj_colored) = (Vec::new(), Vec::new());
        if k == 2 {
            adj = vec![Bitset::new(n); n];
            adj_colored = vec![Vec::new(); n];
            for e in 0..m {
                let (u, v) = (verts[2 * e] as usize, verts[2 * e + 1] as usize);
                adj[u].insert(v);
                adj[v].insert(u);
                adj_colored[u].push((v as u32, colors[e]));
                adj_colored[v].push((u as u32, colors[e]));
            }
            for list in adj_colored.iter_mut() {
                list.sort_unstable();
            }
        }
        ColoredHypergraph {
            n,
            k,
            c,
            verts,
            colors,
            incidence,
            adj,
            adj_colored,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn edge_count(&self) -> usize {
        self.colors.len()
    }

    pub fn edge(&self, i: usize) -> &[u32] {
        &self.verts[i * self.k..(i + 1) * self.k]
    }

    pub fn color(&self, i: usize) -> u32 {
        self.colors[i]
    }

    pub fn edges(&self) -> impl Iterator<Item = (&[u32], u32)> {
        self.verts
            .chunks_exact(self.k)
            .zip(self.colors.iter().copied())
    }

    /// Edge ids incident to `v`.
    pub fn edges_at(&self, v: u32) -> &[u32] {
        &self.incidence[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.incidence[v as usize].len()
    }

    /// Looks up an edge id by its sorted vertex tuple (binary search on colex rank).
    pub fn find_edge(&self, vs: &[u32]) -> Option<usize> {
        debug_assert_eq!(vs.len(), self.k);
        let target = colex_rank(vs);
        let m = self.edge_count();
        let (mut lo, mut hi) = (0usize, m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if colex_rank(self.edge(mid)) < target {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        (lo < m && self.edge(lo) == vs).then_some(lo)
    }

    /// Membership + color lookup by sorted vertex tuple.
    pub fn edge_color(&self, vs: &[u32]) -> Option<u32> {
        if self.k == 2 {
            return self.color_between(vs[0], vs[1]);
        }
        // Edges at the first vertex are few; scan them.
        let v0 = vs[0];
        for &e in self.edges_at(v0) {
            if self.edge(e as usize) == vs {
                return Some(self.colors[e as usize]);
            }
        }
        None
    }

    /// k = 2: adjacency bitset of `v`.
    pub fn adj(&self, v: u32) -> &Bitset {
        debug_assert_eq!(self.k, 2, "adjacency bitsets exist only for k = 2");
        &self.adj[v as usize]
    }

    /// k = 2: `(neighbor, color)` pairs sorted by neighbor.
    pub fn neighbors(&self, v: u32) -> &[(u32, u32)] {
        debug_assert_eq!(self.k, 2);
        &self.adj_colored[v as usize]
    }

    /// k = 2: color of edge uv if present.
    pub fn color_between(&self, u: u32, v: u32) -> Option<u32> {
        debug_assert_eq!(self.k, 2);
        let list = &self.adj_colored[u as usize];
        list.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn has_edge2(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].contains(v as usize)
    }

    /// Subhypergraph keeping edges whose vertices all satisfy `vpred` and
    /// whose color satisfies `cpred`. Vertex set and palette are unchanged.
    pub fn filtered(
        &self,
        mut vpred: impl FnMut(u32) -> bool,
        mut cpred: impl FnMut(u32) -> bool,
    ) -> ColoredHypergraph {
        let mut verts = Vec::new();
        let mut colors = Vec::new();
        for (vs, color) in self.edges() {
            if cpred(color) && vs.iter().all(|&v| vpred(v)) {
                verts.extend_from_slice(vs);
                colors.push(color);
            }
        }
        ColoredHypergraph::from_sorted_parts(self.n, self.k, self.c, verts, colors)
    }

    /// Copy with every edge given a distinct color (palette = edge count).
    pub fn recolored_distinct(&self) -> ColoredHypergraph {
        let m = self.edge_count().max(1) as u32;
        ColoredHypergraph::from_sorted_parts(
            self.n,
            self.k,
            m,
            self.verts.clone(),
            (0..self.colors.len() as u32).collect(),
        )
    }

    /// Copy with the given edge ids removed.
    pub fn without_edges(&self, removed: &HashSet<usize>) -> ColoredHypergraph {
        let mut verts = Vec::new();
        let mut colors = Vec::new();
        for e in 0..self.edge_count() {
            if !removed.contains(&e) {
                verts.extend_from_slice(self.edge(e));
                colors.push(self.colors[e]);
            }
        }
        ColoredHypergraph::from_sorted_parts(self.n, self.k, self.c, verts, colors)
    }

    /// Structural equality: same (n, k, c), same colored edge set.
    pub fn same_as(&self, other: &ColoredHypergraph) -> bool {
        self.n == other.n
            && self.k == other.k
            && self.c == other.c
            && self.verts == other.verts
            && self.colors == other.colors
    }

    /// Equality of edge sets ignoring colors.
    pub fn same_skeleton(&self, other: &ColoredHypergraph) -> bool {
        self.n == other.n && self.k == other.k && self.verts == other.verts
    }

    /// Complete rainbow graph: K_n with all C(n,2) edges in distinct colors.
    pub fn complete_rainbow(n: usize) -> ColoredHypergraph {
        let mut verts = Vec::new();
        let mut colors = Vec::new();
        let mut it = crate::combin::ColexSubsets::new(n, 2);
        let mut rank = 0u32;
        while let Some(s) = it.next_subset() {
            verts.extend_from_slice(s);
            colors.push(rank);
            rank += 1;
        }
        ColoredHypergraph::from_sorted_parts(n, 2, rank.max(1), verts, colors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_and_lookup() {
        let g = ColoredHypergraph::new(
            4,
            2,
            3,
            vec![
                (vec![0, 1], 0),
                (vec![2, 3], 1),
                (vec![0, 2], 2),
                (vec![1, 3], 0),
            ],
        )
        .unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.color_between(0, 1), Some(0));
        assert_eq!(g.color_between(1, 0), Some(0));
        assert_eq!(g.color_between(0, 3), None);
        assert_eq!(g.degree(0), 2);
        assert!(g.has_edge2(2, 3));
        // colex order: {0,1} < {0,2} < {1,3} < {2,3}
        assert_eq!(g.edge(0), &[0, 1]);
        assert_eq!(g.edge(1), &[0, 2]);
        assert_eq!(g.edge(2), &[1, 3]);
        assert_eq!(g.edge(3), &[2, 3]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(
            ColoredHypergraph::new(4, 2, 3, vec![(vec![1, 1], 0)]),
            Err(GraphError::MalformedEdge(_))
        ));
        assert!(matches!(
            ColoredHypergraph::new(4, 2, 3, vec![(vec![1, 4], 0)]),
            Err(GraphError::MalformedEdge(_))
        ));
        assert!(matches!(
            ColoredHypergraph::new(4, 2, 3, vec![(vec![0, 1], 3)]),
            Err(GraphError::ColorOutOfRange { .. })
        ));
        assert!(matches!(
            ColoredHypergraph::new(4, 2, 3, vec![(vec![0, 1], 0), (vec![0, 1], 1)]),
            Err(GraphError::DuplicateEdge(_))
        ));
        assert!(matches!(
            ColoredHypergraph::new(1, 2, 3, vec![]),
            Err(GraphError::TooFewVertices { .. })
        ));
    }

    #[test]
    fn hypergraph_edges() {
        let g = ColoredHypergraph::new(6, 3, 4, vec![(vec![0, 1, 2], 1), (vec![3, 4, 5], 2)])
            .unwrap();
        assert_eq!(g.edge_color(&[0, 1, 2]), Some(1));
        assert_eq!(g.edge_color(&[0, 1, 3]), None);
        assert_eq!(g.edges_at(4), &[1]);
    }

    #[test]
    fn filter_and_recolor() {
        let g = ColoredHypergraph::complete_rainbow(5);
        assert_eq!(g.edge_count(), 10);
        assert_eq!(g.c(), 10);
        let h = g.filtered(|v| v < 3, |_| true);
        assert_eq!(h.edge_count(), 3);
        assert_eq!(h.n(), 5);
        let r = h.recolored_distinct();
        assert_eq!(r.c(), 3);
        assert!(r.same_skeleton(&h));
    }
}
