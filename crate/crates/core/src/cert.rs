//! Independently checkable certificates for claimed rainbow structures.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    HamiltonCycle,
    HamiltonEllCycle { ell: usize },
    PerfectMatching,
    SubgraphCopy,
}

impl fmt::Display for CertKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertKind::HamiltonCycle => write!(f, "hamilton-cycle"),
            CertKind::HamiltonEllCycle { ell } => write!(f, "hamilton-ell-cycle({ell})"),
            CertKind::PerfectMatching => write!(f, "perfect-matching"),
            CertKind::SubgraphCopy => write!(f, "subgraph-copy"),
        }
    }
}

/// A claimed structure: edges, their colors, and for cycle kinds the cyclic
/// vertex order the edges were derived from. All ids 0-based; rendering is
/// 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RainbowCertificate {
    pub kind: CertKind,
    pub vertex_order: Option<Vec<u32>>,
    pub edges: Vec<Vec<u32>>,
    pub colors: Vec<u32>,
}

/// Edge blocks of a Hamilton ell-cycle on the cyclic order: block b covers
/// positions b*(k-ell) .. b*(k-ell)+k-1 (mod n), vertices sorted per block.
pub fn ell_cycle_blocks(order: &[u32], k: usize, ell: usize) -> Vec<Vec<u32>> {
    let n = order.len();
    let step = k - ell;
    let m = n / step;
    (0..m)
        .map(|b| {
            let mut block: Vec<u32> = (0..k).map(|j| order[(b * step + j) % n]).collect();
            block.sort_unstable();
            block
        })
        .collect()
}

impl RainbowCertificate {
    /// Hamilton cycle (k = 2) from its cyclic vertex order; colors[i] colors
    /// the edge order[i]-order[i+1] (wrapping).
    pub fn hamilton_cycle(order: Vec<u32>, colors: Vec<u32>) -> Self {
        let n = order.len();
        let edges = (0..n)
            .map(|i| {
                let (a, b) = (order[i], order[(i + 1) % n]);
                vec![a.min(b), a.max(b)]
            })
            .collect();
        RainbowCertificate {
            kind: CertKind::HamiltonCycle,
            vertex_order: Some(order),
            edges,
            colors,
        }
    }

    /// Hamilton ell-cycle from its cyclic vertex order; colors[b] colors block b.
    pub fn hamilton_ell_cycle(ell: usize, k: usize, order: Vec<u32>, colors: Vec<u32>) -> Self {
        let edges = ell_cycle_blocks(&order, k, ell);
        RainbowCertificate {
            kind: CertKind::HamiltonEllCycle { ell },
            vertex_order: Some(order),
            edges,
            colors,
        }
    }

    pub fn perfect_matching(edges: Vec<Vec<u32>>, colors: Vec<u32>) -> Self {
        RainbowCertificate {
            kind: CertKind::PerfectMatching,
            vertex_order: None,
            edges,
            colors,
        }
    }

    pub fn subgraph_copy(edges: Vec<Vec<u32>>, colors: Vec<u32>) -> Self {
        RainbowCertificate {
            kind: CertKind::SubgraphCopy,
            vertex_order: None,
            edges,
            colors,
        }
    }

    /// Canonical text rendering (1-based): kind line, optional `order` line,
    /// one `edge` line per edge with its color.
    pub fn to_text(&self) -> String {
        let mut out = format!("kind {}\n", self.kind);
        if let Some(order) = &self.vertex_order {
            out.push_str("order");
            for v in order {
                out.push_str(&format!(" {}", v + 1));
            }
            out.push('\n');
        }
        for (vs, color) in self.edges.iter().zip(&self.colors) {
            out.push_str("edge");
            for v in vs {
                out.push_str(&format!(" {}", v + 1));
            }
            out.push_str(&format!(" color {}\n", color + 1));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_cycle_edges() {
        let cert = RainbowCertificate::hamilton_cycle(vec![0, 2, 1], vec![5, 6, 7]);
        assert_eq!(cert.edges, vec![vec![0, 2], vec![1, 2], vec![0, 1]]);
    }

    #[test]
    fn ell_cycle_blocks_wrap() {
        // n=6, k=3, ell=1: blocks {o0,o1,o2}, {o2,o3,o4}, {o4,o5,o0}
        let blocks = ell_cycle_blocks(&[0, 1, 2, 3, 4, 5], 3, 1);
        assert_eq!(blocks, vec![vec![0, 1, 2], vec![2, 3, 4], vec![0, 4, 5]]);
    }

    #[test]
    fn text_rendering_is_one_based() {
        let cert = RainbowCertificate::hamilton_cycle(vec![0, 1, 2], vec![0, 1, 2]);
        let text = cert.to_text();
        assert!(text.contains("order 1 2 3"));
        assert!(text.contains("edge 1 2 color 1"));
    }
}
