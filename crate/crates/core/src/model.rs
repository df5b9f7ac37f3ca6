//! The random models and their arithmetic.
//!
//! `generate` draws from H^k_c(n,p): every k-subset of `[n]` becomes an edge
//! independently with probability p, and every present edge gets a uniform
//! color from `[c]`. Presence and color use separate streams keyed by the
//! edge's colex rank, so the edge skeleton of a draw does not depend on the
//! palette size.

use crate::combin::{binomial, ColexSubsets};
use crate::graph::ColoredHypergraph;
use crate::rng::{bounded, stream, unit_f64, StreamTag};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("edge probability must be in [0,1], got {0}")]
    BadProbability(f64),
    #[error("palette size must be at least 1")]
    BadPalette,
    #[error("uniformity k must be at least 2, got {0}")]
    BadUniformity(usize),
    #[error("need n >= k, got n={n}, k={k}")]
    TooFewVertices { n: usize, k: usize },
    #[error("overlap must satisfy 0 <= ell < k, got ell={ell}, k={k}")]
    BadOverlap { ell: usize, k: usize },
    #[error("n not divisible by k-ell (n={n}, k={k}, ell={ell})")]
    NotDivisible { n: usize, k: usize, ell: usize },
    #[error("coupling inapplicable: q = cp/ell = {q} exceeds 1")]
    CouplingInapplicable { q: f64 },
    #[error("richness requires ell >= 1")]
    ZeroEll,
    #[error("no rainbow Hamilton cycle possible: c = {c} < n = {n}")]
    TooFewColors { c: u32, n: usize },
    #[error("richness formula needs n >= 3, got {0}")]
    TooSmallCycle(usize),
}

/// One draw's parameters: (n, k, p, c, seed).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub c: u32,
    pub seed: u64,
}

impl ModelParams {
    pub fn new(n: usize, k: usize, p: f64, c: u32, seed: u64) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(ModelError::BadProbability(p));
        }
        if c == 0 {
            return Err(ModelError::BadPalette);
        }
        if k < 2 {
            return Err(ModelError::BadUniformity(k));
        }
        if n < k {
            return Err(ModelError::TooFewVertices { n, k });
        }
        Ok(ModelParams { n, k, p, c, seed })
    }

    /// Same parameters with a different seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Number of potential edges N = C(n, k).
    pub fn edge_slots(&self) -> u64 {
        binomial(self.n, self.k)
    }
}

/// Draws H ~ H^k_c(n, p). Deterministic in `params`.
pub fn generate(params: &ModelParams) -> ColoredHypergraph {
    let mut verts = Vec::new();
    let mut colors = Vec::new();
    let mut it = ColexSubsets::new(params.n, params.k);
    let mut rank = 0u64;
    while let Some(s) = it.next_subset() {
        if unit_f64(stream(params.seed, StreamTag::EdgePresence, rank)) < params.p {
            verts.extend_from_slice(s);
            colors.push(bounded(
                stream(params.seed, StreamTag::EdgeColor, rank),
                params.c,
            ));
        }
        rank += 1;
    }
    ColoredHypergraph::from_sorted_parts(params.n, params.k, params.c, verts, colors)
}

/// m_ell = n / (k - ell): the edge count of a Hamilton ell-cycle.
pub fn ham_ell_edge_count(n: usize, k: usize, ell: usize) -> Result<usize, ModelError> {
    if k < 2 {
        return Err(ModelError::BadUniformity(k));
    }
    if ell >= k {
        return Err(ModelError::BadOverlap { ell, k });
    }
    if n % (k - ell) != 0 {
        return Err(ModelError::NotDivisible { n, k, ell });
    }
    Ok(n / (k - ell))
}

/// q = cp / ell, the colored edge probability of the coupling; errors when
/// the coupling hypothesis q <= 1 fails.
pub fn coupled_q(c: u32, p: f64, ell: u32) -> Result<f64, ModelError> {
    if ell == 0 {
        return Err(ModelError::ZeroEll);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(ModelError::BadProbability(p));
    }
    let q = c as f64 * p / ell as f64;
    if q > 1.0 {
        return Err(ModelError::CouplingInapplicable { q });
    }
    Ok(q)
}

/// Richness of the family of rainbow Hamilton cycles in K_n with palette c:
/// c - n + 1.
pub fn hc_family_richness(n: usize, c: u32) -> Result<u32, ModelError> {
    if n < 3 {
        return Err(ModelError::TooSmallCycle(n));
    }
    if (c as u64) < n as u64 {
        return Err(ModelError::TooFewColors { c, n });
    }
    Ok(c - n as u32 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_one_c_one_gives_monochromatic_complete_graph() {
        let g = generate(&ModelParams::new(5, 2, 1.0, 1, 99).unwrap());
        assert_eq!(g.edge_count(), 10);
        assert!(g.edges().all(|(_, c)| c == 0));
    }

    #[test]
    fn p_zero_gives_empty_graph() {
        let g = generate(&ModelParams::new(5, 2, 0.0, 7, 99).unwrap());
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn generation_is_deterministic() {
        let params = ModelParams::new(40, 2, 0.3, 9, 1234).unwrap();
        assert!(generate(&params).same_as(&generate(&params)));
    }

    #[test]
    fn skeleton_invariant_under_palette() {
        let a = generate(&ModelParams::new(40, 2, 0.3, 3, 77).unwrap());
        let b = generate(&ModelParams::new(40, 2, 0.3, 50, 77).unwrap());
        assert!(a.same_skeleton(&b));
        assert_ne!(a.c(), b.c());
    }

    #[test]
    fn hypergraph_generation() {
        let g = generate(&ModelParams::new(8, 3, 1.0, 4, 5).unwrap());
        assert_eq!(g.edge_count() as u64, binomial(8, 3));
    }

    #[test]
    fn ham_ell_edge_count_examples() {
        assert_eq!(ham_ell_edge_count(12, 3, 1).unwrap(), 6);
        assert_eq!(ham_ell_edge_count(8, 2, 0).unwrap(), 4);
        assert_eq!(ham_ell_edge_count(10, 4, 2).unwrap(), 5);
        assert_eq!(
            ham_ell_edge_count(9, 3, 1),
            Err(ModelError::NotDivisible { n: 9, k: 3, ell: 1 })
        );
        assert!(matches!(
            ham_ell_edge_count(10, 3, 3),
            Err(ModelError::BadOverlap { .. })
        ));
    }

    #[test]
    fn coupled_q_examples() {
        assert!((coupled_q(12, 0.1, 3).unwrap() - 0.4).abs() < 1e-12);
        assert_eq!(coupled_q(5, 0.2, 1).unwrap(), 1.0);
        assert!(matches!(
            coupled_q(10, 0.5, 2),
            Err(ModelError::CouplingInapplicable { .. })
        ));
    }

    #[test]
    fn hc_richness_examples() {
        assert_eq!(hc_family_richness(10, 10).unwrap(), 1);
        assert_eq!(hc_family_richness(10, 15).unwrap(), 6);
        assert!(matches!(
            hc_family_richness(10, 9),
            Err(ModelError::TooFewColors { .. })
        ));
    }
}
