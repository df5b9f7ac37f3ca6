//! Certificate checking and structural predicates: rainbowness, Hamilton
//! (ell-)cycle validity, SMALL vertices, D-matchings, expansion,
//! rainbow-pseudorandomness, and the property audit.

mod audit;
mod expansion;

pub use audit::{audit_properties, AuditConfig, PropertyAuditReport, PropertyCheck, SampledCheck};
pub use expansion::{
    is_expander, is_expander_with, is_rainbow_pseudorandom, is_rainbow_pseudorandom_with,
    CheckMode, ExpanderCheckConfig, ExpansionReport, PseudorandomReport,
};

use crate::cert::{ell_cycle_blocks, CertKind, RainbowCertificate};
use crate::colorset::ColorSet;
use crate::graph::ColoredHypergraph;
use thiserror::Error;

/// Reason codes for rejected certificates.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertError {
    #[error("certificate kind {0} does not fit a {1}-uniform host")]
    WrongKind(String, usize),
    #[error("vertex order missing for cycle certificate")]
    MissingOrder,
    #[error("vertex order is not a permutation of the vertex set")]
    NotPermutation,
    #[error("edge/color list lengths are inconsistent with the claimed structure")]
    LengthMismatch,
    #[error("claimed edge {0:?} does not match the claimed structure")]
    StructureMismatch(Vec<u32>),
    #[error("edge {0:?} missing from the host graph")]
    MissingEdge(Vec<u32>),
    #[error("edge {0:?} has color {1} in the host, certificate claims {2}")]
    ColorMismatch(Vec<u32>, u32, u32),
    #[error("color {0} repeats")]
    ColorRepeat(u32),
    #[error("consecutive edges overlap in {0} vertices, expected {1}")]
    BadOverlap(usize, usize),
    #[error("matching does not cover every vertex exactly once")]
    NotPartition,
    #[error("n = {0} not divisible by k - ell = {1}")]
    NotDivisible(usize, usize),
    #[error("structure too small: {0}")]
    Degenerate(String),
}

/// True iff the certificate is valid in `h`; see [`check_certificate`].
pub fn certificate_ok(h: &ColoredHypergraph, cert: &RainbowCertificate) -> bool {
    check_certificate(h, cert).is_ok()
}

/// Checks that all claimed edges exist in `h`, realize the claimed structure
/// exactly, and carry pairwise distinct colors.
pub fn check_certificate(
    h: &ColoredHypergraph,
    cert: &RainbowCertificate,
) -> Result<(), CertError> {
    match cert.kind {
        CertKind::HamiltonCycle => {
            if h.k() != 2 {
                return Err(CertError::WrongKind("hamilton-cycle".into(), h.k()));
            }
            let order = cert.vertex_order.as_ref().ok_or(CertError::MissingOrder)?;
            if order.len() != h.n() || h.n() < 3 {
                return Err(CertError::Degenerate(
                    "cycle must span n >= 3 vertices".into(),
                ));
            }
            check_permutation(order, h.n())?;
            let n = order.len();
            if cert.edges.len() != n || cert.colors.len() != n {
                return Err(CertError::LengthMismatch);
            }
            for i in 0..n {
                let (a, b) = (order[i], order[(i + 1) % n]);
                let expect = vec![a.min(b), a.max(b)];
                if cert.edges[i] != expect {
                    return Err(CertError::StructureMismatch(cert.edges[i].clone()));
                }
            }
            check_edges_present(h, cert)?;
            check_rainbow(h.c(), &cert.colors)
        }
        CertKind::HamiltonEllCycle { ell } => {
            let k = h.k();
            if ell >= k {
                return Err(CertError::WrongKind(
                    format!("hamilton-ell-cycle({ell})"),
                    k,
                ));
            }
            let order = cert.vertex_order.as_ref().ok_or(CertError::MissingOrder)?;
            if order.len() != h.n() {
                return Err(CertError::NotPermutation);
            }
            check_permutation(order, h.n())?;
            if h.n() % (k - ell) != 0 {
                return Err(CertError::NotDivisible(h.n(), k - ell));
            }
            let m = h.n() / (k - ell);
            if cert.edges.len() != m || cert.colors.len() != m {
                return Err(CertError::LengthMismatch);
            }
            let blocks = ell_cycle_blocks(order, k, ell);
            for (claimed, derived) in cert.edges.iter().zip(&blocks) {
                if claimed != derived {
                    return Err(CertError::StructureMismatch(claimed.clone()));
                }
                if claimed.len() != k || !claimed.windows(2).all(|w| w[0] < w[1]) {
                    return Err(CertError::StructureMismatch(claimed.clone()));
                }
            }
            for b in 0..m {
                let inter = intersection_size(&blocks[b], &blocks[(b + 1) % m]);
                // m = 1 or 2 makes "consecutive" degenerate; skip the overlap
                // test there (a single block wraps onto itself).
                if m > 2 && inter != ell {
                    return Err(CertError::BadOverlap(inter, ell));
                }
            }
            check_edges_present(h, cert)?;
            check_rainbow(h.c(), &cert.colors)
        }
        CertKind::PerfectMatching => {
            let k = h.k();
            if h.n() % k != 0 {
                return Err(CertError::NotDivisible(h.n(), k));
            }
            let m = h.n() / k;
            if cert.edges.len() != m || cert.colors.len() != m {
                return Err(CertError::LengthMismatch);
            }
            let mut seen = vec![false; h.n()];
            for vs in &cert.edges {
                if vs.len() != k || !vs.windows(2).all(|w| w[0] < w[1]) {
                    return Err(CertError::StructureMismatch(vs.clone()));
                }
                for &v in vs {
                    if v as usize >= h.n() || seen[v as usize] {
                        return Err(CertError::NotPartition);
                    }
                    seen[v as usize] = true;
                }
            }
            if !seen.iter().all(|&s| s) {
                return Err(CertError::NotPartition);
            }
            check_edges_present(h, cert)?;
            check_rainbow(h.c(), &cert.colors)
        }
        CertKind::SubgraphCopy => {
            if cert.edges.len() != cert.colors.len() || cert.edges.is_empty() {
                return Err(CertError::LengthMismatch);
            }
            if let Some(order) = &cert.vertex_order {
                // order, when given, must be a path realizing the edges (k = 2)
                if h.k() != 2 || order.len() != cert.edges.len() + 1 {
                    return Err(CertError::LengthMismatch);
                }
                for (i, w) in order.windows(2).enumerate() {
                    let expect = vec![w[0].min(w[1]), w[0].max(w[1])];
                    if cert.edges[i] != expect {
                        return Err(CertError::StructureMismatch(cert.edges[i].clone()));
                    }
                }
            }
            check_edges_present(h, cert)?;
            check_rainbow(h.c(), &cert.colors)
        }
    }
}

fn check_permutation(order: &[u32], n: usize) -> Result<(), CertError> {
    if order.len() != n {
        return Err(CertError::NotPermutation);
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v as usize >= n || seen[v as usize] {
            return Err(CertError::NotPermutation);
        }
        seen[v as usize] = true;
    }
    Ok(())
}

fn check_edges_present(h: &ColoredHypergraph, cert: &RainbowCertificate) -> Result<(), CertError> {
    for (vs, &claimed) in cert.edges.iter().zip(&cert.colors) {
        match h.edge_color(vs) {
            None => return Err(CertError::MissingEdge(vs.clone())),
            Some(host) if host != claimed => {
                return Err(CertError::ColorMismatch(vs.clone(), host, claimed))
            }
            _ => {}
        }
    }
    Ok(())
}

fn check_rainbow(c: u32, colors: &[u32]) -> Result<(), CertError> {
    let mut used = ColorSet::new(c);
    for &col in colors {
        if used.contains(col) {
            return Err(CertError::ColorRepeat(col));
        }
        used.insert(col);
    }
    Ok(())
}

fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    // both sorted
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// SMALL = vertices of degree <= delta * ln n (natural log).
pub fn small_set(g: &ColoredHypergraph, delta: f64) -> Vec<u32> {
    small_set_in_base(g, delta, std::f64::consts::E)
}

/// SMALL with a configurable logarithm base.
pub fn small_set_in_base(g: &ColoredHypergraph, delta: f64, base: f64) -> Vec<u32> {
    assert_eq!(g.k(), 2, "SMALL is defined for graphs");
    let threshold = delta * (g.n() as f64).log(base);
    (0..g.n() as u32)
        .filter(|&v| g.degree(v) as f64 <= threshold)
        .collect()
}

/// Checks that `m_edges` is a rainbow D-matching from S to W in `g`:
/// every edge exists, colors are pairwise distinct, every s in S has exactly
/// `d` matching edges into W, and every w in W lies in at most one edge.
/// S and W must be disjoint.
pub fn is_d_matching(
    g: &ColoredHypergraph,
    s: &[u32],
    w: &[u32],
    m_edges: &[(u32, u32)],
    d: u32,
) -> bool {
    assert_eq!(g.k(), 2, "D-matchings are defined for graphs");
    let n = g.n();
    let mut in_s = vec![false; n];
    let mut in_w = vec![false; n];
    for &v in s {
        in_s[v as usize] = true;
    }
    for &v in w {
        if in_s[v as usize] {
            return false; // S and W must be disjoint
        }
        in_w[v as usize] = true;
    }
    let mut used = ColorSet::new(g.c());
    let mut deg_into_w = vec![0u32; n];
    let mut w_load = vec![0u32; n];
    for &(a, b) in m_edges {
        let Some(color) = g.color_between(a, b) else {
            return false;
        };
        if used.contains(color) {
            return false;
        }
        used.insert(color);
        for (x, y) in [(a, b), (b, a)] {
            if in_s[x as usize] && in_w[y as usize] {
                deg_into_w[x as usize] += 1;
            }
            if in_w[x as usize] {
                w_load[x as usize] += 1;
            }
        }
    }
    s.iter().all(|&v| deg_into_w[v as usize] == d)
        && w.iter().all(|&v| w_load[v as usize] <= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ColoredHypergraph;

    fn triangle(colors: [u32; 3]) -> ColoredHypergraph {
        ColoredHypergraph::new(
            3,
            2,
            3,
            vec![
                (vec![0, 1], colors[0]),
                (vec![1, 2], colors[1]),
                (vec![0, 2], colors[2]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn triangle_cycle_valid() {
        let h = triangle([0, 1, 2]);
        let cert = RainbowCertificate::hamilton_cycle(vec![0, 1, 2], vec![0, 1, 2]);
        assert!(certificate_ok(&h, &cert));
    }

    #[test]
    fn triangle_color_repeat_rejected() {
        let h = triangle([0, 1, 1]);
        let cert = RainbowCertificate::hamilton_cycle(vec![0, 1, 2], vec![0, 1, 1]);
        assert_eq!(check_certificate(&h, &cert), Err(CertError::ColorRepeat(1)));
    }

    #[test]
    fn ell_cycle_example_n6() {
        // n=6, k=3, ell=1, cyclic order 1..6: blocks {1,2,3},{3,4,5},{5,6,1}
        let h = ColoredHypergraph::new(
            6,
            3,
            5,
            vec![
                (vec![0, 1, 2], 0),
                (vec![2, 3, 4], 1),
                (vec![0, 4, 5], 2),
                (vec![1, 3, 5], 3),
            ],
        )
        .unwrap();
        let cert = RainbowCertificate::hamilton_ell_cycle(
            1,
            3,
            vec![0, 1, 2, 3, 4, 5],
            vec![0, 1, 2],
        );
        assert_eq!(cert.edges.len(), 3); // m_ell = 3 edges
        assert!(certificate_ok(&h, &cert));
        // same order against a host missing a block
        let h2 = ColoredHypergraph::new(
            6,
            3,
            5,
            vec![(vec![0, 1, 2], 0), (vec![2, 3, 4], 1)],
        )
        .unwrap();
        assert!(matches!(
            check_certificate(&h2, &cert),
            Err(CertError::MissingEdge(_))
        ));
    }

    #[test]
    fn missing_edge_and_mismatched_color() {
        let h = triangle([0, 1, 2]);
        let cert = RainbowCertificate::hamilton_cycle(vec![0, 1, 2], vec![0, 1, 1]);
        assert!(matches!(
            check_certificate(&h, &cert),
            Err(CertError::ColorMismatch(..))
        ));
        let bad_order = RainbowCertificate::hamilton_cycle(vec![0, 1, 1], vec![0, 1, 2]);
        assert_eq!(
            check_certificate(&h, &bad_order),
            Err(CertError::NotPermutation)
        );
    }

    #[test]
    fn small_set_examples() {
        // empty graph: everything is SMALL
        let empty = ColoredHypergraph::new(6, 2, 1, vec![]).unwrap();
        assert_eq!(small_set(&empty, 0.1).len(), 6);
        // K5: degrees 4 > 0.1 ln 5
        let k5 = ColoredHypergraph::complete_rainbow(5);
        assert!(small_set(&k5, 0.1).is_empty());
        // star K_{1,9}: leaves degree 1 <= 2 ln 10, center degree 9 > 2 ln 10
        let star = ColoredHypergraph::new(
            10,
            2,
            9,
            (1..10).map(|v| (vec![0, v as u32], v as u32 - 1)).collect(),
        )
        .unwrap();
        let small = small_set(&star, 2.0);
        assert_eq!(small, (1..10).collect::<Vec<u32>>());
    }

    #[test]
    fn d_matching_examples() {
        // S={0}, W={1,2}, M={01,02} distinct colors, D=2
        let g = ColoredHypergraph::new(
            3,
            2,
            3,
            vec![(vec![0, 1], 0), (vec![0, 2], 1)],
        )
        .unwrap();
        assert!(is_d_matching(&g, &[0], &[1, 2], &[(0, 1), (0, 2)], 2));
        // same edges, equal colors: not rainbow
        let g2 = ColoredHypergraph::new(
            3,
            2,
            3,
            vec![(vec![0, 1], 0), (vec![0, 2], 0)],
        )
        .unwrap();
        assert!(!is_d_matching(&g2, &[0], &[1, 2], &[(0, 1), (0, 2)], 2));
        // D=3 with |W| < 3|S| is impossible for any M
        assert!(!is_d_matching(&g, &[0], &[1, 2], &[(0, 1), (0, 2)], 3));
    }

    #[test]
    fn perfect_matching_cert() {
        let g = ColoredHypergraph::new(
            4,
            2,
            5,
            vec![(vec![0, 1], 0), (vec![2, 3], 4)],
        )
        .unwrap();
        let cert =
            RainbowCertificate::perfect_matching(vec![vec![0, 1], vec![2, 3]], vec![0, 4]);
        assert!(certificate_ok(&g, &cert));
        let not_spanning =
            RainbowCertificate::perfect_matching(vec![vec![0, 1], vec![0, 1]], vec![0, 0]);
        assert!(!certificate_ok(&g, &not_spanning));
    }
}
