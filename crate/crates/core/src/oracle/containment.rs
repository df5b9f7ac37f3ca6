//! Exact containment probability over all edge subsets.
//!
//! For N = C(n,k) <= 24 potential edges, the probability that H^k(n,p)
//! contains a copy of the (uncolored) structure equals
//! sum over subsets E' of p^|E'| (1-p)^(N-|E'|) [E' contains the structure].
//! Computed by marking each structure's edge mask and taking the upward
//! closure over the subset lattice.

use crate::combin::{binomial, colex_rank, for_each_subset};
use crate::model::ModelParams;
use crate::oracle::OracleError;
use serde::{Deserialize, Serialize};

/// Uncolored structure predicates decided by enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureKind {
    HamiltonCycle,
    PerfectMatching,
    HamiltonEllCycle { ell: usize },
    Triangle,
}

/// All copies of the structure as edge-rank bitmasks.
pub(crate) fn structure_masks(
    n: usize,
    k: usize,
    kind: StructureKind,
) -> Result<Vec<u32>, OracleError> {
    match kind {
        StructureKind::Triangle => {
            if k != 2 {
                return Err(OracleError::TooLarge(
                    "triangle copies are defined for k = 2".into(),
                ));
            }
            let verts: Vec<u32> = (0..n as u32).collect();
            let mut masks = Vec::new();
            for_each_subset(&verts, 3, |t| {
                let mask = (1u32 << colex_rank(&[t[0], t[1]]))
                    | (1u32 << colex_rank(&[t[0], t[2]]))
                    | (1u32 << colex_rank(&[t[1], t[2]]));
                masks.push(mask);
                true
            });
            Ok(masks)
        }
        StructureKind::HamiltonCycle => {
            if k != 2 {
                return Err(OracleError::TooLarge(
                    "Hamilton cycles are enumerated for k = 2".into(),
                ));
            }
            if n < 3 {
                return Ok(Vec::new());
            }
            let mut rest: Vec<u32> = (1..n as u32).collect();
            let mut masks = Vec::new();
            hc_masks(&mut rest, 0, n, &mut masks);
            Ok(masks)
        }
        StructureKind::PerfectMatching => {
            if n % k != 0 {
                return Ok(Vec::new());
            }
            let mut masks = Vec::new();
            let mut free: Vec<u32> = (0..n as u32).collect();
            let mut blocks: Vec<Vec<u32>> = Vec::new();
            pm_masks(k, &mut free, &mut blocks, &mut masks);
            Ok(masks)
        }
        StructureKind::HamiltonEllCycle { ell } => {
            if ell >= k {
                return Err(OracleError::TooLarge("need ell < k".into()));
            }
            let step = k - ell;
            if n % step != 0 {
                return Ok(Vec::new());
            }
            // enumerate all orderings with vertex 0 first; collect block masks
            let mut order: Vec<u32> = (0..n as u32).collect();
            let mut masks = std::collections::HashSet::new();
            ell_masks(&mut order, 1, k, step, &mut masks);
            Ok(masks.into_iter().collect())
        }
    }
}

fn hc_masks(rest: &mut Vec<u32>, at: usize, n: usize, masks: &mut Vec<u32>) {
    if at == rest.len() {
        if rest[0] > rest[n - 2] {
            return;
        }
        let mut mask = 0u32;
        let mut prev = 0u32;
        for &v in rest.iter() {
            mask |= 1 << colex_rank(&[prev.min(v), prev.max(v)]);
            prev = v;
        }
        mask |= 1 << colex_rank(&[0, prev]);
        masks.push(mask);
        return;
    }
    for i in at..rest.len() {
        rest.swap(at, i);
        hc_masks(rest, at + 1, n, masks);
        rest.swap(at, i);
    }
}

fn pm_masks(k: usize, free: &mut Vec<u32>, blocks: &mut Vec<Vec<u32>>, masks: &mut Vec<u32>) {
    if free.is_empty() {
        let mut mask = 0u32;
        for b in blocks.iter() {
            mask |= 1 << colex_rank(b);
        }
        masks.push(mask);
        return;
    }
    let head = free[0];
    let rest: Vec<u32> = free[1..].to_vec();
    for_each_subset(&rest, k - 1, |partners| {
        let mut block = vec![head];
        block.extend_from_slice(partners);
        let remaining: Vec<u32> = rest
            .iter()
            .copied()
            .filter(|v| !partners.contains(v))
            .collect();
        blocks.push(block);
        let mut rem = remaining;
        pm_masks(k, &mut rem, blocks, masks);
        blocks.pop();
        true
    });
}

fn ell_masks(
    order: &mut Vec<u32>,
    at: usize,
    k: usize,
    step: usize,
    masks: &mut std::collections::HashSet<u32>,
) {
    let n = order.len();
    if at == n {
        let mut mask = 0u32;
        for b in 0..n / step {
            let mut vs: Vec<u32> = (0..k).map(|j| order[(b * step + j) % n]).collect();
            vs.sort_unstable();
            mask |= 1 << colex_rank(&vs);
        }
        masks.insert(mask);
        return;
    }
    for i in at..n {
        order.swap(at, i);
        ell_masks(order, at + 1, k, step, masks);
        order.swap(at, i);
    }
}

/// Exact Pr[H^k(n,p) contains the structure]; refuses C(n,k) > 24.
pub fn exact_containment_probability(
    params: &ModelParams,
    kind: StructureKind,
) -> Result<f64, OracleError> {
    let (n, k, p) = (params.n, params.k, params.p);
    let slots = binomial(n, k);
    if slots > 24 {
        return Err(OracleError::TooLarge(format!(
            "C({n},{k}) = {slots} > 24 potential edges"
        )));
    }
    let slots = slots as usize;
    let masks = structure_masks(n, k, kind)?;
    let total = 1usize << slots;
    let mut contains = vec![false; total];
    for &m in &masks {
        contains[m as usize] = true;
    }
    let mut by_popcount = vec![0u64; slots + 1];
    for s in 0..total {
        if !contains[s] {
            let mut rem = s;
            while rem != 0 {
                let bit = rem & rem.wrapping_neg();
                if contains[s ^ bit] {
                    contains[s] = true;
                    break;
                }
                rem ^= bit;
            }
        }
        if contains[s] {
            by_popcount[(s as u32).count_ones() as usize] += 1;
        }
    }
    let mut prob = 0.0;
    for (m, &cnt) in by_popcount.iter().enumerate() {
        if cnt > 0 {
            prob += cnt as f64 * p.powi(m as i32) * (1.0 - p).powi((slots - m) as i32);
        }
    }
    Ok(prob.clamp(0.0, 1.0))
}
