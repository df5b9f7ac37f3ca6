//! The constructive rainbow-Hamiltonicity pipeline: partition colors and
//! vertices, grow a long rainbow path, absorb leftover vertices through star
//! matchings and a sampled rainbow expander, and close the cycle with
//! booster-driven rotation-extension.
//!
//! Stages are strictly ordered; a failure carries the stage it happened at.
//! Every success is verified end-to-end with `verify::check_certificate`
//! before it is returned.

mod booster;
mod expander;
mod longpath;
mod partition;
mod star;

pub use booster::{booster_close, BoosterOutcome};
pub use expander::{rainbow_expander, ExpanderOutcome};
pub use longpath::{rainbow_long_path, LongPathOutcome};
pub use partition::{partition, PartitionPlan};
pub use star::star_matching;

use crate::bitset::Bitset;
use crate::cert::RainbowCertificate;
use crate::colorset::ColorSet;
use crate::graph::ColoredHypergraph;
use crate::model::{generate, ModelParams};
use crate::verify::check_certificate;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Pipeline stages in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Partition,
    LongPath,
    StarMatching,
    Expander,
    Boosters,
    Done,
}

#[derive(Clone, Debug, Error, Serialize)]
#[error("stage {stage:?}: {reason}")]
pub struct StageFailure {
    pub stage: Stage,
    pub reason: String,
}

impl StageFailure {
    pub(crate) fn new(stage: Stage, reason: impl Into<String>) -> Self {
        StageFailure {
            stage,
            reason: reason.into(),
        }
    }
}

/// All tunables. Defaults follow the proof's constants where it pins them
/// (D = 9, two attachment neighbors, the Lemma degree windows); the slack
/// fields concretize its asymptotic (1+o(1)) and "large n" conditions.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Color sampling rate: each reserved color lands in C0 or C1 with
    /// probability alpha each.
    pub alpha: f64,
    /// SMALL threshold coefficient (degree <= delta ln n).
    pub delta: f64,
    /// Window half-width for the (1+o(1)) size targets of W, C0, C1.
    pub size_slack: f64,
    /// Extra widening of the per-vertex degree windows (0 keeps the exact
    /// lemma intervals).
    pub degree_slack: f64,
    /// Star-matching multiplicity D.
    pub matching_d: u32,
    /// Allowed uncovered eligible vertices after the long path; `None` uses
    /// eligible / (ln n)^0.4.
    pub path_deficit: Option<u64>,
    pub path_restarts: u32,
    pub path_node_budget: u64,
    /// Edges each reservoir vertex samples for the expander.
    pub expander_d: u32,
    /// Expansion is demanded for sets up to beta * |W|.
    pub expander_beta: f64,
    /// Expansion factor demanded of the sampled expander.
    pub expansion_factor: f64,
    pub partition_retries: u32,
    pub expander_retries: u32,
    /// Rotation-extension steps per booster iteration.
    pub booster_search_steps: u64,
    pub star_node_budget: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            alpha: 0.1,
            delta: 0.05,
            size_slack: 0.5,
            degree_slack: 0.0,
            matching_d: 9,
            path_deficit: None,
            path_restarts: 40,
            path_node_budget: 200_000,
            expander_d: 5,
            expander_beta: 0.05,
            expansion_factor: 2.0,
            partition_retries: 20,
            expander_retries: 20,
            booster_search_steps: 20_000,
            star_node_budget: 2_000_000,
        }
    }
}

/// Per-stage statistics of one pipeline run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PipelineTrace {
    pub stage_reached: Option<Stage>,
    pub failure: Option<String>,
    pub seed: u64,
    pub n: usize,
    pub c: u32,
    pub small_count: usize,
    pub partition_attempts: u32,
    pub w_size: usize,
    pub c0_size: usize,
    pub c1_size: usize,
    pub c_star_size: usize,
    pub eligible: usize,
    pub target_deficit: u64,
    pub path_vertices: usize,
    pub s_size: usize,
    pub matching_edges: usize,
    pub expander_edges: usize,
    pub expander_attempts: u32,
    pub booster_iterations: u32,
    pub boosters_added: u32,
    /// Available booster colors at the start of each iteration.
    pub available_colors_per_iteration: Vec<usize>,
}

/// Generates H ~ G_c(n,p) from `params` and runs the pipeline on it.
pub fn run_pipeline(
    params: &ModelParams,
    cfg: &PipelineConfig,
) -> (Result<RainbowCertificate, StageFailure>, PipelineTrace) {
    let g = generate(params);
    run_pipeline_on(&g, cfg, params.seed)
}

/// Runs the pipeline on a given colored graph. Deterministic in
/// `(g, cfg, seed)`.
pub fn run_pipeline_on(
    g: &ColoredHypergraph,
    cfg: &PipelineConfig,
    seed: u64,
) -> (Result<RainbowCertificate, StageFailure>, PipelineTrace) {
    let mut trace = PipelineTrace {
        seed,
        n: g.n(),
        c: g.c(),
        ..PipelineTrace::default()
    };
    let result = run_stages(g, cfg, seed, &mut trace);
    match &result {
        Ok(_) => trace.stage_reached = Some(Stage::Done),
        Err(f) => {
            trace.stage_reached = Some(f.stage);
            trace.failure = Some(f.reason.clone());
        }
    }
    (result, trace)
}

fn run_stages(
    g: &ColoredHypergraph,
    cfg: &PipelineConfig,
    seed: u64,
    trace: &mut PipelineTrace,
) -> Result<RainbowCertificate, StageFailure> {
    assert_eq!(g.k(), 2, "the pipeline runs on graphs");
    let n = g.n();

    // stage 1: SMALL handling + vertex/color partition
    let plan = partition(g, cfg, seed, trace)?;
    trace.small_count = plan.small.len();
    trace.w_size = plan.w.len();
    trace.c0_size = plan.c0.len();
    trace.c1_size = plan.c1.len();
    trace.c_star_size = plan.c_star_size;

    let mut forbidden = Bitset::new(n);
    for &v in plan.small.iter().chain(plan.attach_vertices().iter()) {
        forbidden.insert(v as usize);
    }
    let v0 = forbidden.clone();
    for &w in &plan.w {
        forbidden.insert(w as usize);
    }
    let c0_set = ColorSet::from_iter_with_palette(g.c(), plan.c0.iter().copied());
    let c1_set = ColorSet::from_iter_with_palette(g.c(), plan.c1.iter().copied());
    let mut allowed = ColorSet::new(g.c());
    for x in 0..g.c() {
        if !plan.c_small_set.contains(x) && !c0_set.contains(x) && !c1_set.contains(x) {
            allowed.insert(x);
        }
    }

    // stage 2: long rainbow path on the eligible vertices
    let eligible = n - forbidden.count();
    trace.eligible = eligible;
    let deficit = cfg.path_deficit.unwrap_or_else(|| {
        (eligible as f64 / (n as f64).ln().powf(0.4)).floor() as u64
    });
    trace.target_deficit = deficit;
    let path = rainbow_long_path(g, &allowed, &forbidden, deficit, cfg, seed)?;
    trace.path_vertices = path.path.len();
    let (x, y) = (path.path[0], *path.path.last().expect("path nonempty"));

    // stage 3: rainbow D-matching from the unused vertices into W
    let mut on_path = Bitset::new(n);
    for &v in &path.path {
        on_path.insert(v as usize);
    }
    let mut s: Vec<u32> = (0..n as u32)
        .filter(|&v| {
            let vi = v as usize;
            !on_path.contains(vi)
                && !forbidden.contains(vi)
                // attachment vertices join S; SMALL and W stay out
                || (v0.contains(vi) && !plan.small_set.contains(vi))
        })
        .collect();
    s.push(x);
    s.push(y);
    s.sort_unstable();
    s.dedup();
    trace.s_size = s.len();
    let matching = star_matching(g, &s, &plan.w, &c1_set, cfg.matching_d, cfg.star_node_budget)?;
    trace.matching_edges = matching.len();
    let partner = |v: u32| -> u32 {
        matching
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .min()
            .expect("matched vertices have D >= 1 partners")
    };
    let (x_prime, y_prime) = (partner(x), partner(y));
    debug_assert_ne!(x_prime, y_prime, "reservoir vertices are used at most once");
    let m_prime: Vec<(u32, u32)> = matching
        .iter()
        .copied()
        .filter(|&(a, b)| a != x && a != y && b != x && b != y)
        .collect();

    // stage 4: sampled rainbow expander inside G[W; C0]
    let expander = rainbow_expander(g, &plan.w, &c0_set, cfg, seed)?;
    trace.expander_edges = expander.edges.len();
    trace.expander_attempts = expander.attempts;

    // stage 5: assemble G1 = M' + E0 + E(R) on V1 = [n] \ V(P) and close
    let v1: Vec<u32> = (0..n as u32)
        .filter(|&v| !on_path.contains(v as usize))
        .collect();
    let mut local = Subgraph::new(&v1);
    let mut g1_colors = ColorSet::new(g.c());
    let mut add_edge = |local: &mut Subgraph, a: u32, b: u32, col: u32| {
        assert!(
            !g1_colors.contains(col),
            "color discipline violated while assembling G1"
        );
        g1_colors.insert(col);
        local.insert(a, b, col);
    };
    for &(a, b) in &m_prime {
        let col = g.color_between(a, b).expect("matching edges exist in G");
        add_edge(&mut local, a, b, col);
    }
    for &(a, b) in &plan.e0 {
        let col = g.color_between(a, b).expect("attachment edges exist in G");
        add_edge(&mut local, a, b, col);
    }
    for (&(a, b), &col) in expander.edges.iter().zip(&expander.colors) {
        add_edge(&mut local, a, b, col);
    }
    // colors still open for boosters: allowed minus the path's colors
    let mut available = ColorSet::new(g.c());
    let path_used = ColorSet::from_iter_with_palette(g.c(), path.colors.iter().copied());
    for x in allowed.iter() {
        if !path_used.contains(x) {
            available.insert(x);
        }
    }
    let closed = booster_close(g, &mut local, x_prime, y_prime, &mut available, cfg, seed)?;
    trace.booster_iterations = closed.iterations;
    trace.boosters_added = closed.added;
    trace.available_colors_per_iteration = closed.available_per_iteration.clone();

    // splice: x ..path.. y, y', ..G1 path.., x', back to x
    let mut order = path.path.clone();
    let mut colors = path.colors.clone();
    colors.push(
        g.color_between(y, y_prime)
            .expect("y-y' is a matching edge"),
    );
    let mut g1_path = closed.path.clone();
    if g1_path[0] == x_prime {
        g1_path.reverse();
    }
    debug_assert_eq!(g1_path[0], y_prime);
    debug_assert_eq!(*g1_path.last().expect("nonempty"), x_prime);
    for w in g1_path.windows(2) {
        colors.push(local.color_of(w[0], w[1]).expect("edges of the G1 path"));
    }
    order.extend_from_slice(&g1_path);
    colors.push(
        g.color_between(x_prime, x)
            .expect("x'-x is a matching edge"),
    );
    let cert = RainbowCertificate::hamilton_cycle(order, colors);
    if let Err(e) = check_certificate(g, &cert) {
        panic!("pipeline produced an invalid certificate: {e}");
    }
    Ok(cert)
}

/// Mutable graph on a vertex subset with global labels; the booster stage
/// grows G1 in this form.
pub struct Subgraph {
    labels: Vec<u32>,
    index: HashMap<u32, usize>,
    adj: Vec<Vec<usize>>,
    colors: HashMap<(usize, usize), u32>,
}

impl Subgraph {
    pub fn new(labels: &[u32]) -> Self {
        let index = labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        Subgraph {
            labels: labels.to_vec(),
            index,
            adj: vec![Vec::new(); labels.len()],
            colors: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub(crate) fn label(&self, local: usize) -> u32 {
        self.labels[local]
    }

    pub(crate) fn local(&self, global: u32) -> usize {
        self.index[&global]
    }

    /// Inserts an edge by global vertex ids.
    pub fn insert(&mut self, ga: u32, gb: u32, color: u32) {
        let (a, b) = (self.local(ga), self.local(gb));
        debug_assert!(a != b);
        let key = (a.min(b), a.max(b));
        if self.colors.contains_key(&key) {
            panic!("G1 already holds edge {ga}-{gb}");
        }
        self.colors.insert(key, color);
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    pub(crate) fn has(&self, a: usize, b: usize) -> bool {
        self.colors.contains_key(&(a.min(b), a.max(b)))
    }

    pub(crate) fn neighbors(&self, a: usize) -> &[usize] {
        &self.adj[a]
    }

    /// Color by global vertex ids.
    pub fn color_of(&self, ga: u32, gb: u32) -> Option<u32> {
        let (a, b) = (self.local(ga), self.local(gb));
        self.colors.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.colors.len()
    }
}
