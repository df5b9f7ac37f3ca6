//! A laboratory for rainbow spanning structures in randomly edge-colored
//! random graphs and hypergraphs.
//!
//! The crate provides:
//!
//! - seeded generators for the H^k_c(n,p) model ([`model`]),
//! - certificate checking and structural predicates ([`verify`]),
//! - exact search oracles for small instances ([`oracle`]),
//! - a constructive rainbow-Hamiltonicity pipeline: color/vertex partition,
//!   rainbow long path, star matchings, a sampled rainbow expander, and
//!   booster-driven rotation-extension closure ([`pipeline`]),
//! - a simulator for the colored/uncolored coupling interpolation and its
//!   dominance inequality ([`coupling`]),
//! - threshold sweeps, packing extraction, and statistical audits
//!   ([`experiments`]).
//!
//! Everything is deterministic in a 64-bit seed; see [`rng`] for the stream
//! discipline.

pub mod bitset;
pub mod cert;
pub mod colorset;
pub mod combin;
pub mod coupling;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod model;
pub mod oracle;
pub mod pipeline;
pub mod rng;
pub mod stats;
pub mod verify;

pub use cert::{CertKind, RainbowCertificate};
pub use graph::ColoredHypergraph;
pub use model::ModelParams;
