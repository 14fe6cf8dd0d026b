//! Neighbor-choice percolation on vertex-transitive `d`-regular directed graphs.
//!
//! Every site `x` independently picks a random subset of its `d` neighbors:
//! the subset has size `k` with probability `p_k` and is uniform among the
//! size-`k` subsets. Two adjacent sites are *weakly* connected when at least
//! one picked the other, and *strongly* connected when both did. The crate
//! provides
//!
//! - exact closed forms for the 2-regular chain (mean cluster sizes and
//!   point-to-point connection probabilities),
//! - mean matrices and critical thresholds for regular trees,
//! - sufficient-condition checkers for sub/supercritical behavior on lattices
//!   driven by connective constants,
//! - Monte Carlo estimators (cluster size, shell reach, cluster counts,
//!   decay rates, tree survival) on finite windows of the catalog graphs,
//! - exact finite-support event probabilities, a directional derivative
//!   formula over the probability simplex, and disjoint-occurrence bounds.
//!
//! All randomness is derived from a counter-based generator keyed by
//! `(seed, trial, unit)`, so every estimate is reproducible and independent
//! of the parallel schedule.

pub mod cluster;
pub mod error;
pub mod events;
pub mod exact;
pub mod graph;
pub mod mc;
pub mod prob;
pub mod sampler;

pub use cluster::{ClusterReport, Mode};
pub use error::{Error, Result};
pub use graph::{GraphKind, GraphWindow};
pub use prob::ProbVector;
pub use sampler::Configuration;
