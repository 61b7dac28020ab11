//! Fast estimation of harmonic centrality from in-degree clues.
//!
//! The estimator fits a power law to the exact centralities of a small
//! node sample, translates the model's quantiles into in-degree
//! thresholds, and answers queries with a handful of comparisons per
//! node. The crate also ships exact-centrality computation, synthetic
//! generators and null models, reference regressors, and the
//! experiment protocols used to evaluate all of the above.

// validation guards are written `!(x > 0.0)` on purpose: unlike
// `x <= 0.0` they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod digraph;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod powerlaw;
pub mod quickcent;
pub mod rng;
pub mod stats;

pub use digraph::{CentralityVector, Digraph, UNREACHABLE};
pub use error::{Error, Result};
pub use experiments::{ExperimentConfig, ExperimentReport, GraphSource, Record};
pub use generators::{ErConfig, PaConfig};
pub use powerlaw::{PowerLawFit, PowerLawModel};
pub use quickcent::{ProportionsSpec, QuickCentModel, XminMode};
pub use stats::Summary;
