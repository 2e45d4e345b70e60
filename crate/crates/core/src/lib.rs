//! Root inference in randomly grown trees.
//!
//! A tree is grown by uniform, preferential or degree^α attachment, its labels
//! are scrambled, and the task is to point at a small set of vertices that
//! contains the first vertex.
//!
//! * [`tree`]: growth trees, unlabeled shapes, subtree sizes.
//! * [`generators`]: reproducible samplers for the attachment models.
//! * [`isomorphism`]: canonical codes, automorphism factors, orbit counts.
//! * [`estimators`]: the `psi`, `phi`, `zeta` and `xi` scores, confidence
//!   sets and the exact root posterior.
//! * [`oracle`]: exhaustive enumeration, exact counting formulas and
//!   Monte Carlo checks of the supporting probability bounds.
//! * [`experiments`]: success-rate measurements over many trials.
//! * [`cli`]: the `rootfinder` command line front end.

pub mod cli;
pub mod estimators;
pub mod experiments;
pub mod generators;
pub mod isomorphism;
pub mod oracle;
pub mod tree;

pub use estimators::{
    phi_scores, psi_scores, root_posterior, select_smallest, xi_scores, zeta_scores,
    ConfidenceSet, Estimator, ScoreVector,
};
pub use generators::{ModelSpec, RngStream};
pub use isomorphism::{aut_log, canonical_code, orbit_count, CanonicalCode};
pub use tree::{forget_labels, split_sizes, subtree_sizes, GrowthTree, ShapeTree, Vertex};
