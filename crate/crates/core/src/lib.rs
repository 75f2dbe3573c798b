//! Pseudo-Hermitian operators at finite dimension.
//!
//! Classifies non-Hermitian matrices (Hermitian, quasi-Hermitian,
//! pseudo-Hermitian), builds metric operators `η` with `H† = η H η⁻¹`,
//! maps quasi-Hermitian matrices to Hermitian ones by similarity, and
//! applies all of it to a discretized free Klein-Gordon field.

// `!(x <= tol)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod kleingordon;
pub mod linalg;
pub mod models;
pub mod physical;
pub mod pseudospec;
pub mod suite;

pub use faer::{c64, Mat};

pub use error::{Error, Result};
pub use linalg::{biorthonormalize, eig_full, eig_full_with, herm_sqrt, ComplexMatrix, EigOptions, Spectrum};
pub use pseudospec::{
    antilinear_symmetry, build_general_metric, build_positive_metric, classify, classify_with, eta_inner, hermitize,
    metric_signature, pair_spectrum, transform_metric, verify_intertwining, ClassKind, Classification, MetricOperator,
    PairingMap, Signature,
};
