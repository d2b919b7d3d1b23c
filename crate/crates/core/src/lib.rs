//! Operator perspectives and relative operator entropies over dense real
//! symmetric matrices, with a seeded harness that probes joint convexity and
//! concavity claims in the Loewner order.
//!
//! Layout:
//!
//! - [`matfun`]: spectral decomposition, functional calculus, Loewner order,
//!   random strictly positive matrices.
//! - [`scalarfn`]: the scalar function catalog (`log`, powers, deformed
//!   logarithms, `t^q log t`) and the transpose/shift combinators.
//! - [`perspective`]: `Π_f(A, B)` and the generalized perspective `Π_{fΔh}`.
//! - [`entropy`]: relative operator entropies, Tsallis variants, von Neumann
//!   and Umegaki relative entropy, and the superoperator trace identity.
//! - [`probe`]: seeded campaigns testing operator convexity and joint
//!   convexity/concavity.
//! - [`cli`]: the `opentropy` command-line front end.

// `!(x > 0.0)` style checks are used deliberately so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod entropy;
pub mod error;
pub mod json;
pub mod matfun;
pub mod perspective;
pub mod probe;
pub mod scalarfn;

pub use error::{Error, Result};
pub use matfun::{apply_spectral, decompose, loewner_leq, HermitianMatrix, SpectrumInterval};
pub use scalarfn::ScalarFn;
