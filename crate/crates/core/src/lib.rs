//! Numeric verification of trace inequalities for completely monotone and
//! Bernstein functions of positive semidefinite matrices.
//!
//! - [`matcore`]: Hermitian matrices, a Jacobi eigensolver, spectral
//!   functions, Schatten norms and seeded random ensembles.
//! - [`funclass`]: the scalar function classes and their integral
//!   representations.
//! - [`ineq`]: the inequality catalog, one operation per inequality.
//! - [`explorer`]: sweeps, counterexample search and conjecture probes.

pub mod error;
pub mod explorer;
pub mod funclass;
pub mod ineq;
pub mod matcore;

mod exec;

pub use error::{Error, Result};
pub use exec::Execution;
