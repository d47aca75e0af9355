//! Exact weighted Euler-Maclaurin summation over lattice points of simple
//! integral polytopes.
//!
//! The core objects are weighted lattice sums sum_{x in P} q^{c(x)} f(x),
//! where c(x) is the codimension of the smallest face containing x. For
//! polynomial integrands these sums are evaluated in closed form through a
//! boundary expansion indexed by faces and finite-group characters; for
//! smooth integrands the same expansion yields a main term plus a remainder
//! controlled by derivative norms.

pub mod cli;
pub mod cyclotomic;
pub mod em1d;
pub mod emnd;
pub mod error;
pub mod groups;
pub mod jet;
pub mod kernels;
pub mod multipoly;
pub mod polytope;
pub mod quad;
pub mod rational;
pub mod series;
pub mod smooth;
pub mod snf;
pub mod volume;
pub mod tol;

pub use cyclotomic::Cyc;
pub use error::{Error, Result};
pub use multipoly::MultiPolynomial;
pub use rational::Rational;
pub use series::TruncatedSeries;
