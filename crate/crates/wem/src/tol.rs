//! Numerical tolerances used by the floating-point paths.
//!
//! Exact paths (rational and cyclotomic arithmetic) use none of these.
//! Values are chosen so quadrature error stays two orders of magnitude
//! below the agreement thresholds asserted by tests.

/// Target absolute error for a single quadrature call.
pub const QUAD: f64 = 1e-10;

/// Maximum accepted discrepancy between independently computed routes
/// (remainder by kernel integral vs. remainder by difference).
pub const AGREEMENT: f64 = 1e-8;

/// Maximum accepted drift of a smooth main term under a change of
/// polarization vector.
pub const POLARIZATION: f64 = 1e-9;

/// Residual imaginary part allowed after summing conjugate-closed
/// character contributions of a real-valued problem.
pub const IMAGINARY_RESIDUAL: f64 = 1e-9;

/// Remainder-to-estimate ratios across a family of test functions must
/// stay within this multiplicative band.
pub const ESTIMATE_SPREAD: f64 = 10.0;
