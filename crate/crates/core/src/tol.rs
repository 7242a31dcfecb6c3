//! Tolerances shared by the whole crate.
//!
//! Every comparison is relative to a problem scale `max(1, largest magnitude
//! involved)`, see [`scaled`].

/// Rank decisions, signatures and other linear-algebra verdicts.
pub const LINALG: f64 = 1e-9;

/// Einstein and flatness verdicts. Ricci composes O(n^3) floating operations
/// so it runs one decade looser than [`LINALG`].
pub const EINSTEIN: f64 = 1e-8;

/// Floor on the smallest singular value of the search factor.
pub const SEARCH_SIGMA_FLOOR: f64 = 1e-6;

/// `tol * max(1, magnitude)`.
pub fn scaled(tol: f64, magnitude: f64) -> f64 {
    tol * magnitude.max(1.0)
}
