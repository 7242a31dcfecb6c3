//! Curvature of left-invariant pseudo-Riemannian metrics at the Lie-algebra level.
//!
//! The crate is organised bottom-up:
//!
//! - [`pseudolin`]: signatures, degeneracy of subspaces, orthogonal complements
//!   and isotropic vectors for indefinite inner products.
//! - [`liealg`]: structure constants, Jacobi checks, characteristic ideals and
//!   derivations, independent of any metric.
//! - [`curvature`]: Levi-Civita product, curvature tensor, three routes to the
//!   Ricci curvature and the Einstein verdict.
//! - [`doubleext`]: the double-extension construction of Lorentzian
//!   Ricci-flat nilpotent algebras and its inverse.
//! - [`catalog`]: nilpotent algebras of dimension at most five, their
//!   Ricci-flat Lorentzian metrics and three higher-dimensional examples.
//! - [`search`]: finite-difference descent for Einstein metrics on a fixed algebra.
//! - [`io`] and [`verify`]: JSON file formats and the reproducibility runner
//!   behind `mlie verify-paper`.
//!
//! ```
//! use mlie::catalog::{make_metric, CatalogKey, MetricVariant};
//! use mlie::curvature::einstein_classify;
//!
//! let key = CatalogKey::variant(MetricVariant::M56, &[("mu", 1.0), ("eps", -1.0)]);
//! let m = make_metric(&key)?;
//! let report = einstein_classify(&m, 1e-8);
//! assert!(report.verdict.is_ricci_flat());
//! # Ok::<(), mlie::Error>(())
//! ```

pub mod catalog;
pub mod cli;
pub mod curvature;
pub mod doubleext;
pub mod error;
pub mod io;
pub mod liealg;
pub mod pseudolin;
pub mod search;
pub mod tol;
pub mod verify;

pub use catalog::{CatalogKey, CatalogName, MetricVariant};
pub use curvature::{CurvatureReport, MetricLieAlgebra, Verdict};
pub use doubleext::ExtensionData;
pub use error::{Error, Result};
pub use liealg::{Derivation, LieAlgebra};
pub use pseudolin::{Gram, Subspace, SubspaceClass, SubspaceTag};
