//! Exact exterior algebra over `ℚ` and affinity classification of polynomial
//! functions on spaces of exterior forms.
//!
//! The crate decides, by exact symbolic identity, whether a polynomial
//! `f: Λ^k → ℝ` is affine along every line `ω + t a∧b` (ext. one affine) or
//! `ω + t a⌟b` (int. one affine), and whether `f: Λ^{k+1} × Λ^{k-1} → ℝ` is
//! affine along every paired line `(ξ + t a∧b, η + t a⌟b)`. Members come back
//! with their canonical coefficient forms, non-members with an explicit
//! direction along which `f` is not affine.

pub mod affinity;
pub mod error;
pub mod exterior;
pub mod formpoly;
pub mod linalg;
pub mod multiindex;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use exterior::{Decomposition, Form};
pub use formpoly::{FunctionSpec, LineMode, Polynomial, Signature};
pub use multiindex::MultiIndex;
pub use scalar::Scalar;
