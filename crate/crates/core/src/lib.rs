//! Abelian varieties with multiplication by an imaginary quadratic field
//! `K = Q(√−Δ)`, described either by a point of a Siegel domain or by a
//! Hermitian K-space with a surjection onto `Cⁿ`, plus exterior powers in
//! signature `(1, r−1)`.

pub mod cli;
pub mod correspondence;
pub mod error;
pub mod exterior;
pub mod field;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod riemann;
pub mod siegel;

pub use correspondence::{b_to_e, e_to_b, validate_triple, variety_build, TripleE, VarietyB};
pub use error::{Error, Result};
pub use exterior::{compound, exterior_variety, wedge_basis};
pub use field::{Embedding, FieldContext, KElement};
pub use linalg::DEFAULT_TOL;
pub use matrix::{CMatrix, KMatrix};
pub use siegel::{gu_act, siegel_contains, siegel_sample, GUElement, SiegelPoint};
