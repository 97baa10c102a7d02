//! Exact computer algebra for truncated Witt vectors, divisor classes on the
//! projective line, absolute differential forms, multilinear symbols with
//! Steinberg-relation checking, residue calculus, and reciprocity sums.
//!
//! Everything computes over exact coefficient fields (the rationals or a
//! prime field), so every identity checked by this crate is checked with
//! tolerance zero.

pub mod differential;
pub mod error;
pub mod factor;
pub mod field;
pub mod homotopy;
pub mod local;
pub mod milnor;
pub mod multipoly;
pub mod parse;
pub mod report;
pub mod scalar;
pub mod picard;
pub mod sample;
pub mod symbol;
pub mod unipoly;
pub mod weil;
pub mod witt;

pub use error::{Error, Result};
pub use field::{Fld, FieldElement, FunctionField, IrredStatus, RatFunc, SimpleExtension};
pub use scalar::{BaseField, Scalar};
pub use unipoly::{RatT, UniPoly};
