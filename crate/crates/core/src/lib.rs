//! Exact twisted loop algebras, their parahoric truncations, brute-force
//! Lie algebra cohomology, and affine constant-term identities.

pub mod chevalley;
pub mod cohomology;
pub mod constterm;
pub mod error;
pub mod folding;
pub mod lie;
pub mod linalg;
pub mod qseries;
pub mod rootdata;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Cyclo3, Field};

/// Rational numbers.
pub type Q = num_rational::BigRational;
/// `Q(ζ)` with ζ a primitive cube root of unity.
pub type QZeta = Cyclo3<Q>;
