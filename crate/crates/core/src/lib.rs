//! Reduced discriminant contours of real exponential sums.
//!
//! An exponential sum `g(y) = Σ_j c_j e^{a_j·y}` with spectrum `A` has a
//! discriminant that, after quotienting the obvious torus actions, becomes
//! the image of `ξ([λ]) = (Log|λ B^T|) B` where `B` spans the affine
//! relations of the columns of `A`. This crate traces that image when it is
//! a planar curve, counts the chambers of its complement for each sign
//! pattern of `c`, and checks those chambers against an independent
//! zero-set topology computation.

pub mod chambers;
pub mod completion;
pub mod contour;
mod dsu;
pub mod error;
pub mod parametrization;
pub mod poly;
pub mod sign;
pub mod spectrum;
pub mod zeroset;

pub use error::{Error, Result};
pub use sign::SignClass;
pub use spectrum::{NullBasis, Spectrum};
