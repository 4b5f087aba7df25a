//! Construction and exact verification of `k`-regular polynomial maps.
//!
//! A map `f = (f_1, …, f_N): C^n → C^N` is `k`-regular when the images of any
//! `k` distinct points are linearly independent; equivalently the span of the
//! `f_j` is a `k`-interpolating space. This crate builds the explicit families
//! (Veronese, base, `thm3`, `thm4`), checks regularity with exact rank
//! computations over `Q` and `Q(i)`, searches for counterexamples, and models
//! the punctual schemes used to justify the projections.

pub mod constructions;
pub mod error;
pub mod interpolation;
pub mod linalg;
pub mod poly;
pub mod regularity;
pub mod sampling;
pub mod scalar;
pub mod schemes;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use poly::{enumerate_monomials, Monomial, PolyMap, Polynomial, WeightVector};
pub use scalar::{GaussianRational, Rational, Scalar};
