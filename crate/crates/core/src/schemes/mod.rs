//! Punctual schemes: finite local algebras, their Hilbert functions, Macaulay
//! duality, and spans of scheme images under a polynomial map.

mod algebra;
mod apolar;
mod hilbert;
mod span;

pub use algebra::{
    algebra_mul, push_polynomial, AlgebraElement, AlgebraKind, Embedding, FiniteLocalAlgebra,
};
pub use apolar::{
    apolar_annihilator, apolar_hilbert, contract, contraction_span_dim, quotient_dimension,
};
pub use hilbert::{check_hilbert_properties, hilbert_function, HilbertFn};
pub use span::{
    avoidance_experiment, image_rank, point_in_span, random_embedding, scheme_span_kernel,
    AvoidanceReport, AvoidanceWitness, SchemeFamily,
};
