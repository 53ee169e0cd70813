//! The free algebra in `u_i, u_i⁻¹, a_j, a_j*`, its derivations, and formal trace expressions.

mod ops;
mod poly;
mod trace;
mod word;

pub use ops::{cyclic_derivative, degree_operator, nc_derivative, reduced_laplacian, xi_norm};
pub use poly::{NCPolynomial, TensorPolynomial};
pub(crate) use trace::dense_trace_key;
pub use trace::{format_key, trace_key, trace_of_permutation, TraceExpression, TraceKey};
pub use word::{
    decompose, gamma_from_blocks, gamma_of_tuple, tuple_structure, Letter, TupleStructure, Word,
    WordDecomposition,
};
