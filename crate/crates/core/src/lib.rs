//! Exact and asymptotic Haar-unitary integrals of trace polynomials.
//!
//! Moments are expanded with the Weingarten function, genus coefficients are counted
//! with weakly monotone transposition walks, and the combinatorial side is exposed as
//! maps of unitary type with their surgeries.

pub mod coeff;
pub mod error;
pub mod expansion;
pub mod maps;
pub mod ncpoly;
pub mod oracle;
pub mod perm;
pub mod walks;
pub mod weingarten;

pub use coeff::Coeff;
pub use error::{Error, Result};
pub use perm::{Permutation, SignVector, Transposition};

/// Order-preserving map over a work list, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Send, U: Send>(items: Vec<T>, f: impl Fn(T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, U>(items: Vec<T>, f: impl Fn(T) -> U) -> Vec<U> {
    items.into_iter().map(f).collect()
}
