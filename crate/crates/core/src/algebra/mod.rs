//! Exact arithmetic: rings, sparse polynomials, rational functions, matrices
//! and exterior powers.

pub mod combinat;
pub mod exterior;
pub mod matrix;
pub mod poly;
pub mod ratfn;
pub mod ring;

pub use matrix::{Matrix, Subspace};
pub use poly::{Layout, Mono, MultiPoly, PolyRing};
pub use ratfn::RationalFn;
pub use ring::{Dual, ExtElem, ExtField, FromRational, PrimeField, Rationals, Ring, Sample};
