//! Exact-arithmetic toolkit for invariant-operator patterns on Grassmannian
//! flag geometries.
//!
//! The library computes, for the split real form `sl(n, R)` with the
//! |1|-graded parabolic determined by one crossed node `p`:
//!
//! * weight orbits under the affine Weyl action and the Hasse-style operator
//!   patterns they form, with operator orders read off the grading element
//!   ([`weights`], [`weyl`]);
//! * symbolic normal forms in holonomic and semiholonomic induced modules,
//!   the action of the algebra on them, the symmetrization projection and the
//!   order-two splitting ([`verma`]);
//! * singular vectors, critical density weights, and the covering test that
//!   separates operators extending to curved geometry from the obstructed
//!   ones ([`singular`]);
//! * weight-level screening for the translation principle ([`translate`]).
//!
//! Every coefficient is an arbitrary-precision rational ([`Rat`]); there is
//! no floating point anywhere, and all advertised outputs are
//! byte-deterministic.

pub mod liealg;
pub mod linalg;
pub mod selftest;
pub mod singular;
pub mod translate;
pub mod verma;
pub mod weights;
pub mod weyl;

mod error;

pub use error::{Error, Result};

/// Scalar used throughout the library: arbitrary-precision rationals.
pub type Rat = num::BigRational;
/// Integer companion type of [`Rat`].
pub type Int = num::BigInt;
/// Dense exact matrix over [`Rat`].
pub type Matrix = linalg::Mat<Rat>;

/// Shorthand for building a rational from an integer pair.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(Int::from(numer), Int::from(denom))
}

/// Shorthand for an integral rational.
pub fn rint(value: i64) -> Rat {
    Rat::from_integer(Int::from(value))
}
