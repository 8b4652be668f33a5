//! Exact-arithmetic toolkit for communication-complexity lower bounds.
//!
//! The crate follows one pipeline: Boolean functions ([`boolfn`]) turn into
//! exact multilinear polynomials ([`polynomial`]) and communication matrices
//! ([`commc`], backed by [`linalg`]); monomial counts, ranks, covers,
//! sensitivity ([`sensitivity`]) and LP-certified approximation quantities
//! ([`approx`]) then assemble into bound reports and verification suites
//! ([`report`]).
//!
//! All core quantities are computed in exact rational arithmetic; floating
//! point only appears in display values and in the alternating-least-squares
//! search, whose witnesses are re-certified exactly.

pub mod approx;
pub mod boolfn;
pub mod commc;
pub mod error;
pub mod linalg;
pub mod polynomial;
pub mod sensitivity;
pub mod util;

pub use approx::{ApproxPolynomial, ApproxRankWitness};
pub use boolfn::{named_family, parse_funcspec, BooleanFunction, Composition, Family, SymmetricProfile};
pub use commc::{CommProblem, DExactOutcome, LovaszSaksProtocol, RectangleCover};
pub use error::{Error, Result};
pub use linalg::{ExactMatrix, GershgorinOutcome, RankFactorization};
pub use polynomial::{MultilinearPoly, UnivariatePoly};
pub use sensitivity::{Hypergraph, SearchMode, ZeroBlockWitness};
pub use util::Rat;
