//! Exact symbolic engine for n-ary Nambu brackets, odd (generalized) Poisson
//! superalgebras and the good-pair correspondence between them.
//!
//! Everything is computed over the rationals in the supercommutative algebra
//! `O(m, n) = Λ(n)[[x_1, …, x_m]]`, with formal power series modelled by
//! truncation at a fixed total x-degree.  Identity checks are exact: a check
//! passes only when the residual canonicalizes to zero.
//!
//! Module map:
//! - [`algebra`]: scalars, signatures, monomials and [`SuperElement`] arithmetic.
//! - [`calculus`]: even/odd partial derivatives, the Euler operator, formal integrals.
//! - [`brackets`]: HO (Buttin), KO, Poisson, Lagrange, Nambu and Dzhumadildaev brackets.
//! - [`identities`]: residual-based verifiers with counterexample witnesses.
//! - [`gauge`]: gauge twists and the symplectic change of variables.
//! - [`universal`]: supersymmetric multilinear maps, box and concatenation products.
//! - [`good_pairs`]: graded components, the G1–G3 conditions and reconstruction.
//! - [`parse`]: expression parser for the textual element format.

pub mod algebra;
pub mod brackets;
pub mod calculus;
pub mod error;
pub mod gauge;
pub mod good_pairs;
pub mod identities;
mod linalg;
pub mod parse;
pub mod sample;
pub mod universal;

pub use algebra::{Monomial, Parity, ParityClass, Scalar, Signature, SuperElement};
pub use brackets::{BracketKind, NaryBracket, OddBracket, Pairing};
pub use error::{Error, Result};
pub use identities::{IdentityReport, Witness};
