//! Integral points on the Pascal's-triangle curve C(y,2) = C(x,5).
//!
//! The crate bundles exact diophantine checks, the genus-2 curve
//! `Y^2 = X(X-15)(X-30)(X-45)(X-60) + 11390625` with its Jacobian over prime
//! fields in Mumford representation, and a Mordell-Weil coset sieve over
//! explicit residue sets.

pub mod arith;
pub mod cli;
pub mod curve;
pub mod diophantine;
pub mod group;
pub mod jacobian;
pub mod sieve;
