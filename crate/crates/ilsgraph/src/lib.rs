//! Connectivity analysis for solution graphs of integer linear systems.
//!
//! A system `Ax >= b` over `x in {0, ..., d}^n` induces a graph on its
//! feasible points with edges between points at Hamming distance one. This
//! crate decides whether a coefficient matrix keeps that graph connected for
//! every right-hand side, and produces checkable certificates either way:
//! elimination orderings and sign-cycle forbidden patterns on the structural
//! side, explicit disconnecting right-hand sides with separated point pairs
//! on the negative side, and a complete right-hand-side scan as the exact
//! decision procedure at desk scale.

pub mod campaign;
pub mod canonical;
pub mod elimination;
pub mod error;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod pattern;
pub mod rational;
pub mod witness;

pub use error::{Error, Result};
pub use matrix::{flip_columns, CoeffMatrix, DomainBound, Point, RhsVector, SignPattern};
pub use rational::Rational;
