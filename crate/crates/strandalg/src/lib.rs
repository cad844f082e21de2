//! Quiver path algebras over truncated regular local rings.
//!
//! Given a finite quiver and a set of zero-relations forming a special pair,
//! this crate enumerates the primitive cycles, computes the nerve partition
//! of the primitive vertices, assembles the ideal of the string-algebra
//! construction over a truncated coefficient model, reduces elements to
//! normal form in the quotient, and certifies the string-algebra axioms at
//! desk scale. A small text format (`.qz` files) describes inputs; the
//! `strandalg` binary exposes the pipeline as subcommands.

pub mod algebra;
pub mod cli;
pub mod coeff;
pub mod dsl;
pub mod enumerate;
pub mod primitives;
pub mod quiver;
pub mod relations;
pub mod report;
pub mod verifier;

#[cfg(test)]
pub(crate) mod fixtures;
