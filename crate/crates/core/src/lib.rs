//! Weak double-pushout graph rewriting with parallel coherent transformations.
//!
//! Objects are finite labeled directed multigraphs ([`graph::Graph`]); rules are
//! weak spans `L ← K ← I → R` with injective legs ([`rewriting::WeakSpan`]).
//! Several direct transformations of one host can be applied simultaneously as
//! a parallel coherent transformation ([`rewriting::build_pct`]), and the
//! [`parallelism`] module relates such parallel steps to sequential ones and
//! extracts derived rules from them.

pub mod category;
#[cfg(feature = "cli")]
pub mod cli;
pub mod commands;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod parallelism;
pub mod rewriting;

mod union_find;

pub use error::{Error, GluingFailure, Result};
pub use graph::{Graph, GraphRef, Morphism};
