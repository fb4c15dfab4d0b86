//! Graded binary relational systems.
//!
//! A system is a finite set with a nested family of symmetric relations
//! `R_n`, stored compactly as a grade matrix `μ`. The crate translates
//! between the relational and the dyadic-semimetric view `δ = 2^-μ`, checks
//! the composition axioms, computes admissible hulls, radii and structure
//! properties, analyses self-maps, and searches for counterexamples to the
//! fixed-point claims built on top of them.

#![allow(clippy::needless_range_loop)]

pub mod axioms;
pub mod bridge;
pub mod cli;
pub mod dyadic;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod format;
pub mod grade;
pub mod harness;
pub mod hull;
pub mod pointset;
pub mod relation;
pub mod structure;
pub mod system;

pub use axioms::{check_axiom, AxiomId, AxiomReport, Witness};
pub use bridge::{classify, delta, mu, reconstruct_level, ClassLabel, ClassificationReport};
pub use dyadic::DyadicValue;
pub use dynamics::SelfMap;
pub use error::{Diagnostic, DiagnosticCode, Error, Result};
pub use exec::Execution;
pub use grade::{Grade, GradeMatrix, Window};
pub use hull::{hull, AdmissibleSet, BallRef, HullMode};
pub use pointset::PointSet;
pub use relation::Relation;
pub use system::{expand_level, LevelList, RelationalSystem};
