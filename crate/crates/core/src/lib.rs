//! Finite structures over `[n]`, first-order and second-order model checking,
//! first-order projections, normal forms, a catalog of decision problems and
//! bounded `(n,k)`-uniformity checking.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classify;
pub mod error;
pub mod eval;
pub mod fop;
pub mod formula;
pub mod harness;
pub mod problems;
pub mod structure;
pub mod uniformity;
pub mod vocab;

pub use error::{Error, Result};
pub use eval::{eval_fo, eval_so, holds, is_consistent, Assignment, DEFAULT_BUDGET};
pub use fop::{pullback, FoQuery, Fop};
pub use formula::{Atom, Formula, Literal, NumericRel, Quantifier, Term};
pub use problems::{catalog, problem, DecisionProblem, Monotonicity, Problem};
pub use structure::{enumerate_structures, Limits, Structure, StructureSpace};
pub use vocab::Vocabulary;
