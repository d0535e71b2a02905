//! Finite State Processes toolkit.
//!
//! The pipeline is `syntax::parse` → `lts::compile` / `lts::build_target` →
//! `analysis` checks. Every stage is a pure function over immutable values.

pub mod analysis;
pub mod label;
pub mod lts;
pub mod syntax;

pub use label::{ActionLabel, LabelPart};
pub use lts::{Lts, StateId};
pub use syntax::{parse, SpecAst};
