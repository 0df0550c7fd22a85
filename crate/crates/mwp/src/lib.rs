//! Static analyzer certifying polynomial data-size bounds for a C99
//! subset via the mwp flow calculus.
//!
//! The analysis attaches a matrix of flow coefficients between the
//! variables of each function. Entries are polynomials over derivation
//! choices: every binary-operation assignment opens a three-way choice
//! of typing rules, and a flow exists under some choices but not
//! others. A function is certified when at least one total choice
//! assignment avoids the ∞ coefficient everywhere; the tool reports
//! which choices pass and which variables exceed every bound.
//!
//! Modules follow the pipeline: [`frontend`] parses the C subset,
//! [`analysis`] applies the calculus over [`semiring`] /
//! [`monomial`] / [`polynomial`] / [`matrix`] / [`relation`] values,
//! [`delta_graph`] computes passing choices without enumerating the
//! full choice space, and [`report`] / [`cli`] own the user surface.

pub mod analysis;
pub mod cli;
pub mod delta_graph;
pub mod frontend;
pub mod matrix;
pub mod monomial;
pub mod polynomial;
pub mod relation;
pub mod report;
pub mod semiring;

pub use analysis::{analyze, AnalysisResult};
pub use frontend::parse;
