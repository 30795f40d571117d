//! Derivations of group algebras `ℂG`, read through their characters on the
//! adjoint-action groupoid, and graded by an abelian quotient `G/N`.
//!
//! Coefficients are exact Gaussian rationals, so every identity checked here
//! is checked with equality.

pub mod algebra;
pub mod coeff;
pub mod derivation;
pub mod error;
pub mod grading;
pub mod group;
pub mod par;
pub mod sampling;
pub mod verify;

pub use algebra::AlgebraElement;
pub use coeff::Coefficient;
pub use derivation::{char_bracket_value, char_inner_formula, Derivation};
pub use error::{Error, Result};
pub use grading::{
    check_bracket_closure, decompose, decompose_with, inner_graded_decomposition, is_stem, project,
    support_classes, support_cosets, zder_grading_demo, GradedDecomposition, GradingSetup,
};
pub use group::{Arrow, CosetKey, Group, GroupElement, QuotientSpec};
pub use par::Execution;
