use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group mismatch: {left} and {right} belong to different groups")]
    GroupMismatch { left: String, right: String },

    #[error("arrows are not composable: source {source_of_left} of the left arrow differs from target {target_of_right} of the right arrow")]
    NotComposable {
        source_of_left: String,
        target_of_right: String,
    },

    #[error("element {0} is not central")]
    NotCentral(String),

    #[error("homomorphism expects {expected} values on the abelianized basis, got {got}")]
    TauArity { expected: usize, got: usize },

    #[error("generator table does not define a derivation: {0}")]
    InvalidTable(String),

    #[error("unknown group {0:?}")]
    UnknownGroup(String),

    #[error("invalid element for {group}: {reason}")]
    InvalidElement { group: String, reason: String },

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("quotient not abelian: conjugacy class of {element} = {{{class}}} is not contained in the coset {element}N = {{{coset}}}; escaping conjugates: {escaping}")]
    NonAbelianQuotient {
        element: String,
        class: String,
        coset: String,
        escaping: String,
    },

    #[error("trivial grading: G/N has a single coset ({0})")]
    TrivialGrading(String),

    #[error("invalid specification: {0}")]
    Spec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
