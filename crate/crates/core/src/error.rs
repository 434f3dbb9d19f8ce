use std::fmt;

use thiserror::Error;

/// Quandle axiom that a table failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// `x ▷ x = x`
    Q1,
    /// every row `y ↦ x ▷ y` is a bijection
    Q2,
    /// left self-distributivity
    Q3,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Q1 => f.write_str("Q1"),
            Axiom::Q2 => f.write_str("Q2"),
            Axiom::Q3 => f.write_str("Q3"),
        }
    }
}

/// Broad classification used by the command line to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input is mathematically invalid or the requested computation has no answer.
    Domain,
    /// A state, group or lattice size limit was hit.
    Resource,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("axiom {axiom} violated at {witness:?}")]
    AxiomViolation { axiom: Axiom, witness: Vec<usize> },

    #[error("malformed operation table: {0}")]
    MalformedTable(String),

    #[error("not a group: {axiom} fails at {witness:?}")]
    NotAGroup {
        axiom: &'static str,
        witness: Vec<usize>,
    },

    #[error("map is not a quandle automorphism")]
    NotAutomorphism,

    #[error("twist condition fails: row of psi({x}) differs from row of {x}")]
    TwistConditionViolated { x: usize },

    #[error("group exceeds the enumeration cap of {0} elements")]
    GroupTooLarge(u64),

    #[error("operation requires a non-empty quandle")]
    EmptyQuandle,

    #[error("quandle of size {size} exceeds the limit of {limit} for this operation")]
    TooLarge { size: usize, limit: usize },

    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: i64, strands: usize },

    #[error("state space of {states} tuples exceeds the budget of {budget}")]
    BudgetExceeded { states: u128, budget: u64 },

    #[error("state space of {states} tuples exceeds the limit of {limit}")]
    StateSpaceTooLarge { states: u128, limit: u64 },

    #[error("series of length {len} is too short, at least {needed} values required")]
    InsufficientData { len: usize, needed: usize },

    #[error("detected degree {detected} but expected {expected}")]
    DegreeMismatch { detected: i64, expected: i64 },

    #[error("no stable polynomial found within the available series")]
    NoStablePolynomial,

    #[error("generating function does not reproduce the series at degree {0}")]
    InconsistentFit(usize),

    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::GroupTooLarge(_)
            | Error::TooLarge { .. }
            | Error::BudgetExceeded { .. }
            | Error::StateSpaceTooLarge { .. } => ErrorClass::Resource,
            _ => ErrorClass::Domain,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
