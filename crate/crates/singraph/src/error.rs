use thiserror::Error;

/// Errors produced by the graph and cycle operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("cycle does not live on this graph")]
    MismatchedGraph,
    #[error("graph is not negative definite")]
    NotNegativeDefinite,
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not rational")]
    NotRational,
    #[error("graph is not minimal (vertex {id} has weight {weight} > -2)")]
    NotMinimal { id: String, weight: i64 },
    #[error("operation requires a non-zero cycle")]
    EmptyCycle,
    #[error("vertex {id} has positive genus; only genus-0 configurations are supported")]
    PositiveGenus { id: String },
    #[error("no vertex named {0}")]
    NoSuchVertex(String),
    #[error("vertex {id} has weight {weight}, expected -1")]
    WeightNotMinusOne { id: String, weight: i64 },
    #[error("vertices do not form a contractible chain")]
    NotAChain,
    #[error("enumeration box has {candidates} candidates, above the guard of {bound}")]
    BoxTooLarge { candidates: u128, bound: u128 },
    #[error("blow-up recursion exceeded depth {0}")]
    DepthExceeded(u32),
    #[error("fundamental cycle is not reduced; the arrow recipe does not apply")]
    NonReducedCycle,
    #[error("configuration does not blow down to a smooth germ ({0} vertices left)")]
    NotBlowdownable(usize),
    #[error("invalid root collection: {0}")]
    InvalidCollection(String),
    #[error("graph matches no confining template")]
    NoTable2Witness,
    #[error("decoration {l} below branch multiplicity {m}")]
    DecorationTooSmall { l: u64, m: u64 },
    #[error("unsupported branch type: {0}")]
    UnsupportedBranch(String),
    #[error("arrow budget exhausted without a verdict")]
    BudgetExhausted,
    #[error("recipe parameter out of range: {0}")]
    BadParameter(String),
    #[error("isomorphism test capped at {cap} vertices, got {got}")]
    IsoTooLarge { cap: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
