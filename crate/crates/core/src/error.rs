use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("triple {0:?} does not have three distinct vertices")]
    DegenerateTriple([usize; 3]),
    #[error("pair ({0}, {0}) is not a pair of distinct vertices")]
    SamePair(usize),
    #[error("window {0} of the sequence is not an edge of the host")]
    NotAnEdge(usize),
    #[error("window {0} repeats an earlier edge")]
    RepeatedEdge(usize),
    #[error("vertex at position {0} repeats an earlier vertex")]
    RepeatedVertex(usize),
    #[error("sequence has {len} vertices, at least {min} are required")]
    TooShort { len: usize, min: usize },
    #[error("closed walks have no ends")]
    ClosedWalk,
    #[error("the tour and the cycle share no consecutive pair")]
    NoSharedConsecutivePair,
    #[error("the trails have no opposite ends")]
    NoOppositeEnds,
    #[error("the walks share an edge")]
    EdgeOverlap,
    #[error("no extension available at step {0}")]
    NoExtensionAvailable(usize),
    #[error("codegree budget exceeded while extending path {0}")]
    CodegreeBudgetExceeded(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("gadget construction failed: {0}")]
    GadgetConstructionFailed(String),
    #[error("partition has a mixed edge {0:?}")]
    PartitionHasMixedEdge([usize; 3]),
    #[error("certificate inapplicable: {0}")]
    CertificateInapplicable(String),
    #[error("not a decomposition: {0}")]
    NotADecomposition(String),
    #[error("iteration budget of {0} exceeded")]
    IterationBudgetExceeded(usize),
    #[error("enumeration limit of {0} exceeded")]
    LimitExceeded(usize),
    #[error("vortex conditions failed at level {0} after all retries")]
    VortexFailed(usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
