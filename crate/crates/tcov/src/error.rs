use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("involution is not an involution at cell {0}")]
    InvalidInvolution(usize),
    #[error("root map is not an idempotent retraction at cell {0}")]
    InvalidRoot(usize),
    #[error("fixed points of the involution differ from the image of the root at cell {0}")]
    FixedPointMismatch(usize),
    #[error("vertex {vertex} has negative genus {genus}")]
    NegativeGenus { vertex: usize, genus: i64 },
    #[error("malformed graph description: {0}")]
    MalformedGraph(String),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("no edge with index {0}")]
    UnknownEdge(usize),
    #[error("cell {0} is not a vertex")]
    UnknownVertex(usize),

    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("p = {p} is below the supported range (need p ≥ {min})")]
    PrimeTooSmall { p: u32, min: u32 },
    #[error("covers have different primes ({0} vs {1})")]
    PrimeMismatch(u32, u32),
    #[error("malformed cover description: {0}")]
    MalformedCover(String),
    #[error("vertex {0} is dilated and cannot be switched")]
    DilatedVertexSwitch(usize),
    #[error("walk passes through dilated cell {0}")]
    WalkThroughDilatedCell(usize),
    #[error("half-edges do not form a closed walk")]
    InvalidWalk,
    #[error("cover is invalid: {0}")]
    InvalidCover(String),
    #[error("cover has dilated cells")]
    DilatedCover,

    #[error("resource budget exceeded: {0}")]
    ResourceBudgetExceeded(String),
    #[error("face of cell {cell} in dimension {dim} is missing from the census")]
    MissingFace { dim: usize, cell: usize },
    #[error("map is not an injection into [0, {0}]")]
    NotInjective(usize),
    #[error("no cell {index} in dimension {dim}")]
    UnknownCell { dim: usize, index: usize },
    #[error("Euler characteristics disagree: chains give {chains}, homology gives {homology}")]
    InconsistentEuler { chains: i64, homology: i64 },

    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("residues are not pairwise distinct")]
    NotDistinct,
    #[error("cell could not be classified: {0}")]
    UnclassifiableCell(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
