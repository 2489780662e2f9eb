use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop edge at vertex {0}")]
    Loop(usize),
    #[error("vertex set is empty")]
    EmptyVertexSet,
    #[error("graph is disconnected: no path between {0} and {1}")]
    Disconnected(usize, usize),
    #[error("graph is empty")]
    Empty,
    #[error("diameter {0} does not fit the one-byte distance store")]
    DiameterTooLarge(usize),
    #[error("isomorphism search refused: {order} vertices exceeds the cap of {cap}")]
    TooLargeForIsomorphism { order: usize, cap: usize },
    #[error("{index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("invalid graph6 character {0:#04x}")]
    InvalidChar(u8),
    #[error("graph6 data too short for {n} vertices")]
    Truncated { n: usize },
    #[error("graph6 data has {0} unexpected trailing bytes")]
    TrailingData(usize),
    #[error("graph6 padding bits are not zero")]
    NonZeroPadding,
    #[error("graph of {0} vertices is too large for graph6")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters for {kind}: {reason}")]
    InvalidParameters { kind: &'static str, reason: String },
    #[error("{kind} would have {vertices} vertices, above the ceiling of {ceiling}")]
    TooLarge {
        kind: &'static str,
        vertices: u128,
        ceiling: usize,
    },
    #[error("cannot parse family spec {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("found {found} distinct eigenvalues, expected {expected}")]
    MissingEigenvalues { found: usize, expected: usize },
    #[error("multiplicity of eigenvalue {theta} is {value}, not an integer")]
    NonIntegralMultiplicity { theta: f64, value: f64 },
    #[error("idempotent {index}: residual {residual:e} of E^2 - E exceeds {tolerance:e}")]
    NotIdempotent {
        index: usize,
        residual: f64,
        tolerance: f64,
    },
    #[error("idempotent {index}: entries at distance {distance} vary by {spread:e}")]
    NonConstantDistanceClass {
        index: usize,
        distance: usize,
        spread: f64,
    },
    #[error("idempotent index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QPolyError {
    #[error("idempotent 0 is trivial; the balanced set condition needs a nontrivial one")]
    TrivialIdempotent,
    #[error("idempotent index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("ambiguous rank decision for candidate {candidate} at degree {degree}: residual {residual:e}")]
    AmbiguousRank {
        candidate: usize,
        degree: usize,
        residual: f64,
    },
    #[error("Krein parameter q^{h}_{{{i},{j}}} = {value:e} is negative beyond tolerance")]
    NegativeKrein {
        h: usize,
        i: usize,
        j: usize,
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("subconstituent index {index} out of range 0..={diameter}")]
    IndexOutOfRange { index: usize, diameter: usize },
    #[error("dual sequence has no sign change: {0:?}")]
    NoSignChange(Vec<f64>),
    #[error("dual sequence changes sign more than once: {0:?}")]
    MultipleSignChanges(Vec<f64>),
    #[error("first dual eigenvalue must be positive, got {0}")]
    NonPositiveStart(f64),
    #[error("needs diameter at least {needed}, got {diameter}")]
    DiameterTooSmall { needed: usize, diameter: usize },
    #[error("odd graph census needs d >= 3, got {0}")]
    CensusDiameter(usize),
    #[error("odd graph census mismatch: {0}")]
    CensusMismatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Umbrella error for pipeline-level callers.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    QPoly(#[from] QPolyError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("graph is not distance-regular: {0}")]
    NotDistanceRegular(String),
    #[error("{0}")]
    Precondition(String),
}
