use thiserror::Error;

/// Reason codes for a failed goodness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoodnessFailure {
    /// A disk has no singleton piece, so its pants boundary has no peripheral cap.
    NoPeripheralCap { on: u8 },
    /// The six boundary spheres are not pairwise distinct.
    CoincidentSpheres,
}

impl std::fmt::Display for GoodnessFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GoodnessFailure::NoPeripheralCap { on } => {
                write!(f, "disk on boundary {on} has no singleton piece")
            }
            GoodnessFailure::CoincidentSpheres => write!(f, "boundary spheres coincide"),
        }
    }
}

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("ground size mismatch: {0} vs {1}")]
    GroundMismatch(u8, u8),
    #[error("the spheres do not intersect")]
    NotIntersecting,
    #[error("no essential spheres exist for s={0}; need s >= 4")]
    NoEssentialSpheres(u8),
    #[error("s={0} is below the regime covered by the Whitney theorem; need s >= 5")]
    BelowWhitneyRegime(u8),
    #[error("reconstruction from size-2 spheres needs a split of size >= 3")]
    SizeTwoInput,
    #[error("invalid disk: {0}")]
    InvalidDisk(String),
    #[error("invalid sphere class: {0}")]
    InvalidSphere(String),
    #[error("not a good sphere: {0}")]
    NotGood(GoodnessFailure),
    #[error("goodness data are attached to different boundary labels")]
    LabelMismatch,
    #[error("manifold data mismatch: {0}")]
    ManifoldMismatch(String),
    #[error("not a pants decomposition: expected {expected} spheres, got {got}")]
    NotMaximal { expected: usize, got: usize },
    #[error("spheres are not pairwise disjoint: {0} meets {1}")]
    NotDisjoint(String, String),
    #[error("configuration leaves the restricted sphere model: {0}")]
    OutOfModel(String),
    #[error("sphere is not a member of the pants decomposition")]
    NotMember,
    #[error("sphere is not a split sphere for the given pants decomposition")]
    NotSplitSphere,
    #[error("pants decomposition is not split by the vertex set: {0}")]
    NotSplit(String),
    #[error("good pairs cannot be placed for n={0}; need n >= 3")]
    CannotPlaceGoodPairs(u8),
    #[error("no detectability certificate found: {0}")]
    NotDetectable(String),
    #[error("graph too large: {0} vertices exceeds bound {1}")]
    TooLarge(usize, usize),
    #[error("map is not defined on every vertex of the domain")]
    DomainError,
    #[error("requested vertices lie outside the generated ball")]
    BallTooSmall,
    #[error("input is handled by a preliminary reduction: {0}")]
    ReducedCaseNote(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
