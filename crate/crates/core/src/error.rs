use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element of length {length} exceeds the working horizon {limit}")]
    HorizonExceeded { length: usize, limit: usize },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(char),
    #[error("parabolic subgroup generated by {0} is infinite")]
    InfiniteParabolic(String),
    #[error("invalid Coxeter system: {0}")]
    InvalidSystem(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("bar-consistency failure while solving p_{{{y},{w}}}")]
    InconsistentBar { y: String, w: String },
    #[error("system has a finite parabolic subgroup of rank 3")]
    NotDimensionTwo,
    #[error("{0} is not a distinguished element")]
    NotInD(String),
    #[error("{w} has {count} decompositions b.d.y")]
    NonUniqueDecomposition { w: String, count: usize },
    #[error("operation needs a hyperbolic system with m_rt = 2 and 1/m_rs + 1/m_st < 1/2: {0}")]
    NotApplicableSystem(String),
    #[error("a'({d1}) = {a1} differs from a'({d2}) = {a2}")]
    UnequalAValues { d1: String, a1: u64, d2: String, a2: u64 },
    #[error("unsupported lemma {0}")]
    UnsupportedLemma(String),
    #[error("no pool element satisfies the constraints of {0}")]
    ConstraintUnsatisfiable(String),
    #[error("no a-value source available for this system")]
    UnsupportedWithoutPrediction,
    #[error("{0} is undefined in this chamber")]
    UndefinedInChamber(String),
    #[error("cache fingerprint mismatch: expected {expected}, found {found}")]
    FingerprintMismatch { expected: String, found: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
