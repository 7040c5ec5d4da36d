use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("denominator has a root outside the supplied pole set")]
    PoleOutsideSet,
    #[error("matrices {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("parameter out of range: {0}")]
    BadRange(String),
    #[error("{0:?} is not an ({1}|{2})-hook partition")]
    NotHook(Vec<u32>, usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("leading symbol is not invertible")]
    NonInvertibleSymbol,
    #[error("constant u-term is not a unit")]
    NotUnitModU,
    #[error("inversion failed at quasiminor {stage}: {source}")]
    QuasiminorStage {
        stage: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("one-sided inverse is not two-sided within the window")]
    InverseMismatch,
    #[error("subspace is not invariant (witness: generator {generator}, basis vector {vector})")]
    NotInvariant { generator: usize, vector: usize },
    #[error("spectrum is not simple")]
    NotSimpleSpectrum,
    #[error("spectrum is not rational; exact eigenvectors unavailable")]
    IrrationalSpectrum,
    #[error("singular vector of the requested weight not found")]
    SingularVectorNotFound,
    #[error("weight space is empty; check would be vacuous")]
    EmptyWeightSpace,
    #[error("Shapovalov form requires n = 0")]
    NotClassical,
    #[error("Bethe roots collide with each other or with the points z")]
    RootCollision,
    #[error("Newton iteration did not converge")]
    NoConvergence,
    #[error("Bethe ansatz equations are not satisfied")]
    BetheNotSatisfied,
    #[error("operator is not Fuchsian at {0}")]
    NotFuchsianAtPoint(String),
    #[error("indicial polynomial has non-rational roots")]
    NonRationalExponents,
    #[error("spectral multisets differ: {0}")]
    MultisetMismatch(String),
    #[error("configuration error at {location}: {message}")]
    ConfigError { location: String, message: String },
    #[error("unknown demo {0:?}")]
    UnknownDemo(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn config(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ConfigError {
            location: location.into(),
            message: message.into(),
        }
    }
}
