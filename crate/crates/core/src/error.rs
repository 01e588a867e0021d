use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("subsystem dimensions {first}x{second} do not factor a {dim}-dimensional space")]
    InvalidSplit { first: usize, second: usize, dim: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("decoherence factor of modulus {modulus} exceeds 1, the map is not a contraction")]
    NotContraction { modulus: f64 },

    #[error("control time {tau_c} lies outside the closed-form validity window [{lower}, {upper}]")]
    OutsideValidityWindow { tau_c: f64, lower: f64, upper: f64 },

    #[error("no Markovian/non-Markovian transition: {0}")]
    NoTransition(String),

    #[error("adaptive quadrature did not converge (achieved error estimate {estimate:e})")]
    QuadratureDiverged { estimate: f64 },

    #[error("intermediate map is singular at t = {t}: decoherence function vanishes")]
    SingularIntermediateMap { t: f64 },

    #[error("Bell-diagonal parameters give a negative eigenvalue {eigenvalue} ({combination})")]
    NotPositive { eigenvalue: f64, combination: &'static str },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}
