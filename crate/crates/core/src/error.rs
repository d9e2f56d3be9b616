use thiserror::Error;

/// Errors raised by the certification library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M[i][j] - conj(M[j][i])| = {violation:e}")]
    NonHermitian { violation: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the supported maximum {max}")]
    TooLarge { dim: usize, max: usize },

    #[error("invalid matrix shape: {0}")]
    Shape(String),

    #[error("not a density operator: {0}")]
    InvalidState(String),

    #[error("state vector is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("expectation value has imaginary part {imag:e}")]
    NonRealExpectation { imag: f64 },

    #[error("invalid spectral range [{lo}, {hi}]: {reason}")]
    InvalidRange { lo: f64, hi: f64, reason: String },

    #[error("invalid Pauli sum: {0}")]
    InvalidPauli(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{name} = {value} is outside its admissible range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("mean <A> = {first} must be strictly positive for the Gramian expectation bound")]
    NonPositiveMean { first: f64 },

    #[error("infidelity eps = {eps} is too close to 1; the eigenvalue interval diverges")]
    EpsilonIsOne { eps: f64 },

    #[error("method {0} is not supported here")]
    UnsupportedMethod(&'static str),

    #[error("{groups} measurement groups but {stats} moment records")]
    GroupMismatch { groups: usize, stats: usize },

    #[error("group {index}: {source}")]
    InGroup {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("ground state is degenerate and the approximate state is mixed; fidelity bounds do not hold")]
    DegenerateMixed,

    #[error("missing spectral information: {0}")]
    MissingSpectrum(&'static str),

    #[error("a spectral-gap lower bound is required")]
    MissingGap,

    #[error("precondition not established: {0}")]
    ConditionNotEstablished(&'static str),

    #[error("bound is inapplicable: {0}")]
    Inapplicable(&'static str),

    #[error("Helstrom construction failed: {0}")]
    BisectionFailure(String),

    #[error("state is not pure (purity {purity})")]
    NotPure { purity: f64 },

    #[error("a perturbation needs Hilbert-space dimension >= 2")]
    DimensionOne,

    #[error("circuit template has no parameterized gates")]
    NoParameters,

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn in_group(index: usize, source: Error) -> Self {
        Error::InGroup {
            index,
            source: Box::new(source),
        }
    }
}
