use thiserror::Error;

/// Errors raised across the contour pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("could not parse exponent `{0}`")]
    ParseExponent(String),

    #[error("nullspace of the lifted matrix is trivial; no reduced coordinates exist")]
    DegenerateNullspace,

    #[error("parameter lies on hyperplane {index} of the arrangement")]
    HyperplaneHit { index: usize },

    #[error("not a circuit: nullspace dimension is {dim}, expected 1")]
    NotACircuit { dim: usize },

    #[error("circuit is pyramidal: generator entry {index} vanishes")]
    PyramidalCircuit { index: usize },

    #[error("operation needs {expected} reduced coordinates, basis has {found}")]
    WrongReducedDimension { expected: usize, found: usize },

    #[error("cusp derivative polynomial vanishes identically")]
    DegenerateDerivative,

    #[error("polynomial interpolation failed: {0}")]
    InterpolationFailure(String),

    #[error("face lattice supports ambient dimension at most 3, got {0}")]
    UnsupportedDimension(usize),

    #[error("facet relation does not lift to the reduced space (residual {residual:e})")]
    InconsistentLift { residual: f64 },

    #[error("chamber count changed from {inner} to {outer} when doubling the window")]
    WindowTooSmall { inner: usize, outer: usize },

    #[error("planar arrangement is inconsistent: {0}")]
    ArrangementInconsistent(String),

    #[error("zero-set signature changed under grid refinement ({coarse:?} vs {fine:?})")]
    ResolutionWarning {
        coarse: (usize, usize),
        fine: (usize, usize),
    },

    #[error("chamber {chamber} is not constant: samples {first} and {second} differ")]
    ConstancyViolation {
        chamber: usize,
        first: usize,
        second: usize,
    },

    #[error("invalid sign class `{0}`")]
    InvalidSignClass(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
