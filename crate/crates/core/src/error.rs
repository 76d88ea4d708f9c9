use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("Coxeter matrix is not symmetric at ({0}, {1})")]
    NonSymmetric(usize, usize),
    #[error("Coxeter matrix diagonal entry {0} is not 1")]
    BadDiagonal(usize),
    #[error("bad Coxeter matrix entry: {0}")]
    BadEntry(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("subset {0} is not spherical")]
    NotSpherical(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("matrices do not compose to zero at degree {0}")]
    NotAComplex(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("incidence numbers violate boundary-of-boundary = 0 at cell {0}")]
    BadIncidence(usize),
    #[error("malformed complex: {0}")]
    BadComplex(String),
    #[error("mirror `{0}` is not a subcomplex (cell {1} is missing a face)")]
    MirrorNotSubcomplex(String, usize),
    #[error("cell set is not a subcomplex (cell {0} is missing a face)")]
    NotASubcomplex(usize),
    #[error("{0} is not contained in {1}")]
    NotNested(String, String),
    #[error("outside trust radius: {0}")]
    OutOfTrustRadius(String),
    #[error("group is infinite")]
    NotFinite,
    #[error("mirror intersection over non-spherical subset {0} is nonempty")]
    NonSphericalMirrorIntersection(String),
    #[error("Coxeter matrix is not right-angled")]
    NotRightAngled,
    #[error("Coxeter matrix is not right-angled spherical")]
    NotRightAngledSpherical,
    #[error("bad thickness: {0}")]
    BadThickness(String),
    #[error("conjugate generators `{0}` and `{1}` have different parameters")]
    ConjugateMismatch(String, String),
    #[error("bad Hecke parameter: {0}")]
    BadParameter(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
