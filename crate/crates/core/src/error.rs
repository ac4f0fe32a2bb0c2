use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("no points")]
    NoPoints,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("hyperplane normal is zero")]
    ZeroNormal,
    #[error("degenerate flat")]
    DegenerateFlat,
    #[error("not full-dimensional: affine dimension {dim} in ambient dimension {ambient}")]
    NotFullDimensional { dim: usize, ambient: usize },
    #[error("not polytopal incidence: {0}")]
    NotPolytopal(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("centroid is not interior")]
    CentroidNotInterior,
    #[error("perturbation failed after {attempts} attempts")]
    PerturbationFailed { attempts: u32 },
    #[error("search budget exceeded: {needed} subsets needed, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
