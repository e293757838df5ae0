use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("initial vector has norm {norm:e}, at or below tolerance {tol:e}")]
    ZeroInitialVector { norm: f64, tol: f64 },

    #[error("propagator failure: {0}")]
    PropagatorFailure(String),

    #[error("Gram matrix is singular at order {order} (determinant {det:e})")]
    SingularGram { order: usize, det: f64 },

    #[error("index {requested} out of range (available {available})")]
    IndexOutOfRange { requested: usize, available: usize },

    #[error("phase-space geometries differ")]
    GeometryMismatch,

    #[error("quantum systems differ: {0}")]
    SystemMismatch(String),

    #[error("grid spacing {spacing:e} exceeds the resolution limit {limit:e}")]
    Resolution { spacing: f64, limit: f64 },

    #[error("number-basis truncation at D={dimension} leaves tail population {tail:e}")]
    Truncation { dimension: usize, tail: f64 },

    #[error("map `{0}` exposes no kick derivatives")]
    MissingKickData(String),

    #[error("covariance determinant identity violated (relative error {relative_error:e})")]
    NumericalSingularity { relative_error: f64 },

    #[error("moment fit lost {lost_mass:e} of the mass outside the grid")]
    FitFailure { lost_mass: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed field dump: {0}")]
    FieldFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
