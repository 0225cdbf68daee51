use thiserror::Error;

/// Why a front position could not be located.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontError {
    /// Every cell is at or above the threshold.
    AllAbove,
    /// Every cell is below the threshold.
    AllBelow,
}

impl std::fmt::Display for FrontError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FrontError::AllAbove => write!(f, "field is entirely above the threshold"),
            FrontError::AllBelow => write!(f, "field is entirely below the threshold"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{quantity} must be nonnegative (got {value})")]
    Domain { quantity: &'static str, value: f64 },

    #[error("pressure {value} outside tabulated range [{lo}, {hi}]")]
    OutOfTable { value: f64, lo: f64, hi: f64 },

    #[error("invalid growth law: {0}")]
    GrowthLaw(String),

    #[error("invalid parameter {name}: {reason}")]
    Param { name: &'static str, reason: String },

    #[error("field length {got} does not match grid with {expected} cells")]
    FieldLength { expected: usize, got: usize },

    #[error("field value at cell {cell} is not finite")]
    NonFiniteValue { cell: usize },

    #[error("time step {dt:e} exceeds the stability limit {limit:e}")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("density {value} at cell {cell} (t = {t}) violates the bound [0, {bound}]")]
    BoundViolation {
        t: f64,
        cell: usize,
        value: f64,
        bound: f64,
    },

    #[error("non-finite density at cell {cell} (t = {t})")]
    NonFinite { t: f64, cell: usize },

    #[error("front undefined: {0}")]
    FrontUndefined(FrontError),

    #[error("speed fit is degenerate: {0}")]
    DegenerateFit(&'static str),

    #[error("no front formed: max density {max_density} never approached saturation")]
    NoFront { max_density: f64 },

    #[error("run with k = {k} failed: {source}")]
    Sweep { k: f64, source: Box<Error> },

    #[error("run with nu = {nu} failed: {source}")]
    Compare { nu: f64, source: Box<Error> },

    #[error("{path}: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used in CLI error payloads.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } | Error::OutOfTable { .. } => "domain",
            Error::GrowthLaw(_) | Error::Param { .. } => "invalid_parameter",
            Error::FieldLength { .. } | Error::NonFiniteValue { .. } => "invalid_field",
            Error::StepTooLarge { .. } => "unstable_step",
            Error::BoundViolation { .. } => "bound_violation",
            Error::NonFinite { .. } => "non_finite",
            Error::FrontUndefined(_) => "front_undefined",
            Error::DegenerateFit(_) => "degenerate_fit",
            Error::NoFront { .. } => "no_front",
            Error::Sweep { .. } | Error::Compare { .. } => "run_failed",
            Error::Config { .. } => "config",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
