use thiserror::Error;

use gf_symexpr::ParseError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("forms live on different charts")]
    ChartMismatch,
    #[error("coframe is degenerate: {0}")]
    DegenerateCoframe(String),
    #[error("matrix is not in the structure group: entry ({row}, {col}) has residual {residual}")]
    NotInGroup {
        row: usize,
        col: usize,
        residual: String,
    },
    #[error("expected signature {expected}, found {found}")]
    Signature { expected: String, found: String },
    #[error("degree {0} is outside the generalized range [-2, n]")]
    DegreeOutOfRange(i32),
    #[error("input is not closed: component {component} has residual {residual}")]
    NotClosed { component: String, residual: String },
    #[error("transformation is not proper orthochronous: {0}")]
    NotOrthochronous(String),
    #[error("construction failed verification: {0}")]
    Verification(String),
    #[error("chart has {0} coordinates; supported range is 1..=8")]
    Dimension(usize),
    #[error("duplicate coordinate `{0}`")]
    DuplicateCoordinate(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Metric(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
