use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("constraint `{name}` violated (residual {residual:e})")]
    Constraint { name: &'static str, residual: f64 },

    #[error("CFL condition violated: dt = {dt} exceeds {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("field value {value:e} at x = {x} fell below the positivity floor {floor:e} at t = {time}")]
    PositivityFloor { x: f64, time: f64, value: f64, floor: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("quadrature did not converge after {levels} levels (last relative change {change:e})")]
    Quadrature { levels: usize, change: f64 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to rejected
    /// inputs or violated parameter constraints.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singularity(_) | Error::PositivityFloor { .. } | Error::NonFinite(_) | Error::Quadrature { .. }
        )
    }
}
