use thiserror::Error;

use crate::geometry::Point;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("radius must be finite and at least {min:e}, got {radius}")]
    InvalidRadius { radius: f64, min: f64 },

    #[error("invalid component: {0}")]
    InvalidComponent(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid radius schedule: {0}")]
    InvalidSchedule(String),

    #[error("point {point} is not in the support (zero mass at radius {radius:e})")]
    NotInSupport { point: Point, radius: f64 },

    #[error("search grid is empty")]
    EmptyGrid,

    #[error("translation set is empty")]
    EmptySet,

    #[error("grid would have {points} points, limit is {limit}")]
    GridTooLarge { points: u128, limit: u128 },

    #[error("trace has {len} rows but the tail window needs {window}")]
    TraceTooShort { len: usize, window: usize },

    #[error("measure has zero total mass")]
    EmptyMeasure,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
