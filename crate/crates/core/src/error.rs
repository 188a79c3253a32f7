use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({x:.4}, {y:.4}) is outside the map bounds")]
    OutOfBounds { x: f64, y: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("scene generation failed: {0}")]
    Generation(String),

    #[error("signed distance field build failed: {0}")]
    Build(String),

    #[error("malformed container: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
