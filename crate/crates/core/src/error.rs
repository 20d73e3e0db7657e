use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point is {distance:e} away from the region boundary")]
    NotOnBoundary { distance: f64 },

    #[error("flow overflow at t = {t} (n = {n})")]
    FlowOverflow { t: f64, n: f64 },

    #[error("state left the upper half plane (y = {y:e})")]
    LeftHalfPlane { y: f64 },

    #[error("more than one boundary crossed inside a step of size {dt:e}")]
    MultipleBoundaries { dt: f64 },

    #[error("step halving exhausted at t = {t} after {retries} retries")]
    StepRetriesExhausted { t: f64, retries: usize },

    #[error("front has {0} points, at least 3 are required")]
    TooFewFrontPoints(usize),

    #[error("coincident neighbours around front point {0}")]
    DegenerateFront(usize),

    #[error("scene syntax error at line {line}, column {column}: {message}")]
    SceneSyntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("scene schema error at `{path}`: {message}")]
    SceneSchema { path: String, message: String },
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::SceneSchema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by the scene description rather than the numerics.
    pub fn is_scene_error(&self) -> bool {
        matches!(self, Error::SceneSyntax { .. } | Error::SceneSchema { .. })
    }
}
