use thiserror::Error;

#[derive(Debug, Error)]
pub enum ForgeError {
    #[error("input error: {0}")]
    Input(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    /// An iterative method stopped before meeting its tolerance. `estimate`
    /// carries the last iterate's values so callers can still inspect them.
    #[error("{what} did not converge after {iterations} iterations")]
    NotConverged {
        what: &'static str,
        iterations: usize,
        estimate: Vec<f64>,
    },
    #[error("sampling error: {0}")]
    Sampling(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<ForgeError>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ForgeError {
    pub fn at_stage(self, stage: impl Into<String>) -> Self {
        ForgeError::Stage {
            stage: stage.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, ForgeError>;
