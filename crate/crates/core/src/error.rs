use thiserror::Error;

/// Errors raised by the simulators, the analytic evaluators and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph with {n} vertices exceeds the explicit-graph cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("self-loop query on vertex {0}")]
    SelfLoop(usize),

    #[error("unknown vertex {vertex} (graph has {n} vertices)")]
    UnknownVertex { vertex: usize, n: usize },

    #[error("all vertices removed without termination after {steps} steps")]
    ExhaustedGraph { steps: u64 },

    #[error("quadrature did not converge: estimate {estimate}, error {error} after {subdivisions} subdivisions")]
    Quadrature {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("point process exceeded the safety cap of {0} points")]
    SafetyCap(u64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed graph file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
