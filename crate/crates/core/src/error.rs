use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical divergence at step {step} (t = {time:e} s)")]
    Divergence { step: usize, time: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("input error: {0}")]
    Input(String),
}
