use thiserror::Error;

/// Errors shared across the solver, kick process and verification lab.
#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation degree must be >= 1 (got {0})")]
    InvalidTruncation(u32),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("grid too small for dealiased products at truncation {trunc}: nlat={nlat} (need >= {need_lat}), nlon={nlon} (need >= {need_lon})")]
    Dealiasing {
        trunc: u32,
        nlat: usize,
        nlon: usize,
        need_lat: usize,
        need_lon: usize,
    },

    #[error("field is not mean-free: |a_00| = {0:.3e}")]
    NotMeanFree(f64),

    #[error("field is not zonal: max |m>0 coefficient| = {0:.3e}")]
    NotZonal(f64),

    #[error("mode index {index} out of range 1..={max}")]
    ModeIndex { index: usize, max: usize },

    #[error("target time {target} not reachable from t={from} in steps of dt={dt}")]
    Misaligned { target: f64, from: f64, dt: f64 },

    #[error("non-finite state at step {step} (t = {t}{})", .chain.map(|c| format!(", chain {c}")).unwrap_or_default())]
    BlowUp {
        step: u64,
        t: f64,
        chain: Option<u64>,
    },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("config invalid:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("checkpoint format version {found} not supported (expected {expected})")]
    CheckpointVersion { found: u32, expected: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Attach a chain index to a blow-up error propagating out of an ensemble.
    pub fn with_chain(self, chain_index: u64) -> Self {
        match self {
            Error::BlowUp { step, t, .. } => Error::BlowUp {
                step,
                t,
                chain: Some(chain_index),
            },
            other => other,
        }
    }
}
