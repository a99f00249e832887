use thiserror::Error;

/// Errors raised by the simulator building blocks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("placed {placed} of {requested} small RRHs before exhausting {attempts} rejection attempts")]
    Placement {
        requested: usize,
        placed: usize,
        attempts: usize,
    },

    #[error("channel of served user at row {row} is the zero vector")]
    DegenerateChannel { row: usize },

    #[error("stacked channel of rows {rows:?} is rank deficient or ill-conditioned (condition number {condition:e})")]
    IllConditioned { rows: Vec<usize>, condition: f64 },

    #[error("{served} served + {victims} victim streams exceed {antennas} antennas; drop {excess} victims")]
    TooManyStreams {
        served: usize,
        victims: usize,
        antennas: usize,
        excess: usize,
    },

    #[error("centralized precoding requires full CSI, partial CSI reporting is not allowed")]
    PartialCsiForCentralized,

    #[error("invalid configuration `{key}`: {reason}")]
    InvalidConfig { key: String, reason: String },
}

impl Error {
    pub(crate) fn config(key: &str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            key: key.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
