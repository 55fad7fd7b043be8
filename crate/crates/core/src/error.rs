use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("frequency must be non-negative, got {0}")]
    NegativeFrequency(f64),

    #[error("real frequency {0} rad/s hits an undamped resonance pole")]
    ResonancePole(f64),

    #[error("invalid layer stack: {0}")]
    InvalidStack(&'static str),

    #[error("position {z} m lies outside the atom layer (0, {limit}) m")]
    OutsideLayer { z: f64, limit: f64 },

    #[error("non-finite intermediate value in {0}")]
    NonFinite(&'static str),

    #[error("root not bracketed on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("operation requires a two-level atom, got {0} transitions")]
    NotTwoLevel(usize),

    #[error("degenerate decay rates; the rate matrix is not diagonalizable")]
    DegenerateRates,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Self::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
