//! Conversion between SI and the reference-frequency unit system.
//!
//! Configs and figure parameters express frequencies as multiples of a
//! reference angular frequency ω_ref (usually the atomic transition ω₁₀) and
//! lengths as multiples of c/ω_ref.

use crate::constants::SPEED_OF_LIGHT;
use crate::{Error, Result};

/// Default reference frequency: the Rb D2 line, 2πc/780.241 nm.
pub const DEFAULT_REFERENCE_FREQUENCY: f64 = 2.414_198_745e15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    omega_ref: f64,
}

impl Units {
    pub fn new(omega_ref: f64) -> Result<Self> {
        if !(omega_ref.is_finite() && omega_ref > 0.0) {
            return Err(Error::invalid(
                "reference frequency",
                omega_ref,
                "must be finite and positive",
            ));
        }
        Ok(Self { omega_ref })
    }

    pub fn reference_frequency(&self) -> f64 {
        self.omega_ref
    }

    /// c/ω_ref in metres.
    pub fn reference_length(&self) -> f64 {
        SPEED_OF_LIGHT / self.omega_ref
    }

    pub fn frequency(&self, reduced: f64) -> f64 {
        reduced * self.omega_ref
    }

    pub fn length(&self, reduced: f64) -> f64 {
        reduced * self.reference_length()
    }

    pub fn reduced_frequency(&self, omega: f64) -> f64 {
        omega / self.omega_ref
    }

    pub fn reduced_length(&self, z: f64) -> f64 {
        z / self.reference_length()
    }
}

impl Default for Units {
    fn default() -> Self {
        Self {
            omega_ref: DEFAULT_REFERENCE_FREQUENCY,
        }
    }
}
