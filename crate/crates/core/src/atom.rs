//! Atomic level structure and the isotropic ground-state polarizability.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::constants::{EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::{Error, Result};

/// Ground-state transition 0 → k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    /// ω_k0 in rad/s.
    pub frequency: f64,
    /// |d_0k|² in C² m².
    pub dipole_sq: f64,
}

/// How the dipole moment of a two-level atom is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DipoleStrength {
    /// |d|² in C² m².
    Squared(f64),
    /// β = ω_ref²|d|²/(3πħε₀c³) at the reference frequency ω_ref.
    Dimensionless { beta: f64, reference: f64 },
}

/// |d|² from the dimensionless strength β defined at `reference`.
pub fn dipole_sq_from_strength(beta: f64, reference: f64) -> f64 {
    3.0 * PI * HBAR * EPSILON_0 * SPEED_OF_LIGHT.powi(3) * beta / (reference * reference)
}

/// β = ω²|d|²/(3πħε₀c³); also the free-space decay rate divided by ω.
pub fn strength_from_dipole_sq(dipole_sq: f64, reference: f64) -> f64 {
    reference * reference * dipole_sq / (3.0 * PI * HBAR * EPSILON_0 * SPEED_OF_LIGHT.powi(3))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    transitions: Vec<Transition>,
}

impl Atom {
    pub fn new(transitions: Vec<Transition>) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::invalid("transitions", 0.0, "at least one is required"));
        }
        for t in &transitions {
            if !(t.frequency.is_finite() && t.frequency > 0.0) {
                return Err(Error::invalid(
                    "transition frequency",
                    t.frequency,
                    "must be finite and > 0",
                ));
            }
            if !(t.dipole_sq.is_finite() && t.dipole_sq > 0.0) {
                return Err(Error::invalid(
                    "squared dipole moment",
                    t.dipole_sq,
                    "must be finite and > 0",
                ));
            }
        }
        Ok(Self { transitions })
    }

    pub fn two_level(frequency: f64, strength: DipoleStrength) -> Result<Self> {
        let dipole_sq = match strength {
            DipoleStrength::Squared(d2) => d2,
            DipoleStrength::Dimensionless { beta, reference } => {
                if !(reference.is_finite() && reference > 0.0) {
                    return Err(Error::invalid(
                        "reference frequency",
                        reference,
                        "must be finite and > 0",
                    ));
                }
                if !(beta.is_finite() && beta > 0.0) {
                    return Err(Error::invalid("dipole strength", beta, "must be finite and > 0"));
                }
                dipole_sq_from_strength(beta, reference)
            }
        };
        Self::new(alloc::vec![Transition {
            frequency,
            dipole_sq
        }])
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// The single transition of a two-level atom.
    pub fn two_level_transition(&self) -> Result<Transition> {
        match self.transitions.as_slice() {
            [t] => Ok(*t),
            ts => Err(Error::NotTwoLevel(ts.len() + 1)),
        }
    }

    /// ω_A⁻.
    pub fn lowest_transition(&self) -> f64 {
        self.transitions
            .iter()
            .map(|t| t.frequency)
            .fold(f64::INFINITY, f64::min)
    }

    /// ω_A⁺.
    pub fn highest_transition(&self) -> f64 {
        self.transitions.iter().map(|t| t.frequency).fold(0.0, f64::max)
    }

    /// α(iu) = (2/3ħ) Σ ω_k|d_k|²/(ω_k² + u²), in C² m² J⁻¹.
    pub fn polarizability_imag(&self, u: f64) -> Result<f64> {
        if u.is_nan() || u < 0.0 {
            return Err(Error::NegativeFrequency(u));
        }
        Ok(self.alpha(u))
    }

    #[inline]
    pub(crate) fn alpha(&self, u: f64) -> f64 {
        let u2 = u * u;
        let s: f64 = self
            .transitions
            .iter()
            .map(|t| t.frequency * t.dipole_sq / (t.frequency * t.frequency + u2))
            .sum();
        2.0 * s / (3.0 * HBAR)
    }

    /// α(0).
    pub fn static_polarizability(&self) -> f64 {
        self.alpha(0.0)
    }
}
