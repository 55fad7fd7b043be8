//! CODATA 2018 constants, SI units.

/// Reduced Planck constant ħ (J s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Vacuum permittivity ε₀ (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permeability μ₀ = 1/(ε₀c²) (H/m).
pub const MU_0: f64 = 1.0 / (EPSILON_0 * SPEED_OF_LIGHT * SPEED_OF_LIGHT);
