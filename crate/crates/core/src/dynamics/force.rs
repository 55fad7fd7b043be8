//! Force components of a two-level atom near a half space.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use super::green::Orientation;
use super::spectrum::DynamicSpectrum;
use crate::atom::Atom;
use crate::constants::{EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::materials::Material;
use crate::potential::{engine, Hints, Walls};
use crate::quad::{Integral, QuadratureSpec};
use crate::stack::KernelPoint;
use crate::{Error, Result};

/// Near-field resonant force on the excited level, perpendicular dipole:
///
/// ```text
/// F₁ʳ = −3|d|²/(32πε₀z⁴) · (|ε(Ω)|² − 1)/|ε(Ω) + 1|²
/// ```
///
/// with ε evaluated at the complex frequency Ω = ω̃₁₀ + iΓ₁/2.
pub fn resonant_force_nearfield(atom: &Atom, material: &Material, spectrum: &DynamicSpectrum, z: f64) -> Result<f64> {
    let t = atom.two_level_transition()?;
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::OutsideLayer {
            z,
            limit: f64::INFINITY,
        });
    }
    let eps = material.permittivity_complex(spectrum.complex_frequency());
    let ratio = (eps.norm_sqr() - 1.0) / (eps + 1.0).norm_sqr();
    if !ratio.is_finite() {
        return Err(Error::ResonancePole(spectrum.frequency));
    }
    Ok(-3.0 * t.dipole_sq / (32.0 * PI * EPSILON_0 * z.powi(4)) * ratio)
}

/// Which pieces of the spectrum enter a resonant-force profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileVariant {
    /// Shifted and broadened.
    Full,
    /// Γ = 0.
    ShiftOnly,
    /// δω = 0.
    BroadeningOnly,
    /// δω = Γ = 0.
    Perturbative,
}

impl ProfileVariant {
    pub const ALL: [ProfileVariant; 4] = [
        ProfileVariant::Full,
        ProfileVariant::ShiftOnly,
        ProfileVariant::BroadeningOnly,
        ProfileVariant::Perturbative,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ProfileVariant::Full => "full",
            ProfileVariant::ShiftOnly => "shift_only",
            ProfileVariant::BroadeningOnly => "broadening_only",
            ProfileVariant::Perturbative => "perturbative",
        }
    }

    /// The spectrum this variant uses, given the self-consistent one and
    /// the width evaluated at the bare frequency.
    pub fn select(&self, full: &DynamicSpectrum, bare_width: f64) -> DynamicSpectrum {
        match self {
            ProfileVariant::Full => *full,
            ProfileVariant::ShiftOnly => full.without_widths(),
            ProfileVariant::BroadeningOnly => DynamicSpectrum {
                widths: [0.0, bare_width],
                ..DynamicSpectrum::perturbative(full.bare_frequency)
            },
            ProfileVariant::Perturbative => DynamicSpectrum::perturbative(full.bare_frequency),
        }
    }
}

/// α_m(iu) + α_m(−iu) of the ground level per unit |d|²/ħ for a
/// two-level atom: 2ω̃/(ω̃² + (u + g)²) + 2ω̃/(ω̃² + (u − g)²), g = Γ/2.
fn polarizability_sum(omega: f64, g: f64, u: f64) -> f64 {
    let w2 = omega * omega;
    2.0 * omega / (w2 + (u + g) * (u + g)) + 2.0 * omega / (w2 + (u - g) * (u - g))
}

/// The same minus its Γ = 0 value, without cancellation.
fn polarizability_sum_correction(omega: f64, g: f64, u: f64) -> f64 {
    let w2 = omega * omega;
    let d0 = w2 + u * u;
    let dp = w2 + (u + g) * (u + g);
    let dm = w2 + (u - g) * (u - g);
    2.0 * omega * (-(2.0 * u * g + g * g) / (dp * d0) + (2.0 * u * g - g * g) / (dm * d0))
}

fn off_resonant_with<W>(
    atom: &Atom,
    material: &Material,
    spectrum: &DynamicSpectrum,
    z: f64,
    level: usize,
    orientation: Orientation,
    spec: &QuadratureSpec,
    weight: W,
    derivative: bool,
) -> Result<Integral>
where
    W: Fn(f64, f64, f64) -> f64,
{
    let t = atom.two_level_transition()?;
    spec.validate()?;
    if level > 1 {
        return Err(Error::invalid("level", level as f64, "two-level atom: 0 or 1"));
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::OutsideLayer {
            z,
            limit: f64::INFINITY,
        });
    }
    if material.is_vacuum() {
        return Ok(Integral::exact(0.0));
    }
    let omega = spectrum.frequency;
    let g = 0.5 * (spectrum.widths[0] + spectrum.widths[1]);
    let share = match orientation {
        Orientation::Perpendicular => 1.0,
        Orientation::Isotropic => 1.0 / 3.0,
    };
    // α₁ = −α₀ for two levels
    let sign = if level == 0 { 1.0 } else { -1.0 };
    let scale = sign * share * t.dipole_sq / HBAR;
    let hints = Hints::with_frequencies(alloc::vec![omega], &[material], Vec::new());
    let c = SPEED_OF_LIGHT;
    let out = engine(
        |u| scale * weight(omega, g, u),
        &hints,
        Walls {
            minus: Some(z),
            plus: None,
        },
        spec,
        |u| {
            let p = KernelPoint::new(material, u, 0.0);
            (p, p.permittivity() * p.permeability())
        },
        |p, u, b| {
            let (rs, rp) = KernelPoint::with_susceptibilities(u, b, p.chi_e, p.chi_m).half_space();
            let bc2 = b * b * c * c;
            let k = match orientation {
                Orientation::Perpendicular => -(bc2 - u * u) * rp,
                Orientation::Isotropic => u * u * rs - (2.0 * bc2 - u * u) * rp,
            };
            (if derivative { b * k } else { k }, 0.0)
        },
    );
    if !out.value.is_finite() {
        return Err(Error::NonFinite("imaginary-frequency integral"));
    }
    Ok(out)
}

/// Off-resonant force Fᵐᵒʳ (N, positive away from the surface) on level
/// `m ∈ {0, 1}`, from the body-assisted polarizability with the shifted
/// frequency and the widths of `spectrum`.
pub fn off_resonant_force(
    atom: &Atom,
    material: &Material,
    spectrum: &DynamicSpectrum,
    z: f64,
    level: usize,
    orientation: Orientation,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    off_resonant_with(atom, material, spectrum, z, level, orientation, spec, polarizability_sum, true)
}

/// Fᵐᵒʳ(Γ) − Fᵐᵒʳ(Γ = 0), integrated directly.
pub fn off_resonant_width_correction(
    atom: &Atom,
    material: &Material,
    spectrum: &DynamicSpectrum,
    z: f64,
    level: usize,
    orientation: Orientation,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    off_resonant_with(
        atom,
        material,
        spectrum,
        z,
        level,
        orientation,
        spec,
        polarizability_sum_correction,
        true,
    )
}

/// ħδω₀ of the ground level at transition frequency ω̃ (J), as the
/// imaginary-frequency integral of the scattering Green tensor:
/// `δω₀ = μ₀|d|²/(πħ) ∫du u² ω̃/(ω̃² + u²) G(iu)`.
pub(super) fn ground_shift_energy(
    atom: &Atom,
    material: &Material,
    omega: f64,
    z: f64,
    orientation: Orientation,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let s = DynamicSpectrum::perturbative(omega);
    off_resonant_with(
        atom,
        material,
        &s,
        z,
        0,
        orientation,
        spec,
        |w, _, u| 2.0 * w / (w * w + u * u),
        false,
    )
}

/// Ground-state force F₀ = F₀ᵒʳ.
pub fn ground_state_force(
    atom: &Atom,
    material: &Material,
    spectrum: &DynamicSpectrum,
    z: f64,
    orientation: Orientation,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    off_resonant_force(atom, material, spectrum, z, 0, orientation, spec)
}
