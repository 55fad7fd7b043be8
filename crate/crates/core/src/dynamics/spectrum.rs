//! Body-induced level shifts and widths of a two-level atom and their
//! self-consistent solution.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::force::ground_shift_energy;
use super::green::{halfspace_im_green, halfspace_re_green, Orientation};
use crate::atom::{Atom, Transition};
use crate::constants::{EPSILON_0, HBAR, MU_0, SPEED_OF_LIGHT};
use crate::materials::Material;
use crate::quad::{Integral, QuadratureSpec};
use crate::{Error, Result};

/// Fixed-point relaxation factor.
pub const RELAXATION: f64 = 0.5;
/// Convergence threshold on successive ω̃, relative.
pub const SPECTRUM_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 200;

/// Shifted and broadened two-level spectrum at one atom position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicSpectrum {
    /// Bare ω₁₀ (rad/s).
    pub bare_frequency: f64,
    /// ω̃₁₀ = ω₁₀ + δω₁ − δω₀ (rad/s).
    pub frequency: f64,
    /// δω₀, δω₁ (rad/s).
    pub shifts: [f64; 2],
    /// Γ₀, Γ₁ (rad/s). Γ₀ = 0: the ground state has no downward channel.
    pub widths: [f64; 2],
    pub iterations: usize,
    pub converged: bool,
}

impl DynamicSpectrum {
    /// Unperturbed spectrum: δω = Γ = 0.
    pub fn perturbative(bare_frequency: f64) -> Self {
        Self {
            bare_frequency,
            frequency: bare_frequency,
            shifts: [0.0; 2],
            widths: [0.0; 2],
            iterations: 0,
            converged: true,
        }
    }

    /// Ω₁₀ = ω̃₁₀ + i(Γ₁ + Γ₀)/2.
    pub fn complex_frequency(&self) -> Complex64 {
        Complex64::new(self.frequency, 0.5 * (self.widths[0] + self.widths[1]))
    }

    /// Same spectrum with the widths dropped (shift-only curve).
    pub fn without_widths(&self) -> Self {
        Self {
            widths: [0.0; 2],
            ..*self
        }
    }

    /// Same spectrum with the shifts dropped (broadening-only curve).
    pub fn without_shifts(&self) -> Self {
        Self {
            frequency: self.bare_frequency,
            shifts: [0.0; 2],
            ..*self
        }
    }
}

/// Free-space decay rate ω³|d|²/(3πħε₀c³).
pub fn free_space_rate(dipole_sq: f64, omega: f64) -> f64 {
    omega.powi(3) * dipole_sq / (3.0 * PI * HBAR * EPSILON_0 * SPEED_OF_LIGHT.powi(3))
}

fn transition(atom: &Atom) -> Result<Transition> {
    atom.two_level_transition()
}

/// Width of the upper level for a downward transition at ω̃, including the
/// free-space part; zero when ω̃ ≤ 0.
pub fn level_width(
    atom: &Atom,
    material: &Material,
    z: f64,
    omega: f64,
    orientation: Orientation,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let t = transition(atom)?;
    if omega <= 0.0 {
        return Ok(Integral::exact(0.0));
    }
    let scattering = halfspace_im_green(material, z, omega, orientation, spec)?;
    let f = 2.0 * MU_0 / HBAR * omega * omega * t.dipole_sq;
    let free = free_space_rate(t.dipole_sq, omega);
    let g = scattering.scaled(f);
    Ok(Integral {
        value: free + g.value,
        ..g
    })
}

/// δω_m of level `m ∈ {0, 1}` for the transition frequency ω̃, from the
/// scattering part of the Green tensor.
///
/// The real-frequency principal-value integral is rotated onto the
/// imaginary axis. The ground level only picks up the imaginary-axis part;
/// the excited level also collects the pole at ω̃:
///
/// ```text
/// δω₁ = −δω₀ − μ₀ω̃²|d|²/ħ · Re G(ω̃)
/// ```
pub fn level_shift(
    atom: &Atom,
    material: &Material,
    z: f64,
    level: usize,
    omega: f64,
    orientation: Orientation,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let t = transition(atom)?;
    if level > 1 {
        return Err(Error::invalid("level", level as f64, "two-level atom: 0 or 1"));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::invalid("transition frequency", omega, "must be finite and > 0"));
    }
    if material.is_vacuum() {
        return Ok(Integral::exact(0.0));
    }
    let s0 = ground_shift_energy(atom, material, omega, z, orientation, spec)?.scaled(1.0 / HBAR);
    if level == 0 {
        return Ok(s0);
    }
    let re_g = halfspace_re_green(material, z, omega, orientation, spec)?;
    let pole = -MU_0 * omega * omega * t.dipole_sq / HBAR * re_g.value;
    Ok(Integral {
        value: -s0.value + pole,
        error: s0.error + (MU_0 * omega * omega * t.dipole_sq / HBAR * re_g.error).abs(),
        converged: s0.converged && re_g.converged,
        evaluations: s0.evaluations + re_g.evaluations,
    })
}

/// Damped fixed-point iteration ω̃ ← ω₁₀ + δω₁(ω̃) − δω₀(ω̃), followed by
/// the widths at the converged ω̃. Non-convergence is flagged and the last
/// iterate returned.
pub fn self_consistent_spectrum(
    atom: &Atom,
    material: &Material,
    z: f64,
    orientation: Orientation,
    spec: &QuadratureSpec,
) -> Result<DynamicSpectrum> {
    let t = transition(atom)?;
    let w10 = t.frequency;
    let mut omega = w10;
    let mut shifts = [0.0; 2];
    let mut converged = false;
    let mut quad_ok = true;
    let mut iterations = 0;
    if material.is_vacuum() {
        converged = true;
    }
    while !converged && iterations < MAX_ITERATIONS {
        iterations += 1;
        let s0 = level_shift(atom, material, z, 0, omega, orientation, spec)?;
        let s1 = level_shift(atom, material, z, 1, omega, orientation, spec)?;
        quad_ok &= s0.converged && s1.converged;
        shifts = [s0.value, s1.value];
        let target = w10 + s1.value - s0.value;
        if !(target > 0.0) {
            return Err(Error::NonFinite("shifted transition frequency"));
        }
        let next = omega + RELAXATION * (target - omega);
        converged = (next - omega).abs() <= SPECTRUM_TOLERANCE * next;
        omega = next;
    }
    let g1 = level_width(atom, material, z, omega, orientation, spec)?;
    Ok(DynamicSpectrum {
        bare_frequency: w10,
        frequency: omega,
        shifts,
        widths: [0.0, g1.value],
        iterations,
        converged: converged && quad_ok && g1.converged,
    })
}

#[cfg(test)]
mod tests {
    extern crate std;
    use super::super::green::halfspace_green_imag;
    use super::*;
    use crate::atom::DipoleStrength;
    use crate::materials::Resonance;
    use crate::quad::integrate_breakpoints;

    const WT: f64 = 2.414_198_745e15;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn dielectric() -> Material {
        Material::drude_lorentz(Some(Resonance::new(0.75 * WT, WT, 0.01 * WT).unwrap()), None)
    }

    fn atom(w: f64) -> Atom {
        Atom::two_level(w, DipoleStrength::Dimensionless { beta: 1e-7, reference: WT }).unwrap()
    }

    fn len(x: f64) -> f64 {
        x * SPEED_OF_LIGHT / WT
    }

    /// Imaginary-axis form of the ground-state shift:
    /// δω₀ = μ₀|d|²/(πħ) ∫du u² ω̃/(ω̃² + u²) G(iu).
    fn wick_ground_shift(a: &Atom, m: &Material, z: f64, omega: f64, o: Orientation) -> f64 {
        let d2 = a.transitions()[0].dipole_sq;
        let r = integrate_breakpoints(
            |u: f64| {
                let g = halfspace_green_imag(m, z, u, o, &spec().tightened(10.0)).unwrap().value;
                u * u * omega / (omega * omega + u * u) * g
            },
            &[0.0, 0.1 * omega, omega, 10.0 * omega],
            Some(omega),
            &spec(),
        );
        MU_0 * d2 / (PI * HBAR) * r.value
    }

    #[test]
    fn vacuum_spectrum_is_bare() {
        let a = atom(WT);
        let s = self_consistent_spectrum(&a, &Material::vacuum(), len(0.1), Orientation::Perpendicular, &spec()).unwrap();
        assert_eq!(s.frequency, WT);
        assert_eq!(s.widths[0], 0.0);
        let free = free_space_rate(a.transitions()[0].dipole_sq, WT);
        assert!((s.widths[1] / free - 1.0).abs() < 1e-14);
        assert!((free / WT - 1e-7).abs() < 1e-20);
    }

    #[test]
    fn width_gate_and_far_field() {
        let a = atom(0.9 * WT);
        let m = dielectric();
        assert_eq!(level_width(&a, &m, len(0.05), -1.0, Orientation::Perpendicular, &spec()).unwrap().value, 0.0);
        let far = level_width(&a, &m, len(1e3), 0.9 * WT, Orientation::Perpendicular, &spec()).unwrap().value;
        let free = free_space_rate(a.transitions()[0].dipole_sq, 0.9 * WT);
        assert!((far / free - 1.0).abs() < 1e-2, "{}", far / free);
    }

    #[test]
    fn near_field_width_follows_image_law() {
        let w = 0.9 * WT;
        let a = atom(w);
        let m = dielectric();
        let d2 = a.transitions()[0].dipole_sq;
        let eps = m.permittivity_real(w).unwrap();
        let im_r = ((eps - 1.0) / (eps + 1.0)).im;
        let z = len(2e-3);
        let g = level_width(&a, &m, z, w, Orientation::Perpendicular, &spec()).unwrap().value - free_space_rate(d2, w);
        let expect = d2 * im_r / (8.0 * PI * HBAR * EPSILON_0 * z.powi(3));
        assert!((g / expect - 1.0).abs() < 1e-2, "{} vs {expect}", g);
    }

    #[test]
    fn ground_shift_equals_potential_over_hbar() {
        // isotropic δω₀ at ω̃ = ω₁₀ is the ground-state potential divided by ħ
        let w = 0.9 * WT;
        let a = atom(w);
        let m = dielectric();
        let z = len(0.05);
        let s0 = level_shift(&a, &m, z, 0, w, Orientation::Isotropic, &spec()).unwrap();
        assert!(s0.converged);
        let u = crate::potential::energy(&crate::LayerStack::half_space(m), &a, z, &spec()).unwrap().value;
        assert!(s0.value < 0.0);
        assert!((HBAR * s0.value / u - 1.0).abs() < 1e-5, "{} vs {}", HBAR * s0.value, u);
    }

    #[test]
    fn ground_shift_matches_green_tensor_route() {
        let w = 0.9 * WT;
        let a = atom(w);
        let m = dielectric();
        let z = len(0.05);
        let o = Orientation::Perpendicular;
        let s0 = level_shift(&a, &m, z, 0, w, o, &spec()).unwrap().value;
        let wick0 = wick_ground_shift(&a, &m, z, w, o);
        assert!((s0 / wick0 - 1.0).abs() < 1e-5, "{s0} vs {wick0}");
    }

    #[test]
    fn transition_shift_follows_image_law() {
        // δω₁ + δω₀ → −|d|² Re r_p(ω̃)/(16πε₀ħz³) in the near field
        let w = 0.9 * WT;
        let a = atom(w);
        let m = dielectric();
        let z = len(1e-3);
        let o = Orientation::Perpendicular;
        let d2 = a.transitions()[0].dipole_sq;
        let eps = m.permittivity_real(w).unwrap();
        let re_r = ((eps - 1.0) / (eps + 1.0)).re;
        let s0 = level_shift(&a, &m, z, 0, w, o, &spec()).unwrap().value;
        let s1 = level_shift(&a, &m, z, 1, w, o, &spec()).unwrap().value;
        let expect = -d2 * re_r / (16.0 * PI * EPSILON_0 * HBAR * z.powi(3));
        assert!(((s0 + s1) / expect - 1.0).abs() < 1e-2, "{} vs {expect}", s0 + s1);
    }

    #[test]
    fn shift_scales_as_inverse_cube() {
        let w = 0.9 * WT;
        let a = atom(w);
        let m = dielectric();
        let o = Orientation::Perpendicular;
        let s = |x: f64| level_shift(&a, &m, len(x), 0, w, o, &spec()).unwrap().value;
        let slope = (s(4e-3) / s(2e-3)).ln() / 2f64.ln();
        assert!((slope + 3.0).abs() < 0.05, "{slope}");
    }

    #[test]
    fn far_field_shifts_are_negligible() {
        let w = 0.9 * WT;
        let a = atom(w);
        let s = self_consistent_spectrum(&a, &dielectric(), len(1e3), Orientation::Perpendicular, &spec()).unwrap();
        assert!(s.converged);
        assert!(s.shifts.iter().all(|d| d.abs() < 1e-6 * w));
    }

    #[test]
    fn fixed_point_converges_near_surface() {
        let w = 1.1 * WT;
        let a = atom(w);
        let z = 0.0075 * 2.0 * PI * SPEED_OF_LIGHT / WT;
        let s = self_consistent_spectrum(&a, &dielectric(), z, Orientation::Perpendicular, &spec()).unwrap();
        assert!(s.converged, "{s:?}");
        let residual = w + s.shifts[1] - s.shifts[0] - s.frequency;
        assert!(residual.abs() < 1e-8 * w, "{residual}");
        assert!(s.widths[1] > free_space_rate(a.transitions()[0].dipole_sq, s.frequency));
    }
}
