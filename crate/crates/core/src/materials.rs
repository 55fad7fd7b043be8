//! Drude–Lorentz permittivity and permeability.
//!
//! Each response function is `1 + Σ ωP² / (ωT² − ω² − iωγ)`. On the imaginary
//! axis `ω = iu` this becomes the real, positive, decreasing function
//! `1 + Σ ωP² / (ωT² + u² + uγ)` that all ground-state quantities use.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::units::Units;
use crate::{Error, Result};

/// One Lorentz oscillator term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    plasma: f64,
    transverse: f64,
    damping: f64,
}

impl Resonance {
    /// Plasma frequency ωP, transverse frequency ωT and damping γ in rad/s.
    pub fn new(plasma: f64, transverse: f64, damping: f64) -> Result<Self> {
        if !(plasma.is_finite() && plasma > 0.0) {
            return Err(Error::invalid("plasma frequency", plasma, "must be finite and > 0"));
        }
        if !(transverse.is_finite() && transverse > 0.0) {
            return Err(Error::invalid(
                "transverse frequency",
                transverse,
                "must be finite and > 0",
            ));
        }
        if !(damping.is_finite() && damping >= 0.0) {
            return Err(Error::invalid("damping", damping, "must be finite and >= 0"));
        }
        Ok(Self {
            plasma,
            transverse,
            damping,
        })
    }

    /// Frequencies given in units of `units.reference_frequency()`.
    pub fn reduced(units: &Units, plasma: f64, transverse: f64, damping: f64) -> Result<Self> {
        Self::new(
            units.frequency(plasma),
            units.frequency(transverse),
            units.frequency(damping),
        )
    }

    pub fn plasma_frequency(&self) -> f64 {
        self.plasma
    }

    pub fn transverse_frequency(&self) -> f64 {
        self.transverse
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    /// Static contribution ωP²/ωT².
    pub fn strength(&self) -> f64 {
        let r = self.plasma / self.transverse;
        r * r
    }

    /// Surface-mode frequency √(ωT² + ωP²/2).
    pub fn surface_frequency(&self) -> f64 {
        (self.transverse * self.transverse + 0.5 * self.plasma * self.plasma).sqrt()
    }

    /// Longitudinal frequency √(ωT² + ωP²).
    pub fn longitudinal_frequency(&self) -> f64 {
        self.transverse.hypot(self.plasma)
    }

    #[inline]
    fn imag(&self, u: f64) -> f64 {
        self.plasma * self.plasma
            / (self.transverse * self.transverse + u * u + u * self.damping)
    }

    #[inline]
    fn complex(&self, w: Complex64) -> Complex64 {
        let denom = Complex64::new(self.transverse * self.transverse, 0.0)
            - w * w
            - Complex64::i() * w * self.damping;
        Complex64::new(self.plasma * self.plasma, 0.0) / denom
    }
}

/// Static response of a material: χe(0), χm(0) and Z = √(μ(0)/ε(0)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticResponse {
    pub chi_e: f64,
    pub chi_m: f64,
    pub impedance: f64,
}

impl StaticResponse {
    pub fn permittivity(&self) -> f64 {
        1.0 + self.chi_e
    }

    pub fn permeability(&self) -> f64 {
        1.0 + self.chi_m
    }
}

/// Magnetodielectric material with additive electric and magnetic resonances.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Material {
    electric: Vec<Resonance>,
    magnetic: Vec<Resonance>,
}

impl Material {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn new(electric: Vec<Resonance>, magnetic: Vec<Resonance>) -> Self {
        Self { electric, magnetic }
    }

    /// Single electric and/or single magnetic resonance.
    pub fn drude_lorentz(electric: Option<Resonance>, magnetic: Option<Resonance>) -> Self {
        Self {
            electric: electric.into_iter().collect(),
            magnetic: magnetic.into_iter().collect(),
        }
    }

    pub fn electric_resonances(&self) -> &[Resonance] {
        &self.electric
    }

    pub fn magnetic_resonances(&self) -> &[Resonance] {
        &self.magnetic
    }

    pub fn is_vacuum(&self) -> bool {
        self.electric.is_empty() && self.magnetic.is_empty()
    }

    /// Same material with ε and μ exchanged.
    pub fn dual(&self) -> Self {
        Self {
            electric: self.magnetic.clone(),
            magnetic: self.electric.clone(),
        }
    }

    /// Copy without magnetic response.
    pub fn electric_part(&self) -> Self {
        Self::new(self.electric.clone(), Vec::new())
    }

    /// Copy without electric response.
    pub fn magnetic_part(&self) -> Self {
        Self::new(Vec::new(), self.magnetic.clone())
    }

    pub fn permittivity_imag(&self, u: f64) -> Result<f64> {
        check_imag(u)?;
        Ok(self.eps_imag(u))
    }

    pub fn permeability_imag(&self, u: f64) -> Result<f64> {
        check_imag(u)?;
        Ok(self.mu_imag(u))
    }

    /// ε(iu) without argument validation.
    #[inline]
    pub(crate) fn eps_imag(&self, u: f64) -> f64 {
        1.0 + self.chi_e_imag(u)
    }

    #[inline]
    pub(crate) fn mu_imag(&self, u: f64) -> f64 {
        1.0 + self.chi_m_imag(u)
    }

    /// ε(iu) − 1, free of cancellation at large u.
    #[inline]
    pub(crate) fn chi_e_imag(&self, u: f64) -> f64 {
        self.electric.iter().map(|r| r.imag(u)).sum::<f64>()
    }

    #[inline]
    pub(crate) fn chi_m_imag(&self, u: f64) -> f64 {
        self.magnetic.iter().map(|r| r.imag(u)).sum::<f64>()
    }

    pub fn permittivity_complex(&self, w: Complex64) -> Complex64 {
        sum_complex(&self.electric, w)
    }

    pub fn permeability_complex(&self, w: Complex64) -> Complex64 {
        sum_complex(&self.magnetic, w)
    }

    /// ε(ω) at real ω; rejects an undamped resonance hit exactly.
    pub fn permittivity_real(&self, omega: f64) -> Result<Complex64> {
        check_real(&self.electric, omega)?;
        Ok(self.permittivity_complex(Complex64::new(omega, 0.0)))
    }

    pub fn permeability_real(&self, omega: f64) -> Result<Complex64> {
        check_real(&self.magnetic, omega)?;
        Ok(self.permeability_complex(Complex64::new(omega, 0.0)))
    }

    pub fn static_susceptibilities(&self) -> StaticResponse {
        let chi_e: f64 = self.electric.iter().map(Resonance::strength).sum();
        let chi_m: f64 = self.magnetic.iter().map(Resonance::strength).sum();
        StaticResponse {
            chi_e,
            chi_m,
            impedance: ((1.0 + chi_m) / (1.0 + chi_e)).sqrt(),
        }
    }

    /// Lowest transverse resonance frequency ω_M⁻, if any.
    pub fn lowest_resonance(&self) -> Option<f64> {
        self.all().map(Resonance::transverse_frequency).reduce(f64::min)
    }

    /// Highest transverse resonance frequency ω_M⁺, if any.
    pub fn highest_resonance(&self) -> Option<f64> {
        self.all().map(Resonance::transverse_frequency).reduce(f64::max)
    }

    /// Transverse, surface and longitudinal frequencies of every resonance;
    /// the points where the real-frequency response has structure.
    pub fn characteristic_frequencies(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for r in self.all() {
            out.push(r.transverse_frequency());
            out.push(r.surface_frequency());
            out.push(r.longitudinal_frequency());
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        out.dedup();
        out
    }

    fn all(&self) -> impl Iterator<Item = &Resonance> {
        self.electric.iter().chain(self.magnetic.iter())
    }
}

fn sum_complex(res: &[Resonance], w: Complex64) -> Complex64 {
    res.iter()
        .fold(Complex64::new(1.0, 0.0), |acc, r| acc + r.complex(w))
}

fn check_imag(u: f64) -> Result<()> {
    if u.is_nan() || u < 0.0 {
        return Err(Error::NegativeFrequency(u));
    }
    Ok(())
}

fn check_real(res: &[Resonance], omega: f64) -> Result<()> {
    if !omega.is_finite() {
        return Err(Error::NonFinite("real frequency"));
    }
    if res
        .iter()
        .any(|r| r.damping == 0.0 && omega.abs() == r.transverse)
    {
        return Err(Error::ResonancePole(omega));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn electric_resonance() -> Resonance {
        Resonance::new(0.75, 1.03, 0.001).unwrap()
    }

    #[test]
    fn static_permittivity() {
        let m = Material::drude_lorentz(Some(electric_resonance()), None);
        let eps0 = m.permittivity_imag(0.0).unwrap();
        assert!((eps0 - 1.530_210_198_887_737).abs() < 1e-8, "{eps0}");
    }

    #[test]
    fn static_permeability_and_resonant_point() {
        let r = Resonance::new(2.0, 1.0, 0.0).unwrap();
        let m = Material::drude_lorentz(None, Some(r));
        assert_eq!(m.permeability_imag(0.0).unwrap(), 5.0);
        assert_eq!(m.permeability_imag(1.0).unwrap(), 1.0 + 4.0 / 2.0);
        assert_eq!(m.permittivity_imag(3.0).unwrap(), 1.0);
    }

    #[test]
    fn high_frequency_transparency() {
        let m = Material::drude_lorentz(Some(electric_resonance()), None);
        let eps = m.permittivity_imag(1.03e6).unwrap();
        assert!((eps - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vacuum_is_unity() {
        let m = Material::vacuum();
        for u in [0.0, 0.3, 1e9] {
            assert_eq!(m.permittivity_imag(u).unwrap(), 1.0);
            assert_eq!(m.permeability_imag(u).unwrap(), 1.0);
        }
        let s = m.static_susceptibilities();
        assert_eq!((s.chi_e, s.chi_m, s.impedance), (0.0, 0.0, 1.0));
    }

    #[test]
    fn negative_imaginary_frequency_rejected() {
        let m = Material::vacuum();
        assert!(matches!(
            m.permittivity_imag(-1.0),
            Err(Error::NegativeFrequency(_))
        ));
        assert!(m.permeability_imag(f64::NAN).is_err());
    }

    #[test]
    fn invalid_resonances_rejected() {
        assert!(Resonance::new(0.0, 1.0, 0.0).is_err());
        assert!(Resonance::new(1.0, -1.0, 0.0).is_err());
        assert!(Resonance::new(1.0, 1.0, -1e-3).is_err());
        assert!(Resonance::new(f64::INFINITY, 1.0, 0.0).is_err());
    }

    #[test]
    fn impedance_examples() {
        let m = Material::drude_lorentz(None, Some(Resonance::new(3.0f64.sqrt(), 1.0, 0.0).unwrap()));
        assert!((m.static_susceptibilities().impedance - 2.0).abs() < 1e-15);
        let m = Material::drude_lorentz(
            Some(electric_resonance()),
            Some(Resonance::new(2.0, 1.0, 0.001).unwrap()),
        );
        let z = m.static_susceptibilities().impedance;
        assert!((z - (5.0f64 / 1.530_210_198_887_737).sqrt()).abs() < 1e-8);
        assert!((z - 1.8077).abs() < 1e-4);
    }

    #[test]
    fn complex_matches_imaginary_axis() {
        let m = Material::new(
            alloc::vec![electric_resonance(), Resonance::new(0.2, 3.0, 0.1).unwrap()],
            alloc::vec![Resonance::new(2.0, 1.0, 0.001).unwrap()],
        );
        for u in [0.0, 0.01, 0.7, 1.03, 5.0, 1e3] {
            let w = Complex64::new(0.0, u);
            let e = m.permittivity_complex(w);
            let mu = m.permeability_complex(w);
            assert!((e.re - m.eps_imag(u)).abs() < 1e-14 * e.re);
            assert!(e.im.abs() < 1e-14);
            assert!((mu.re - m.mu_imag(u)).abs() < 1e-14 * mu.re);
        }
    }

    #[test]
    fn complex_value_near_resonance() {
        // ε = 1 + ωP²/(ωT² − Ω² − iΩγ) evaluated term by term by hand:
        // Ω = 1 + 0.005i (ωT = 1): Ω² = 0.999975 + 0.01i,
        // iΩγ = 0.01i − 0.00005, denominator = 0.000075 − 0.02i.
        let m = Material::drude_lorentz(Some(Resonance::new(0.75, 1.0, 0.01).unwrap()), None);
        let e = m.permittivity_complex(Complex64::new(1.0, 0.005));
        let denom = Complex64::new(0.000_075, -0.02);
        let expect = Complex64::new(1.0, 0.0) + Complex64::new(0.5625, 0.0) / denom;
        assert!((e - expect).norm() < 1e-12 * expect.norm());
        assert!((expect.re - (1.0 + 0.5625 * 0.000_075 / (0.000_075f64.powi(2) + 0.0004))).abs() < 1e-9);
    }

    #[test]
    fn below_resonance_real_and_above_unity() {
        let m = Material::drude_lorentz(Some(Resonance::new(0.75, 1.03, 0.0).unwrap()), None);
        let e = m.permittivity_real(0.5).unwrap();
        assert_eq!(e.im, 0.0);
        assert!(e.re > 1.0);
    }

    #[test]
    fn undamped_pole_rejected() {
        let m = Material::drude_lorentz(Some(Resonance::new(0.75, 1.03, 0.0).unwrap()), None);
        assert!(matches!(m.permittivity_real(1.03), Err(Error::ResonancePole(_))));
        let damped = Material::drude_lorentz(Some(electric_resonance()), None);
        assert!(damped.permittivity_real(1.03).is_ok());
    }

    #[test]
    fn passivity_on_real_axis() {
        let m = Material::drude_lorentz(Some(electric_resonance()), Some(Resonance::new(2.0, 1.0, 0.01).unwrap()));
        for k in 1..200 {
            let w = 0.02 * k as f64;
            assert!(m.permittivity_real(w).unwrap().im > 0.0);
            assert!(m.permeability_real(w).unwrap().im > 0.0);
        }
    }

    #[test]
    fn resonance_bounds() {
        let m = Material::drude_lorentz(Some(electric_resonance()), Some(Resonance::new(2.0, 1.0, 0.0).unwrap()));
        assert_eq!(m.lowest_resonance(), Some(1.0));
        assert_eq!(m.highest_resonance(), Some(1.03));
        assert_eq!(Material::vacuum().highest_resonance(), None);
        assert_eq!(m.characteristic_frequencies().len(), 6);
    }

    #[test]
    fn dual_swaps_response() {
        let m = Material::drude_lorentz(Some(electric_resonance()), None);
        let d = m.dual();
        assert_eq!(d.mu_imag(0.4), m.eps_imag(0.4));
        assert_eq!(d.eps_imag(0.4), 1.0);
    }
}
