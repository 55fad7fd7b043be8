//! Scattering Green tensor of a magnetodielectric half space at coincident
//! points, as single Sommerfeld integrals.
//!
//! With `k = ω/c`, `k_z = √(k² − q²)` and the convention in which the bulk
//! part has `Im G⁽⁰⁾ = k/(6π)·I`:
//!
//! ```text
//! G_zz = i/(4πk²) ∫dq q³/k_z r_p e^{2ik_z z}
//! G_xx = G_yy = i/(8π) ∫dq q/k_z [r_s − (k_z²/k²) r_p] e^{2ik_z z}
//! ```
//!
//! The real-frequency integral is split into the propagating part
//! (`q < k`, integrated over real `k_z`) and the evanescent part (`q > k`,
//! over `κ = −i k_z`).

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::constants::SPEED_OF_LIGHT;
use crate::materials::Material;
use crate::quad::{integrate_breakpoints, Integral, QuadratureSpec};
use crate::stack::KernelPoint;
use crate::{Error, Result};

/// Dipole orientation relative to the surface normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// Dipole along z; the component is G_zz.
    #[default]
    Perpendicular,
    /// Orientation average; the component is Tr G/3.
    Isotropic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Re,
    Im,
}

/// Material response at one real frequency.
struct RealResponse {
    k2: f64,
    chi_e: Complex64,
    chi_m: Complex64,
    /// εμ − 1.
    excess: Complex64,
}

impl RealResponse {
    fn new(material: &Material, omega: f64) -> Result<Self> {
        let eps = material.permittivity_real(omega)?;
        let mu = material.permeability_real(omega)?;
        let (chi_e, chi_m) = (eps - 1.0, mu - 1.0);
        let k = omega / SPEED_OF_LIGHT;
        Ok(Self {
            k2: k * k,
            chi_e,
            chi_m,
            excess: chi_e + chi_m + chi_e * chi_m,
        })
    }

    /// (r_s, r_p) for a vacuum-side k_z (real or positive imaginary).
    fn reflection(&self, kz: Complex64) -> (Complex64, Complex64) {
        let kz2 = kz * kz;
        let mut kz1 = (self.excess * self.k2 + kz2).sqrt();
        if kz1.im < 0.0 {
            kz1 = -kz1;
        }
        let r = |chi: Complex64| {
            let s = (chi + 1.0) * kz + kz1;
            (kz2 * chi * (chi + 2.0) - self.excess * self.k2) / (s * s)
        };
        (r(self.chi_m), r(self.chi_e))
    }
}

fn check_position(z: f64) -> Result<()> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::OutsideLayer {
            z,
            limit: f64::INFINITY,
        });
    }
    Ok(())
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::invalid("frequency", omega, "must be finite and > 0"));
    }
    Ok(())
}

/// Most oscillation panels used for the propagating part.
const MAX_OSCILLATION_PANELS: usize = 2000;

fn real_part_of(
    material: &Material,
    z: f64,
    omega: f64,
    orientation: Orientation,
    part: Part,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    check_position(z)?;
    check_omega(omega)?;
    spec.validate()?;
    if material.is_vacuum() {
        return Ok(Integral::exact(0.0));
    }
    let resp = RealResponse::new(material, omega)?;
    let k2 = resp.k2;
    let k = k2.sqrt();
    let pick = |c: Complex64| match part {
        Part::Re => c.re,
        Part::Im => c.im,
    };
    let norm = match orientation {
        Orientation::Perpendicular => 1.0 / (4.0 * PI * k2),
        Orientation::Isotropic => 1.0 / (12.0 * PI * k2),
    };

    // propagating: i/(4πk²) ∫₀ᵏ dk_z w(k_z) e^{2ik_z z}
    let propagating = |kz: f64| {
        let (rs, rp) = resp.reflection(Complex64::new(kz, 0.0));
        let kz2 = kz * kz;
        let w = match orientation {
            Orientation::Perpendicular => rp * (k2 - kz2),
            Orientation::Isotropic => rs * k2 + rp * (k2 - 2.0 * kz2),
        };
        pick(Complex64::i() * w * Complex64::from_polar(1.0, 2.0 * kz * z))
    };
    let mut points: Vec<f64> = Vec::new();
    let panels = ((k * z / PI).ceil() as usize).clamp(1, MAX_OSCILLATION_PANELS);
    points.extend((0..=panels).map(|i| k * i as f64 / panels as f64));
    if resp.excess.re < 0.0 {
        let kb = k * (-resp.excess.re).sqrt();
        if kb < k {
            points.push(kb);
        }
    }
    let prop = integrate_breakpoints(propagating, &points, None, spec);

    // evanescent: 1/(4πk²) ∫₀^∞ dκ w(κ) e^{−2κz}
    let evanescent = |kappa: f64| {
        let (rs, rp) = resp.reflection(Complex64::new(0.0, kappa));
        let q2 = kappa * kappa;
        let w = match orientation {
            Orientation::Perpendicular => rp * (q2 + k2),
            Orientation::Isotropic => rs * k2 + rp * (2.0 * q2 + k2),
        };
        pick(w) * (-2.0 * kappa * z).exp()
    };
    let scale = 1.0 / (2.0 * z);
    let mut points = alloc::vec![0.0, 0.1 * scale, scale, 10.0 * scale];
    if resp.excess.re > 0.0 {
        points.push(k * resp.excess.re.sqrt());
    }
    let evan = integrate_breakpoints(evanescent, &points, Some(scale), spec);

    let total = prop.plus(evan).scaled(norm);
    if !total.value.is_finite() {
        return Err(Error::NonFinite("Sommerfeld integral"));
    }
    Ok(total)
}

/// Im of the orientation component of G⁽¹⁾(z, z, ω) (1/m).
pub fn halfspace_im_green(
    material: &Material,
    z: f64,
    omega: f64,
    orientation: Orientation,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    real_part_of(material, z, omega, orientation, Part::Im, spec)
}

/// Re of the orientation component of G⁽¹⁾(z, z, ω) (1/m).
pub fn halfspace_re_green(
    material: &Material,
    z: f64,
    omega: f64,
    orientation: Orientation,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    real_part_of(material, z, omega, orientation, Part::Re, spec)
}

/// Im G⁽¹⁾_zz(z, z, ω).
pub fn halfspace_im_green_perp(material: &Material, z: f64, omega: f64, spec: &QuadratureSpec) -> Result<Integral> {
    halfspace_im_green(material, z, omega, Orientation::Perpendicular, spec)
}

/// Orientation component of G⁽¹⁾(z, z, iu), which is real.
pub fn halfspace_green_imag(
    material: &Material,
    z: f64,
    u: f64,
    orientation: Orientation,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    check_position(z)?;
    check_omega(u)?;
    spec.validate()?;
    let k = u / SPEED_OF_LIGHT;
    let k2 = k * k;
    // b = k + t/(2z), weight e^{−2bz} = e^{−2kz} e^{−t}
    let f = |t: f64| {
        let b = k + t / (2.0 * z);
        let (rs, rp) = KernelPoint::new(material, u, b).half_space();
        let w = match orientation {
            Orientation::Perpendicular => -(b * b - k2) * rp,
            Orientation::Isotropic => (k2 * rs - (2.0 * b * b - k2) * rp) / 3.0,
        };
        w * (-t).exp()
    };
    let r = integrate_breakpoints(f, &[0.0, 1.0, spec.truncation], None, spec);
    Ok(r.scaled((-2.0 * k * z).exp() / (2.0 * z * 4.0 * PI * k2)))
}

#[cfg(test)]
mod tests {
    extern crate std;
    use super::*;
    use crate::materials::Resonance;

    const W: f64 = 2.414_198_745e15;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn dielectric(gamma: f64) -> Material {
        Material::drude_lorentz(Some(Resonance::new(0.75 * W, W, gamma * W).unwrap()), None)
    }

    fn len(x: f64) -> f64 {
        x * SPEED_OF_LIGHT / W
    }

    #[test]
    fn vacuum_is_zero() {
        let r = halfspace_im_green_perp(&Material::vacuum(), len(0.1), W, &spec()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn near_field_scaling_and_coefficient() {
        let m = dielectric(0.05);
        let omega = 0.9 * W;
        let k = omega / SPEED_OF_LIGHT;
        let eps = m.permittivity_real(omega).unwrap();
        let r0 = ((eps - 1.0) / (eps + 1.0)).im;
        let zs = [1e-3, 3e-3, 1e-2];
        let g: std::vec::Vec<f64> = zs
            .iter()
            .map(|&z| halfspace_im_green_perp(&m, len(z), omega, &spec()).unwrap().value)
            .collect();
        let slope = (g[2] / g[0]).ln() / (zs[2] / zs[0]).ln();
        assert!((slope + 3.0).abs() < 0.05, "{slope}");
        // image-dipole limit Im G_zz → Im r_p/(16πk²z³)
        let z = len(1e-3);
        let expect = r0 / (16.0 * PI * k * k * z.powi(3));
        assert!((g[0] / expect - 1.0).abs() < 1e-2, "{} vs {expect}", g[0]);
        // isotropic average is 2/3 of zz in the near field
        let iso = halfspace_im_green(&m, z, omega, Orientation::Isotropic, &spec()).unwrap().value;
        assert!((iso / g[0] - 2.0 / 3.0).abs() < 1e-2);
    }

    #[test]
    fn far_field_is_small_and_oscillating() {
        let m = dielectric(0.05);
        let a = halfspace_im_green_perp(&m, len(30.0), 0.5 * W, &spec()).unwrap();
        let b = halfspace_im_green_perp(&m, len(30.0 + PI), 0.5 * W, &spec()).unwrap();
        assert!(a.converged && b.converged);
        let bulk = 0.5 * W / SPEED_OF_LIGHT / (6.0 * PI);
        assert!(a.value.abs() < 0.1 * bulk);
        // phase 2kz advances by π over Δz = π c/ω at ω = W/2
        assert!(a.value * b.value < 0.0, "{} {}", a.value, b.value);
    }

    #[test]
    fn imaginary_axis_matches_static_image() {
        let m = dielectric(0.05);
        let u = 0.3 * W;
        let z = len(1e-3);
        let k = u / SPEED_OF_LIGHT;
        let eps = m.permittivity_imag(u).unwrap();
        let r = (eps - 1.0) / (eps + 1.0);
        let g = halfspace_green_imag(&m, z, u, Orientation::Perpendicular, &spec()).unwrap().value;
        // k² → −k²
        let expect = -r / (16.0 * PI * k * k * z.powi(3));
        assert!((g / expect - 1.0).abs() < 1e-2);
    }

    #[test]
    fn rejects_bad_arguments() {
        let m = dielectric(0.05);
        assert!(halfspace_im_green_perp(&m, 0.0, W, &spec()).is_err());
        assert!(halfspace_im_green_perp(&m, len(1.0), -W, &spec()).is_err());
        assert!(halfspace_im_green_perp(&dielectric(0.0), len(1.0), W, &spec()).is_err());
    }
}
