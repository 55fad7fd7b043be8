//! Asymptotic power-law coefficients, the attraction/repulsion border and
//! potential-wall geometry.
//!
//! Half space: `U → C4/z⁴` at long and `U → −C3/z³ + C1/z` at short
//! distance. Thin plate of thickness `d`: `U → D5/z⁵` and
//! `U → −D4/z⁴ + D2/z²`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::atom::Atom;
use crate::constants::{EPSILON_0, HBAR, MU_0, SPEED_OF_LIGHT};
use crate::materials::{Material, Resonance};
use crate::potential::{energy, single_wall_energy};
use crate::quad::{integrate_breakpoints, Integral, QuadratureSpec};
use crate::stack::{KernelPoint, LayerStack};
use crate::{Error, Result};

/// 3ħc/(64π²ε₀): C4 = −LONG_RANGE·α(0)·I(ε, μ).
const LONG_RANGE: f64 = 3.0 * HBAR * SPEED_OF_LIGHT / (64.0 * PI * PI * EPSILON_0);

/// Root of the strong-coupling bracket; see [`impedance_root`].
pub const CRITICAL_IMPEDANCE: f64 = 2.259_443;

/// χm/χe at the weak-coupling border.
pub const WEAK_BORDER_RATIO: f64 = 23.0 / 7.0;

/// Which pair of asymptotic laws a coefficient set describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    HalfSpace,
    ThinPlate { thickness: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Retarded,
    Nonretarded,
}

/// (C4, C3, C1) for a half space or (D5, D4, D2) for a thin plate, SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCoefficients {
    pub geometry: Geometry,
    /// C4 (J m⁴) or D5 (J m⁵).
    pub retarded: f64,
    /// C3 (J m³) or D4 (J m⁴); never negative.
    pub electric: f64,
    /// C1 (J m) or D2 (J m²); never negative.
    pub magnetic: f64,
    pub converged: bool,
}

impl AsymptoticCoefficients {
    /// Powers of 1/z of the retarded, electric and magnetic terms.
    pub fn powers(&self) -> (i32, i32, i32) {
        match self.geometry {
            Geometry::HalfSpace => (4, 3, 1),
            Geometry::ThinPlate { .. } => (5, 4, 2),
        }
    }

    /// Asymptotic U(z) in J.
    pub fn energy(&self, regime: Regime, z: f64) -> f64 {
        let (n, e, m) = self.powers();
        match regime {
            Regime::Retarded => self.retarded / z.powi(n),
            Regime::Nonretarded => -self.electric / z.powi(e) + self.magnetic / z.powi(m),
        }
    }

    /// Wall from the short-distance law; `None` without competing terms.
    pub fn wall(&self) -> Option<WallGeometry> {
        match self.geometry {
            Geometry::HalfSpace => wall_geometry(self.electric, self.magnetic),
            Geometry::ThinPlate { .. } => {
                // U = −D4/z⁴ + D2/z²: maximum at z² = 2D4/D2
                if self.electric > 0.0 && self.magnetic > 0.0 {
                    let z = (2.0 * self.electric / self.magnetic).sqrt();
                    Some(WallGeometry {
                        z_max: z,
                        u_max: self.magnetic * self.magnetic / (4.0 * self.electric),
                    })
                } else {
                    None
                }
            }
        }
    }
}

/// Position and height of a potential maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallGeometry {
    pub z_max: f64,
    pub u_max: f64,
}

fn check_static(eps0: f64, mu0: f64) -> Result<()> {
    if !(eps0.is_finite() && eps0 >= 1.0) {
        return Err(Error::invalid("static permittivity", eps0, "must be finite and >= 1"));
    }
    if !(mu0.is_finite() && mu0 >= 1.0) {
        return Err(Error::invalid("static permeability", mu0, "must be finite and >= 1"));
    }
    Ok(())
}

/// The dimensionless v-integral I with C4 = −3ħcα(0)/(64π²ε₀)·I:
///
/// ```text
/// I = ∫₁^∞ dv [(2/v² − 1/v⁴) r_p(v) − r_s(v)/v⁴]
/// ```
///
/// with the static reflection coefficients `r_p = (εv − w)/(εv + w)`,
/// `r_s = (μv − w)/(μv + w)` and `w = √(εμ − 1 + v²)`.
pub fn c4_bracket(eps0: f64, mu0: f64, spec: &QuadratureSpec) -> Result<Integral> {
    check_static(eps0, mu0)?;
    spec.validate()?;
    let (xe, xm) = (eps0 - 1.0, mu0 - 1.0);
    let excess = xe + xm + xe * xm;
    if excess == 0.0 {
        return Ok(Integral::exact(0.0));
    }
    let r = |v: f64, w: f64, chi: f64| {
        let s = (1.0 + chi) * v + w;
        (v * v * chi * (2.0 + chi) - excess) / (s * s)
    };
    let f = |v: f64| {
        let w = (excess + v * v).sqrt();
        let v2 = v * v;
        let v4 = v2 * v2;
        (2.0 / v2 - 1.0 / v4) * r(v, w, xe) - r(v, w, xm) / v4
    };
    let k = excess.sqrt();
    let points = [1.0, 1.0 + 0.1 * k, 1.0 + k, 1.0 + 10.0 * k];
    let out = integrate_breakpoints(f, &points, Some(k.max(1.0)), spec);
    if !out.value.is_finite() {
        return Err(Error::NonFinite("C4 integral"));
    }
    Ok(out)
}

/// C4 from static ε(0), μ(0) and the static polarizability α(0).
pub fn c4_static(eps0: f64, mu0: f64, alpha0: f64, spec: &QuadratureSpec) -> Result<Integral> {
    Ok(c4_bracket(eps0, mu0, spec)?.scaled(-LONG_RANGE * alpha0))
}

/// C4 (J m⁴) for `material` and `atom`.
pub fn c4(material: &Material, atom: &Atom, spec: &QuadratureSpec) -> Result<Integral> {
    let s = material.static_susceptibilities();
    c4_static(s.permittivity(), s.permeability(), atom.static_polarizability(), spec)
}

/// Weak-coupling limit, linear in χe(0) and χm(0).
pub fn c4_weak(chi_e0: f64, chi_m0: f64, alpha0: f64) -> f64 {
    -HBAR * SPEED_OF_LIGHT * alpha0 / (640.0 * PI * PI * EPSILON_0) * (23.0 * chi_e0 - 7.0 * chi_m0)
}

/// (ln(1+x) − x + x²/2)/x³, accurate for small x.
fn log_tail(x: f64) -> f64 {
    if x > 0.5 {
        return (x.ln_1p() - x + 0.5 * x * x) / (x * x * x);
    }
    let mut sum = 0.0;
    let mut p = 1.0;
    for k in 3..64 {
        let term = p / k as f64;
        sum += if k % 2 == 1 { term } else { -term };
        p *= x;
        if p < 1e-18 {
            break;
        }
    }
    sum
}

/// Strong-coupling bracket B(Z), where C4 ≈ −3ħcα(0)/(64π²ε₀)·B(Z).
pub fn strong_bracket(z: f64) -> f64 {
    // −2/Z³ ln(1+Z) + 2/Z² − 1/Z = −2·tail(Z), and likewise for 1/Z
    -2.0 * log_tail(z) - 2.0 * log_tail(1.0 / z) + 4.0 * z.ln_1p() / z - 4.0 / 3.0
}

/// Strong-coupling limit as a function of the static impedance Z = √(μ(0)/ε(0)).
pub fn c4_strong(impedance: f64, alpha0: f64) -> Result<f64> {
    if !(impedance.is_finite() && impedance > 0.0) {
        return Err(Error::invalid("impedance", impedance, "must be finite and > 0"));
    }
    Ok(-LONG_RANGE * alpha0 * strong_bracket(impedance))
}

/// Plain bisection for a sign change of `f` on `[lo, hi]`.
fn bisect<F: FnMut(f64) -> Result<f64>>(mut f: F, lo: f64, hi: f64, rel: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
        if (b - a).abs() <= rel * m.abs() {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Root Z* of the strong-coupling bracket: above it the long-range
/// potential of a strongly magnetodielectric half space is repulsive.
pub fn impedance_root() -> f64 {
    bisect(|z| Ok(strong_bracket(z)), 1.0, 10.0, 1e-14).expect("B changes sign on [1, 10]")
}

/// One point of the C4 = 0 border with both asymptotes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BorderPoint {
    pub permittivity: f64,
    /// μ(0) with C4 = 0.
    pub permeability: f64,
    /// Weak-coupling asymptote 1 + (23/7)(ε(0) − 1).
    pub weak_asymptote: f64,
    /// Strong-coupling asymptote Z*²·ε(0).
    pub strong_asymptote: f64,
    pub converged: bool,
}

/// Upper end of the μ(0) search interval.
pub const BORDER_MU_MAX: f64 = 1e4;

/// μ(0) on the border for a given ε(0), by bisection in ln μ on
/// `[1, BORDER_MU_MAX]` to 1e-6 relative.
pub fn border_point(eps0: f64, spec: &QuadratureSpec) -> Result<BorderPoint> {
    check_static(eps0, 1.0)?;
    let zs = CRITICAL_IMPEDANCE;
    let mut point = BorderPoint {
        permittivity: eps0,
        permeability: 1.0,
        weak_asymptote: 1.0 + WEAK_BORDER_RATIO * (eps0 - 1.0),
        strong_asymptote: zs * zs * eps0,
        converged: true,
    };
    if eps0 == 1.0 {
        return Ok(point);
    }
    let mut ok = true;
    let ln_mu = bisect(
        |l| {
            let r = c4_bracket(eps0, l.exp(), spec)?;
            ok &= r.converged;
            Ok(r.value)
        },
        0.0,
        BORDER_MU_MAX.ln(),
        1e-9,
    )
    .map_err(|e| match e {
        Error::NoBracket { .. } => Error::NoBracket {
            lo: 1.0,
            hi: BORDER_MU_MAX,
        },
        e => e,
    })?;
    point.permeability = ln_mu.exp();
    point.converged = ok;
    Ok(point)
}

/// Border curve over a grid of ε(0) values.
pub fn border_curve(eps_grid: &[f64], spec: &QuadratureSpec) -> Result<Vec<BorderPoint>> {
    eps_grid.iter().map(|&e| border_point(e, spec)).collect()
}

fn frequency_points(material: &Material, atom: &Atom) -> (Vec<f64>, f64) {
    let mut points = alloc::vec![0.0];
    points.extend(atom.transitions().iter().map(|t| t.frequency));
    points.extend(material.characteristic_frequencies());
    let top = points.iter().copied().fold(0.0, f64::max);
    (points, top)
}

/// u-integral over the imaginary axis with breakpoints at every atomic and
/// material frequency.
fn frequency_integral<F>(material: &Material, atom: &Atom, spec: &QuadratureSpec, f: F) -> Result<Integral>
where
    F: Fn(f64, f64, f64) -> f64,
{
    spec.validate()?;
    let (points, top) = frequency_points(material, atom);
    let out = integrate_breakpoints(
        |u: f64| f(u, material.chi_e_imag(u), material.chi_m_imag(u)) * atom.alpha(u),
        &points,
        Some(top),
        spec,
    );
    if !out.value.is_finite() {
        return Err(Error::NonFinite("asymptotic coefficient integral"));
    }
    Ok(out)
}

/// Short-distance coefficients (C3, C1) of a half space.
pub fn c3_c1(material: &Material, atom: &Atom, spec: &QuadratureSpec) -> Result<(Integral, Integral)> {
    let c3 = frequency_integral(material, atom, spec, |_, xe, _| xe / (2.0 + xe))?
        .scaled(HBAR / (16.0 * PI * PI * EPSILON_0));
    let c1 = frequency_integral(material, atom, spec, |u, xe, xm| {
        let eps = 1.0 + xe;
        let sum = 2.0 + xe;
        u * u * (xe / sum + xm / (2.0 + xm) + 2.0 * eps * (xe + xm + xe * xm) / (sum * sum))
    })?
    .scaled(MU_0 * HBAR / (16.0 * PI * PI));
    Ok((c3, c1))
}

/// Single electric and magnetic resonance of a two-level setup, if present.
fn single_resonances(material: &Material) -> Result<(Option<Resonance>, Option<Resonance>)> {
    let one = |r: &[Resonance]| match r {
        [] => Ok(None),
        [x] => Ok(Some(*x)),
        _ => Err(Error::invalid(
            "resonance count",
            r.len() as f64,
            "closed forms need at most one electric and one magnetic resonance",
        )),
    };
    Ok((one(material.electric_resonances())?, one(material.magnetic_resonances())?))
}

/// Closed-form (C3, C1) for a two-level atom and an undamped single-pole
/// material, valid for weak electric response (ωPe ≪ ωTe, ωPe ≪ ωPm).
pub fn c3_c1_closed_form(material: &Material, atom: &Atom) -> Result<(f64, f64)> {
    let t = atom.two_level_transition()?;
    let (e, m) = single_resonances(material)?;
    let w = t.frequency;
    let c3 = e.map_or(0.0, |e| {
        let (p, te) = (e.plasma_frequency(), e.transverse_frequency());
        t.dipole_sq / (96.0 * PI * EPSILON_0) * (p * p) / (te * te) * te / (w + te)
    });
    let c1 = m.map_or(0.0, |m| {
        let (p, tm, sm) = (m.plasma_frequency(), m.transverse_frequency(), m.surface_frequency());
        MU_0 * t.dipole_sq * p * p / (96.0 * PI) * w * (2.0 * w + sm + tm) / ((w + sm) * (w + tm))
    });
    Ok((c3, c1))
}

/// Maximum of −C3/z³ + C1/z.
pub fn wall_geometry(c3: f64, c1: f64) -> Option<WallGeometry> {
    if !(c3 > 0.0 && c1 > 0.0 && c3.is_finite() && c1.is_finite()) {
        return None;
    }
    Some(WallGeometry {
        z_max: (3.0 * c3 / c1).sqrt(),
        u_max: 2.0 / 3.0 * (c1 * c1 * c1 / (3.0 * c3)).sqrt(),
    })
}

/// Wall position and height written directly in the resonance parameters
/// (same regime as [`c3_c1_closed_form`]); `None` unless both an electric
/// and a magnetic resonance are present.
pub fn wall_geometry_closed_form(material: &Material, atom: &Atom) -> Result<Option<WallGeometry>> {
    let t = atom.two_level_transition()?;
    let (Some(e), Some(m)) = single_resonances(material)? else {
        return Ok(None);
    };
    let w = t.frequency;
    let (pe, te) = (e.plasma_frequency(), e.transverse_frequency());
    let (pm, tm, sm) = (m.plasma_frequency(), m.transverse_frequency(), m.surface_frequency());
    let c = SPEED_OF_LIGHT;
    let z_max = c / pm * pe / te
        * (te * (w + tm) / (w * (w + te))).sqrt()
        * (3.0 * (w + sm) / (2.0 * w + sm + tm)).sqrt();
    let shape = w * (2.0 * w + sm + tm) / (3.0 * (w + sm) * (w + tm));
    let u_max = t.dipole_sq * pm.powi(3) / (48.0 * PI * EPSILON_0 * c.powi(3)) * te / pe
        * ((w + te) / te).sqrt()
        * shape.powf(1.5);
    Ok(Some(WallGeometry { z_max, u_max }))
}

/// D5 (J m⁵) of a thin plate from the statics.
pub fn d5(material: &Material, atom: &Atom, d: f64) -> Result<f64> {
    check_thickness(d)?;
    let s = material.static_susceptibilities();
    let (e, m) = (s.permittivity(), s.permeability());
    // (14ε² − 9)/ε − (6μ² − 1)/μ with the ε = μ = 1 zero split off
    let bracket = (23.0 * s.chi_e + 14.0 * s.chi_e * s.chi_e) / e - (7.0 * s.chi_m + 6.0 * s.chi_m * s.chi_m) / m;
    Ok(-HBAR * SPEED_OF_LIGHT * atom.static_polarizability() * d / (160.0 * PI * PI * EPSILON_0) * bracket)
}

fn check_thickness(d: f64) -> Result<()> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::invalid("plate thickness", d, "must be finite and > 0"));
    }
    Ok(())
}

/// Short-distance coefficients (D4, D2) of a thin plate.
pub fn d4_d2(material: &Material, atom: &Atom, d: f64, spec: &QuadratureSpec) -> Result<(Integral, Integral)> {
    check_thickness(d)?;
    let d4 = frequency_integral(material, atom, spec, |_, xe, _| xe * (2.0 + xe) / (1.0 + xe))?
        .scaled(3.0 * HBAR * d / (64.0 * PI * PI * EPSILON_0));
    let d2 = frequency_integral(material, atom, spec, |u, xe, xm| {
        let eps = 1.0 + xe;
        u * u * (xe * (2.0 + xe) / eps + xm * (2.0 + xm) / (1.0 + xm) + 2.0 * (xe + xm + xe * xm) / eps)
    })?
    .scaled(MU_0 * HBAR * d / (64.0 * PI * PI));
    Ok((d4, d2))
}

/// (C4, C3, C1).
pub fn half_space_asymptotics(material: &Material, atom: &Atom, spec: &QuadratureSpec) -> Result<AsymptoticCoefficients> {
    let long = c4(material, atom, spec)?;
    let (c3, c1) = c3_c1(material, atom, spec)?;
    Ok(AsymptoticCoefficients {
        geometry: Geometry::HalfSpace,
        retarded: long.value,
        electric: c3.value,
        magnetic: c1.value,
        converged: long.converged && c3.converged && c1.converged,
    })
}

/// (D5, D4, D2).
pub fn thin_plate_asymptotics(
    material: &Material,
    atom: &Atom,
    d: f64,
    spec: &QuadratureSpec,
) -> Result<AsymptoticCoefficients> {
    let long = d5(material, atom, d)?;
    let (d4, d2) = d4_d2(material, atom, d, spec)?;
    Ok(AsymptoticCoefficients {
        geometry: Geometry::ThinPlate { thickness: d },
        retarded: long,
        electric: d4.value,
        magnetic: d2.value,
        converged: d4.converged && d2.converged,
    })
}

/// Full potential of a plate treated to first order in its thickness.
pub fn thin_plate_energy(
    material: &Material,
    atom: &Atom,
    d: f64,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    check_thickness(d)?;
    single_wall_energy(material, atom, z, spec, |p| p.thin_plate(d))
}

/// Half-space reflection coefficients to first order in χe, χm.
fn linear_half_space(p: &KernelPoint) -> (f64, f64) {
    let x = (p.u / (p.b * SPEED_OF_LIGHT)).powi(2);
    let s = 0.5 * x * (p.chi_e + p.chi_m);
    (0.5 * (p.chi_m - s), 0.5 * (p.chi_e - s))
}

/// Half-space potential to first order in the susceptibilities.
pub fn weak_half_space_energy(material: &Material, atom: &Atom, z: f64, spec: &QuadratureSpec) -> Result<Integral> {
    single_wall_energy(material, atom, z, spec, linear_half_space)
}

/// Thin-plate potential to first order in the susceptibilities. It is the
/// z-derivative of the weak half-space potential times −d, so the half
/// space is the sum of thin slices.
pub fn weak_thin_plate_energy(
    material: &Material,
    atom: &Atom,
    d: f64,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    check_thickness(d)?;
    single_wall_energy(material, atom, z, spec, |p| {
        let (rs, rp) = linear_half_space(p);
        let f = 2.0 * p.b * d;
        (f * rs, f * rp)
    })
}

/// Golden-section maximization of `f` on `[a, b]`.
fn golden_max<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while (b - a).abs() > tol {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 > f2 { (x1, f1) } else { (x2, f2) })
}

/// Interior maximum of a sampled potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallPeak {
    pub z: f64,
    pub energy: f64,
    pub converged: bool,
}

/// Number of log-spaced samples used to locate a wall before refinement.
const WALL_SCAN_POINTS: usize = 24;

/// Locates the potential wall of an atom outside `stack` within
/// `[z_lo, z_hi]`: log-grid scan, then golden section in ln z to 1e-5.
/// `None` when U has no positive interior maximum in the band.
pub fn wall_maximum(
    stack: &LayerStack,
    atom: &Atom,
    z_lo: f64,
    z_hi: f64,
    spec: &QuadratureSpec,
) -> Result<Option<WallPeak>> {
    if !(z_lo > 0.0 && z_hi > z_lo && z_hi.is_finite()) {
        return Err(Error::invalid("z band", z_hi, "need 0 < z_lo < z_hi < ∞"));
    }
    let mut ok = true;
    let mut eval = |lz: f64| -> Result<f64> {
        let r = energy(stack, atom, lz.exp(), spec)?;
        ok &= r.converged;
        Ok(r.value)
    };
    let (l0, l1) = (z_lo.ln(), z_hi.ln());
    let n = WALL_SCAN_POINTS;
    let grid: Vec<f64> = (0..n).map(|i| l0 + (l1 - l0) * i as f64 / (n - 1) as f64).collect();
    let values = grid.iter().map(|&l| eval(l)).collect::<Result<Vec<_>>>()?;
    let (best, &top) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    if best == 0 || best == n - 1 || top <= 0.0 {
        return Ok(None);
    }
    let (lz, u) = golden_max(&mut eval, grid[best - 1], grid[best + 1], 1e-5)?;
    Ok(Some(WallPeak {
        z: lz.exp(),
        energy: u,
        converged: ok,
    }))
}

/// Wall of a free-standing plate for each thickness (`None`: no wall).
pub fn wall_height_vs_thickness(
    material: &Material,
    atom: &Atom,
    thicknesses: &[f64],
    z_band: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<Vec<Option<WallPeak>>> {
    thicknesses
        .iter()
        .map(|&d| wall_maximum(&LayerStack::slab(material.clone(), d)?, atom, z_band.0, z_band.1, spec))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThicknessOptimum {
    Optimum { thickness: f64, wall: WallPeak },
    NoWall,
}

/// Number of log-spaced thickness samples scanned before refinement.
const THICKNESS_SCAN_POINTS: usize = 12;

/// Plate thickness in `[d_lo, d_hi]` maximizing the wall height found in
/// `z_band`: log-d scan followed by golden section in ln d to 1e-3.
pub fn optimal_thickness(
    material: &Material,
    atom: &Atom,
    d_band: (f64, f64),
    z_band: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<ThicknessOptimum> {
    let (d_lo, d_hi) = d_band;
    if !(d_lo > 0.0 && d_hi > d_lo && d_hi.is_finite()) {
        return Err(Error::invalid("thickness band", d_hi, "need 0 < d_lo < d_hi < ∞"));
    }
    if material.is_vacuum() {
        return Ok(ThicknessOptimum::NoWall);
    }
    let height = |ld: f64| -> Result<Option<WallPeak>> {
        wall_maximum(&LayerStack::slab(material.clone(), ld.exp())?, atom, z_band.0, z_band.1, spec)
    };
    let n = THICKNESS_SCAN_POINTS;
    let (l0, l1) = (d_lo.ln(), d_hi.ln());
    let grid: Vec<f64> = (0..n).map(|i| l0 + (l1 - l0) * i as f64 / (n - 1) as f64).collect();
    let peaks = grid.iter().map(|&l| height(l)).collect::<Result<Vec<_>>>()?;
    let h = |p: &Option<WallPeak>| p.map_or(0.0, |w| w.energy);
    let (best, _) = peaks
        .iter()
        .enumerate()
        .max_by(|a, b| h(a.1).total_cmp(&h(b.1)))
        .expect("non-empty grid");
    if peaks[best].is_none() {
        return Ok(ThicknessOptimum::NoWall);
    }
    let (a, b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(n - 1)]);
    let mut last = peaks[best];
    let (ld, _) = golden_max(
        |l| {
            let p = height(l)?;
            let v = h(&p);
            if v > h(&last) {
                last = p;
            }
            Ok(v)
        },
        a,
        b,
        1e-3,
    )?;
    let wall = match (height(ld)?, last) {
        (Some(w), _) => w,
        (None, Some(w)) => w,
        (None, None) => return Ok(ThicknessOptimum::NoWall),
    };
    Ok(ThicknessOptimum::Optimum {
        thickness: ld.exp(),
        wall,
    })
}
