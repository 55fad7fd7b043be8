//! Adaptive Gauss–Kronrod quadrature with semi-infinite mappings and a
//! principal-value rule.
//!
//! Every integral is split into panels (finite intervals or a mapped
//! semi-infinite tail). A single global loop bisects whichever piece carries
//! the largest error estimate, so error is balanced across panels. Results
//! that fail to reach the requested tolerance are returned with
//! `converged == false`, never silently.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Kronrod abscissae of the 15-point rule (descending, last is the centre).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Weights of the embedded 7-point Gauss rule (odd Kronrod nodes, then centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Values the integrators can accumulate: real or complex.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
    fn finite(self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn finite(self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Tolerances and limits shared by every integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Truncation point of exponentially weighted integrals, in units of the
    /// decay length (the weight there is `exp(-truncation)`).
    pub truncation: f64,
    /// Relative accuracy is measured against `max(|I|, floor * ∫|f|)`, which
    /// keeps integrals with strong sign cancellation from chasing zero.
    pub cancellation_floor: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_subdivisions: 400,
            truncation: 40.0,
            cancellation_floor: 1e-3,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Result<Self> {
        let spec = Self {
            rel_tol,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::invalid("rel_tol", self.rel_tol, "must lie in (0, 1)"));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::invalid("abs_tol", self.abs_tol, "must be >= 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::invalid(
                "max_subdivisions",
                self.max_subdivisions as f64,
                "must be >= 1",
            ));
        }
        if !(self.truncation > 0.0) {
            return Err(Error::invalid("truncation", self.truncation, "must be > 0"));
        }
        if !(self.cancellation_floor >= 0.0 && self.cancellation_floor < 1.0) {
            return Err(Error::invalid(
                "cancellation_floor",
                self.cancellation_floor,
                "must lie in [0, 1)",
            ));
        }
        Ok(())
    }

    /// Same spec with the relative tolerance divided by `factor`; used for
    /// inner integrals of nested quadratures.
    pub fn tightened(self, factor: f64) -> Self {
        Self {
            rel_tol: (self.rel_tol / factor).max(1e-15),
            abs_tol: self.abs_tol / factor,
            ..self
        }
    }
}

/// Result of a quadrature together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T = f64> {
    pub value: T,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl<T: QuadValue> Integral<T> {
    pub fn exact(value: T) -> Self {
        Self {
            value,
            error: 0.0,
            converged: true,
            evaluations: 0,
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error: self.error * factor.abs(),
            ..self
        }
    }

    /// Sum of two independent integrals; errors add.
    pub fn plus(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error: self.error + other.error,
            converged: self.converged && other.converged,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

/// One piece of an integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Panel {
    Finite(f64, f64),
    /// `[start, ∞)` mapped through `x = start + scale·t/(1-t)`.
    Tail { start: f64, scale: f64 },
}

impl Panel {
    fn mapped_bounds(&self) -> (f64, f64) {
        match *self {
            Panel::Finite(a, b) => (a, b),
            Panel::Tail { .. } => (0.0, 1.0),
        }
    }

    #[inline]
    fn map(&self, t: f64) -> (f64, f64) {
        match *self {
            Panel::Finite(..) => (t, 1.0),
            Panel::Tail { start, scale } => {
                let one_minus = 1.0 - t;
                (start + scale * t / one_minus, scale / (one_minus * one_minus))
            }
        }
    }
}

#[derive(Clone, Copy)]
struct Piece<T> {
    panel: usize,
    a: f64,
    b: f64,
    value: T,
    error: f64,
    l1: f64,
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut scaled = err.abs();
    if resasc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / resasc).powf(1.5);
        scaled = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * resabs;
        if floor > scaled {
            scaled = floor;
        }
    }
    scaled
}

/// Single 15-point Gauss–Kronrod evaluation of a mapped panel piece.
fn kronrod<T, F>(f: &mut F, panel_index: usize, panel: &Panel, a: f64, b: f64) -> Piece<T>
where
    T: QuadValue,
    F: FnMut(usize, f64) -> T,
{
    let mut eval = |t: f64| -> T {
        let (x, jac) = panel.map(t);
        let v = f(panel_index, x);
        if jac == 1.0 {
            v
        } else if v.magnitude() == 0.0 {
            T::zero()
        } else {
            v * jac
        }
    };

    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = eval(center);
    let mut gauss = f_center * WG[3];
    let mut kron = f_center * WGK[7];
    let mut resabs = WGK[7] * f_center.magnitude();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = eval(center - x);
        let f2 = eval(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        kron = kron + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }

    let mean = kron * 0.5;
    let mut resasc = WGK[7] * (f_center - mean).magnitude();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }

    let abs_half = half.abs();
    let value = kron * half;
    let err = rescale_error(
        ((kron - gauss) * half).magnitude(),
        resabs * abs_half,
        resasc * abs_half,
    );
    let error = if value.finite() { err } else { f64::INFINITY };
    Piece {
        panel: panel_index,
        a,
        b,
        value,
        error,
        l1: resabs * abs_half,
    }
}

/// Adaptive integration of a piecewise integrand `f(panel, x)` over `panels`.
pub fn integrate_pieces<T, F>(mut f: F, panels: &[Panel], spec: &QuadratureSpec) -> Integral<T>
where
    T: QuadValue,
    F: FnMut(usize, f64) -> T,
{
    let mut pieces: Vec<Piece<T>> = Vec::with_capacity(panels.len() + 16);
    for (i, panel) in panels.iter().enumerate() {
        let (a, b) = panel.mapped_bounds();
        if b > a {
            pieces.push(kronrod(&mut f, i, panel, a, b));
        }
    }
    let mut evaluations = 15 * pieces.len();
    if pieces.is_empty() {
        return Integral::exact(T::zero());
    }

    loop {
        let mut total = T::zero();
        let mut err = 0.0;
        let mut l1 = 0.0;
        for p in &pieces {
            total = total + p.value;
            err += p.error;
            l1 += p.l1;
        }
        let reference = total.magnitude().max(spec.cancellation_floor * l1);
        let target = spec.abs_tol.max(spec.rel_tol * reference);
        if err <= target {
            return Integral {
                value: total,
                error: err,
                converged: total.finite(),
                evaluations,
            };
        }

        if pieces.len() >= spec.max_subdivisions + panels.len() {
            return Integral {
                value: total,
                error: err,
                converged: false,
                evaluations,
            };
        }

        let (worst, _) = pieces
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| {
                if p.error > acc.1 {
                    (i, p.error)
                } else {
                    acc
                }
            });
        let piece = pieces[worst];
        let mid = 0.5 * (piece.a + piece.b);
        let width = piece.b - piece.a;
        if !(mid > piece.a && mid < piece.b)
            || width <= 1e3 * f64::EPSILON * piece.a.abs().max(piece.b.abs()).max(f64::MIN_POSITIVE)
        {
            return Integral {
                value: total,
                error: err,
                converged: false,
                evaluations,
            };
        }
        let panel = &panels[piece.panel];
        let left = kronrod(&mut f, piece.panel, panel, piece.a, mid);
        let right = kronrod(&mut f, piece.panel, panel, mid, piece.b);
        evaluations += 30;
        pieces[worst] = left;
        pieces.push(right);
    }
}

/// ∫ₐᵇ f(x) dx.
pub fn integrate<T, F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Integral<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if a == b {
        return Integral::exact(T::zero());
    }
    if a > b {
        let r = integrate_pieces(|_, x| f(x), &[Panel::Finite(b, a)], spec);
        return Integral {
            value: r.value * -1.0,
            ..r
        };
    }
    integrate_pieces(|_, x| f(x), &[Panel::Finite(a, b)], spec)
}

/// Integral over consecutive panels between sorted `points`, optionally
/// followed by a semi-infinite tail of the given length scale.
pub fn integrate_breakpoints<T, F>(
    mut f: F,
    points: &[f64],
    tail_scale: Option<f64>,
    spec: &QuadratureSpec,
) -> Integral<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let panels = breakpoint_panels(points, tail_scale);
    integrate_pieces(|_, x| f(x), &panels, spec)
}

pub(crate) fn breakpoint_panels(points: &[f64], tail_scale: Option<f64>) -> Vec<Panel> {
    let mut sorted: Vec<f64> = points.iter().copied().filter(|p| p.is_finite()).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    sorted.dedup();
    let mut panels: Vec<Panel> = sorted
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| Panel::Finite(w[0], w[1]))
        .collect();
    if let (Some(scale), Some(&last)) = (tail_scale, sorted.last()) {
        panels.push(Panel::Tail { start: last, scale });
    }
    panels
}

/// ∫₀^∞ f(t) dt with the map t = scale·x/(1-x).
///
/// Intended for integrands with exponential or power-law decay on the
/// length scale `scale`.
pub fn integrate_semi_infinite<T, F>(f: F, scale: f64, spec: &QuadratureSpec) -> Integral<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_from(f, 0.0, scale, spec)
}

/// ∫ₐ^∞ f(t) dt.
pub fn integrate_from<T, F>(mut f: F, a: f64, scale: f64, spec: &QuadratureSpec) -> Integral<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_pieces(|_, x| f(x), &[Panel::Tail { start: a, scale }], spec)
}

/// Principal value P∫ f(x)/(pole - x) dx over `[lower, upper]`, where
/// `upper` may be `f64::INFINITY` (then `tail_scale` sets the map length).
///
/// The symmetric window `[pole - h, pole + h]` with `h = min(half_width,
/// pole - lower, upper - pole)` is folded onto `∫₀ʰ [f(p-t) - f(p+t)]/t dt`,
/// which is the pole-subtracted integrand; the log remainder of the
/// subtraction vanishes for a symmetric window. The rest of the domain is
/// integrated directly. A pole outside `(lower, upper)` reduces to plain
/// integration.
pub fn principal_value<F>(
    f: F,
    pole: f64,
    half_width: f64,
    lower: f64,
    upper: f64,
    tail_scale: f64,
    spec: &QuadratureSpec,
) -> Integral
where
    F: FnMut(f64) -> f64,
{
    principal_value_with_breakpoints(f, pole, half_width, (lower, upper), tail_scale, &[], spec)
}

/// [`principal_value`] with panel boundaries at `breakpoints`, the places
/// where `f` has narrow structure. Inside the folded window a breakpoint
/// `x` becomes `|x - pole|`.
pub fn principal_value_with_breakpoints<F>(
    mut f: F,
    pole: f64,
    half_width: f64,
    (lower, upper): (f64, f64),
    tail_scale: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Integral
where
    F: FnMut(f64) -> f64,
{
    let inside = pole > lower && pole < upper;
    let h = if inside {
        half_width.min(pole - lower).min(upper - pole).max(0.0)
    } else {
        0.0
    };
    let within = |a: f64, b: f64| {
        let mut pts: Vec<f64> = alloc::vec![a];
        pts.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
        pts
    };

    // kind 0: folded window, 1: regular part
    let mut panels: Vec<(usize, Panel)> = Vec::new();
    let regular = |a: f64, b: f64, panels: &mut Vec<(usize, Panel)>| {
        if upper.is_infinite() && b.is_infinite() {
            let pts = within(a, f64::INFINITY);
            panels.extend(breakpoint_panels(&pts, Some(tail_scale)).into_iter().map(|p| (1, p)));
        } else if b > a {
            let mut pts = within(a, b);
            pts.push(b);
            panels.extend(breakpoint_panels(&pts, None).into_iter().map(|p| (1, p)));
        }
    };
    if inside && h > 0.0 {
        let mut pts: Vec<f64> = alloc::vec![0.0, h];
        pts.extend(breakpoints.iter().map(|&x| (x - pole).abs()).filter(|&t| t > 0.0 && t < h));
        panels.extend(breakpoint_panels(&pts, None).into_iter().map(|p| (0, p)));
        regular(lower, pole - h, &mut panels);
        regular(pole + h, upper, &mut panels);
    } else {
        regular(lower, upper, &mut panels);
    }

    let kinds: Vec<usize> = panels.iter().map(|p| p.0).collect();
    let geometry: Vec<Panel> = panels.iter().map(|p| p.1).collect();
    integrate_pieces(
        |i, x| {
            if kinds[i] == 0 {
                (f(pole - x) - f(pole + x)) / x
            } else {
                f(x) / (pole - x)
            }
        },
        &geometry,
        spec,
    )
}
