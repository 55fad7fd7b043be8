//! Ground-state van der Waals potential and Casimir–Polder force in a
//! planar multilayer.
//!
//! With `q dq = b db` the potential of an atom at distance `z` from the
//! boundaries of its vacuum layer reads
//!
//! ```text
//! U = ħμ₀/(8π²) ∫₀^∞ du α(iu) ∫_{u/c}^∞ db
//!       { e^{−2bz₋} [u² r₋ˢ/Dˢ − (2b²c² − u²) r₋ᵖ/Dᵖ] + (same for +) }
//! ```
//!
//! where `z₋ = z`, `z₊ = d − z`. The inner integral is mapped to
//! `t = 2(b − u/c)z_near` so its weight is `e^{−t}`, and truncated at
//! `t = spec.truncation`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::atom::{strength_from_dipole_sq, Atom};
use crate::constants::{HBAR, MU_0, SPEED_OF_LIGHT};
use crate::materials::Material;
use crate::quad::{breakpoint_panels, integrate_pieces, Integral, Panel, QuadratureSpec};
use crate::stack::{KernelPoint, LayerStack};
use crate::{Error, Result};

pub(crate) const PREFACTOR: f64 = HBAR * MU_0 / (8.0 * PI * PI);

/// Potential and force at one position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSample {
    /// Position inside the atom layer (m).
    pub z: f64,
    /// U(z) in J.
    pub energy: f64,
    /// F(z) = −dU/dz in N.
    pub force: f64,
    /// Quadrature error estimate of `energy` (J).
    pub energy_error: f64,
    /// Propagated error estimate of `force` (N).
    pub force_error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

/// How energies and forces are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Joules and newtons.
    #[default]
    Si,
    /// U/(ħω₁₀β) and F·(c/ω₁₀)/(ħω₁₀β), with ω₁₀ the lowest transition and
    /// β = ω₁₀²|d₁₀|²/(3πħε₀c³) its dimensionless dipole strength.
    Dimensionless,
}

impl Normalization {
    /// Energy unit in J.
    pub fn energy_unit(&self, atom: &Atom) -> f64 {
        match self {
            Normalization::Si => 1.0,
            Normalization::Dimensionless => {
                let t = lowest(atom);
                HBAR * t.frequency * strength_from_dipole_sq(t.dipole_sq, t.frequency)
            }
        }
    }

    /// Length unit in m.
    pub fn length_unit(&self, atom: &Atom) -> f64 {
        match self {
            Normalization::Si => 1.0,
            Normalization::Dimensionless => SPEED_OF_LIGHT / lowest(atom).frequency,
        }
    }

    pub fn force_unit(&self, atom: &Atom) -> f64 {
        self.energy_unit(atom) / self.length_unit(atom)
    }
}

fn lowest(atom: &Atom) -> crate::atom::Transition {
    *atom
        .transitions()
        .iter()
        .min_by(|a, b| a.frequency.total_cmp(&b.frequency))
        .expect("atoms have at least one transition")
}

/// Sampled potential curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCurve {
    pub samples: Vec<PotentialSample>,
}

impl PotentialCurve {
    pub fn converged(&self) -> bool {
        self.samples.iter().all(|s| s.converged)
    }
}

/// Everything the integration engine needs to place breakpoints.
pub(crate) struct Hints {
    /// Frequencies with structure on the imaginary axis (rad/s).
    frequencies: Vec<f64>,
    /// Layer thicknesses (m).
    lengths: Vec<f64>,
}

impl Hints {
    fn new(atom: &Atom, materials: &[&Material], lengths: Vec<f64>) -> Self {
        let atomic: Vec<f64> = atom.transitions().iter().map(|t| t.frequency).collect();
        Self::with_frequencies(atomic, materials, lengths)
    }

    pub(crate) fn with_frequencies(atomic: Vec<f64>, materials: &[&Material], lengths: Vec<f64>) -> Self {
        let mut frequencies = atomic;
        for m in materials {
            for r in m.electric_resonances().iter().chain(m.magnetic_resonances()) {
                frequencies.push(r.transverse_frequency());
                frequencies.push(r.longitudinal_frequency());
            }
        }
        Self {
            frequencies,
            lengths,
        }
    }

    fn max_frequency(&self) -> f64 {
        self.frequencies.iter().copied().fold(0.0, f64::max)
    }
}

/// Distances from the atom to the two walls of its layer.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Walls {
    pub(crate) minus: Option<f64>,
    pub(crate) plus: Option<f64>,
}

impl Walls {
    fn near(&self) -> f64 {
        match (self.minus, self.plus) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => f64::INFINITY,
        }
    }
}

/// Core double integral `ħμ₀/(8π²) ∫du w(u) ∫db e^{−2bz}·kernel`.
/// `prepare(u)` caches per-frequency data and returns the largest εμ among
/// the media; `kernel(&data, u, b)` returns the brackets for the minus and
/// plus walls, for the potential `[u² rˢ/Dˢ − (2b²c² − u²) rᵖ/Dᵖ]`.
pub(crate) fn engine<P, W, Prep, Kern>(
    polarizability: W,
    hints: &Hints,
    walls: Walls,
    spec: &QuadratureSpec,
    prepare: Prep,
    kernel: Kern,
) -> Integral
where
    W: Fn(f64) -> f64,
    Prep: Fn(f64) -> (P, f64),
    Kern: Fn(&P, f64, f64) -> (f64, f64),
{
    let zn = walls.near();
    let inner_spec = spec.tightened(10.0);
    let t_max = spec.truncation;
    let mut inner_ok = true;
    let mut inner_evals = 0usize;

    let light = SPEED_OF_LIGHT / (2.0 * zn);
    let scale = hints.max_frequency().min(light).max(f64::MIN_POSITIVE);
    let mut points: Vec<f64> = alloc::vec![0.0];
    for k in -3..=2 {
        points.push(scale * 10f64.powi(k));
    }
    points.extend(hints.frequencies.iter().copied().filter(|&w| w < 100.0 * scale));
    if light < 100.0 * scale {
        points.push(light);
    }
    let outer_panels = breakpoint_panels(&points, Some(100.0 * scale));

    let mut inner_points: Vec<f64> = Vec::with_capacity(16);
    let outer = integrate_pieces(
        |_, u: f64| -> f64 {
            if u == 0.0 {
                return 0.0;
            }
            let k = u / SPEED_OF_LIGHT;
            let weight = (-2.0 * k * zn).exp();
            let alpha = polarizability(u);
            if weight == 0.0 || alpha == 0.0 {
                return 0.0;
            }
            let (data, index_sq) = prepare(u);

            inner_points.clear();
            inner_points.push(0.0);
            inner_points.push(t_max);
            let t_m = 2.0 * k * zn * (index_sq - 1.0).max(0.0).sqrt();
            for f in [0.1, 1.0, 10.0] {
                inner_points.push(f * t_m);
            }
            inner_points.extend(hints.lengths.iter().map(|d| 2.0 * zn / d));
            inner_points.retain(|&t| t >= 0.0 && t <= t_max);
            let panels: Vec<Panel> = breakpoint_panels(&inner_points, None);

            let inner = integrate_pieces(
                |_, t: f64| -> f64 {
                    let b = k + t / (2.0 * zn);
                    let (gm, gp) = kernel(&data, u, b);
                    let mut s = 0.0;
                    if let Some(zm) = walls.minus {
                        s += gm * (-2.0 * b * (zm - zn)).exp();
                    }
                    if let Some(zp) = walls.plus {
                        s += gp * (-2.0 * b * (zp - zn)).exp();
                    }
                    (-t).exp() * s
                },
                &panels,
                &inner_spec,
            );
            inner_ok &= inner.converged;
            inner_evals += inner.evaluations;
            alpha * weight / (2.0 * zn) * inner.value
        },
        &outer_panels,
        spec,
    );

    Integral {
        value: PREFACTOR * outer.value,
        error: PREFACTOR * outer.error,
        converged: outer.converged && inner_ok,
        evaluations: outer.evaluations + inner_evals,
    }
}

#[inline]
fn bracket(u: f64, b: f64, rs: f64, rp: f64) -> f64 {
    let bc = b * SPEED_OF_LIGHT;
    u * u * rs - (2.0 * bc * bc - u * u) * rp
}

fn check_spec(spec: &QuadratureSpec) -> Result<()> {
    spec.validate()
}

fn check_z(z: f64, limit: Option<f64>) -> Result<()> {
    let inside = z.is_finite() && z > 0.0 && limit.map_or(true, |d| z < d);
    if !inside {
        return Err(Error::OutsideLayer {
            z,
            limit: limit.unwrap_or(f64::INFINITY),
        });
    }
    Ok(())
}

/// The stack with the atom layer not at index 0 (mirroring if needed).
fn oriented(stack: &LayerStack) -> alloc::borrow::Cow<'_, LayerStack> {
    if stack.atom_layer() == 0 {
        alloc::borrow::Cow::Owned(stack.mirrored())
    } else {
        alloc::borrow::Cow::Borrowed(stack)
    }
}

/// U(z) only. For an atom in an outer layer `z` is the distance to the
/// nearest interface; inside a finite layer it is measured from the layer's
/// left boundary.
pub fn energy(stack: &LayerStack, atom: &Atom, z: f64, spec: &QuadratureSpec) -> Result<Integral> {
    check_spec(spec)?;
    let stack = oriented(stack);
    let width = stack.atom_layer_width();
    check_z(z, width)?;
    if stack.is_vacuum() {
        return Ok(Integral::exact(0.0));
    }
    let n = stack.layers().len() - 1;
    let j = stack.atom_layer();
    let walls = match width {
        Some(d) => Walls {
            minus: Some(z),
            plus: Some(d - z),
        },
        None => Walls {
            minus: Some(z),
            plus: None,
        },
    };
    debug_assert!(width.is_some() || j == n);

    let materials: Vec<&Material> = stack.layers().iter().map(|l| l.material()).collect();
    let lengths = stack
        .layers()
        .iter()
        .enumerate()
        .filter(|(l, _)| *l != j)
        .filter_map(|(_, l)| l.thickness())
        .collect();
    let hints = Hints::new(atom, &materials, lengths);
    let stack = &*stack;
    let value = engine(
        |u| atom.alpha(u),
        &hints,
        walls,
        spec,
        |u| {
            let r = stack.response_unchecked(u);
            let idx = r.max_index_sq();
            (r, idx)
        },
        |r, u, b| {
            let s = r.at(b);
            (
                bracket(u, b, s.rs_minus / s.ds, s.rp_minus / s.dp),
                bracket(u, b, s.rs_plus / s.ds, s.rp_plus / s.dp),
            )
        },
    );
    if !value.value.is_finite() {
        return Err(Error::NonFinite("potential quadrature"));
    }
    Ok(value)
}

/// Potential of a single homogeneous wall described by a closed-form
/// reflection law, e.g. [`KernelPoint::thin_plate`].
pub fn single_wall_energy<R>(
    material: &Material,
    atom: &Atom,
    z: f64,
    spec: &QuadratureSpec,
    reflect: R,
) -> Result<Integral>
where
    R: Fn(&KernelPoint) -> (f64, f64),
{
    check_spec(spec)?;
    check_z(z, None)?;
    if material.is_vacuum() {
        return Ok(Integral::exact(0.0));
    }
    let hints = Hints::new(atom, &[material], Vec::new());
    let value = engine(
        |u| atom.alpha(u),
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
            let point = KernelPoint::with_susceptibilities(u, b, p.chi_e, p.chi_m);
            let (rs, rp) = reflect(&point);
            (bracket(u, b, rs, rp), 0.0)
        },
    );
    if !value.value.is_finite() {
        return Err(Error::NonFinite("potential quadrature"));
    }
    Ok(value)
}

/// Five-point central difference of `energy_at` with step `h`.
fn five_point<E>(z: f64, h: f64, mut energy_at: E) -> Result<(f64, f64, bool, usize)>
where
    E: FnMut(f64) -> Result<Integral>,
{
    let mut vals = [0.0; 4];
    let mut err = 0.0;
    let mut ok = true;
    let mut evals = 0;
    for (i, k) in [-2.0, -1.0, 1.0, 2.0].iter().enumerate() {
        let r = energy_at(z + k * h)?;
        vals[i] = r.value;
        err += [1.0, 8.0, 8.0, 1.0][i] * r.error;
        ok &= r.converged;
        evals += r.evaluations;
    }
    let force = -(vals[0] - 8.0 * vals[1] + 8.0 * vals[2] - vals[3]) / (12.0 * h);
    Ok((force, err / (12.0 * h), ok, evals))
}

fn sample_with<E>(z: f64, h: f64, mut energy_at: E) -> Result<PotentialSample>
where
    E: FnMut(f64) -> Result<Integral>,
{
    let u = energy_at(z)?;
    let (force, force_error, ok, evals) = five_point(z, h, &mut energy_at)?;
    Ok(PotentialSample {
        z,
        energy: u.value,
        force,
        energy_error: u.error,
        force_error,
        converged: u.converged && ok,
        evaluations: u.evaluations + evals,
    })
}

/// U and F for an atom inside a finite vacuum layer (cavity geometry).
pub fn potential_in_cavity(
    stack: &LayerStack,
    atom: &Atom,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<PotentialSample> {
    let d = stack
        .atom_layer_width()
        .ok_or(Error::InvalidStack("the atom layer is not a finite layer"))?;
    check_z(z, Some(d))?;
    let h = z.min(d - z) / 100.0;
    sample_with(z, h, |x| energy(stack, atom, x, spec))
}

/// U and F for an atom in a semi-infinite outer vacuum layer.
pub fn potential_outside(
    stack: &LayerStack,
    atom: &Atom,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<PotentialSample> {
    if stack.atom_layer_width().is_some() {
        return Err(Error::InvalidStack("the atom layer is not an outer layer"));
    }
    check_z(z, None)?;
    sample_with(z, z / 100.0, |x| energy(stack, atom, x, spec))
}

/// Dispatches on the atom layer type.
pub fn potential(
    stack: &LayerStack,
    atom: &Atom,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<PotentialSample> {
    if stack.atom_layer_width().is_some() {
        potential_in_cavity(stack, atom, z, spec)
    } else {
        potential_outside(stack, atom, z, spec)
    }
}

/// Smallest admissible sampling distance in units of c/ω_A⁺.
pub const MIN_REDUCED_DISTANCE: f64 = 1e-4;

/// Samples the potential on a strictly increasing grid.
pub fn sample_curve(
    stack: &LayerStack,
    atom: &Atom,
    z_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<PotentialCurve> {
    validate_grid(stack, atom, z_grid)?;
    let samples = z_grid
        .iter()
        .map(|&z| potential(stack, atom, z, spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(PotentialCurve { samples })
}

/// Grid checks shared with parallel drivers: non-empty, strictly
/// increasing, inside the atom layer and above the short-distance floor.
pub fn validate_grid(stack: &LayerStack, atom: &Atom, z_grid: &[f64]) -> Result<()> {
    if z_grid.is_empty() {
        return Err(Error::invalid("z grid", 0.0, "must not be empty"));
    }
    if z_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("z grid", f64::NAN, "must be strictly increasing"));
    }
    let floor = MIN_REDUCED_DISTANCE * SPEED_OF_LIGHT / atom.highest_transition();
    let width = stack.atom_layer_width();
    for &z in z_grid {
        check_z(z, width)?;
        let near = width.map_or(z, |d| z.min(d - z));
        if near < floor {
            return Err(Error::invalid(
                "z",
                z,
                "closer to a wall than 1e-4 c/ω_A⁺ (outside the macroscopic regime)",
            ));
        }
    }
    Ok(())
}
