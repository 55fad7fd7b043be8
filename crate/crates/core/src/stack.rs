//! Planar multilayer geometry and generalized reflection coefficients on the
//! imaginary frequency axis.
//!
//! Layers are numbered `0..=n` along +z. The two outermost layers are
//! semi-infinite; the atom sits in the vacuum layer `j`. Coordinates inside
//! layer `j` run from its left boundary (`z = 0`) to its right boundary
//! (`z = d_j`); for an outer atom layer `z` is the distance to the single
//! interface.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::constants::SPEED_OF_LIGHT;
use crate::materials::Material;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    material: Material,
    thickness: Option<f64>,
}

impl Layer {
    pub fn semi_infinite(material: Material) -> Self {
        Self {
            material,
            thickness: None,
        }
    }

    pub fn finite(material: Material, thickness: f64) -> Result<Self> {
        if !(thickness.is_finite() && thickness > 0.0) {
            return Err(Error::invalid("layer thickness", thickness, "must be finite and > 0"));
        }
        Ok(Self {
            material,
            thickness: Some(thickness),
        })
    }

    pub fn material(&self) -> &Material {
        &self.material
    }

    /// `None` for the semi-infinite outer layers.
    pub fn thickness(&self) -> Option<f64> {
        self.thickness
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Boundary at smaller z (reflection from the left sub-stack).
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    S,
    P,
}

/// Reflection coefficients seen from the atom layer and the
/// multiple-reflection denominators `D = 1 − r₋r₊e^{−2bd}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionSet {
    pub rs_minus: f64,
    pub rs_plus: f64,
    pub rp_minus: f64,
    pub rp_plus: f64,
    pub ds: f64,
    pub dp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerStack {
    layers: Vec<Layer>,
    atom_layer: usize,
}

impl LayerStack {
    pub fn new(layers: Vec<Layer>, atom_layer: usize) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::InvalidStack("at least two layers are required"));
        }
        let n = layers.len() - 1;
        if layers[0].thickness.is_some() || layers[n].thickness.is_some() {
            return Err(Error::InvalidStack("outermost layers must be semi-infinite"));
        }
        if layers[1..n].iter().any(|l| l.thickness.is_none()) {
            return Err(Error::InvalidStack("inner layers need a finite thickness"));
        }
        if atom_layer > n {
            return Err(Error::InvalidStack("atom layer index out of range"));
        }
        if !layers[atom_layer].material.is_vacuum() {
            return Err(Error::InvalidStack("the atom layer must be vacuum"));
        }
        Ok(Self { layers, atom_layer })
    }

    /// Atom in vacuum above a semi-infinite medium.
    pub fn half_space(material: Material) -> Self {
        Self {
            layers: alloc::vec![
                Layer::semi_infinite(material),
                Layer::semi_infinite(Material::vacuum()),
            ],
            atom_layer: 1,
        }
    }

    /// Atom in vacuum in front of a free-standing plate of thickness `d`.
    pub fn slab(material: Material, d: f64) -> Result<Self> {
        Self::new(
            alloc::vec![
                Layer::semi_infinite(Material::vacuum()),
                Layer::finite(material, d)?,
                Layer::semi_infinite(Material::vacuum()),
            ],
            2,
        )
    }

    /// Atom in a vacuum gap of width `s` between two half spaces.
    pub fn cavity(left: Material, right: Material, s: f64) -> Result<Self> {
        Self::new(
            alloc::vec![
                Layer::semi_infinite(left),
                Layer::finite(Material::vacuum(), s)?,
                Layer::semi_infinite(right),
            ],
            1,
        )
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn atom_layer(&self) -> usize {
        self.atom_layer
    }

    /// Width of the atom layer; `None` for an outer layer.
    pub fn atom_layer_width(&self) -> Option<f64> {
        self.layers[self.atom_layer].thickness
    }

    /// Stack reflected through z → −z.
    pub fn mirrored(&self) -> Self {
        let mut layers = self.layers.clone();
        layers.reverse();
        Self {
            atom_layer: layers.len() - 1 - self.atom_layer,
            layers,
        }
    }

    /// Stack with ε and μ exchanged in every layer.
    pub fn dual(&self) -> Self {
        Self {
            layers: self
                .layers
                .iter()
                .map(|l| Layer {
                    material: l.material.dual(),
                    thickness: l.thickness,
                })
                .collect(),
            atom_layer: self.atom_layer,
        }
    }

    pub fn is_vacuum(&self) -> bool {
        self.layers.iter().all(|l| l.material.is_vacuum())
    }

    /// Highest and lowest resonance frequency over all layers.
    pub fn resonance_range(&self) -> Option<(f64, f64)> {
        let lo = self
            .layers
            .iter()
            .filter_map(|l| l.material.lowest_resonance())
            .reduce(f64::min)?;
        let hi = self
            .layers
            .iter()
            .filter_map(|l| l.material.highest_resonance())
            .reduce(f64::max)?;
        Some((lo, hi))
    }

    /// Largest static ε(0)μ(0) of any layer.
    pub fn max_static_index_sq(&self) -> f64 {
        self.layers
            .iter()
            .map(|l| {
                let s = l.material.static_susceptibilities();
                s.permittivity() * s.permeability()
            })
            .fold(1.0, f64::max)
    }

    /// Per-layer ε(iu), μ(iu) for one imaginary frequency.
    pub fn response(&self, u: f64) -> Result<StackResponse<'_>> {
        if u.is_nan() || u < 0.0 {
            return Err(Error::NegativeFrequency(u));
        }
        Ok(self.response_unchecked(u))
    }

    pub(crate) fn response_unchecked(&self, u: f64) -> StackResponse<'_> {
        let k2 = (u / SPEED_OF_LIGHT) * (u / SPEED_OF_LIGHT);
        let shifts = self
            .layers
            .iter()
            .map(|l| {
                let chi_e = l.material.chi_e_imag(u);
                let chi_m = l.material.chi_m_imag(u);
                LayerResponse {
                    chi_e,
                    chi_m,
                    dk2: k2 * index_excess(chi_e, chi_m),
                }
            })
            .collect();
        StackResponse {
            stack: self,
            layers: shifts,
        }
    }

    /// Generalized reflection coefficient at one boundary of the atom layer.
    pub fn reflection(&self, side: Side, pol: Polarization, u: f64, q: f64) -> Result<f64> {
        let set = self.reflection_set(u, q)?;
        Ok(match (side, pol) {
            (Side::Minus, Polarization::S) => set.rs_minus,
            (Side::Plus, Polarization::S) => set.rs_plus,
            (Side::Minus, Polarization::P) => set.rp_minus,
            (Side::Plus, Polarization::P) => set.rp_plus,
        })
    }

    /// All coefficients at transverse wave number `q`.
    pub fn reflection_set(&self, u: f64, q: f64) -> Result<ReflectionSet> {
        if q.is_nan() || q < 0.0 {
            return Err(Error::invalid("q", q, "must be >= 0"));
        }
        let b = q.hypot(u / SPEED_OF_LIGHT);
        self.reflection_set_b(u, b)
    }

    /// All coefficients at vacuum decay constant `b ≥ u/c`.
    pub fn reflection_set_b(&self, u: f64, b: f64) -> Result<ReflectionSet> {
        let resp = self.response(u)?;
        if !(b >= u / SPEED_OF_LIGHT * (1.0 - 1e-12)) {
            return Err(Error::invalid("b", b, "must be >= u/c"));
        }
        let set = resp.at(b);
        if [set.rs_minus, set.rs_plus, set.rp_minus, set.rp_plus, set.ds, set.dp]
            .iter()
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite("reflection recursion"));
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, Copy)]
struct LayerResponse {
    chi_e: f64,
    chi_m: f64,
    /// u²(εμ − 1)/c², so that b_l² = b² + dk2.
    dk2: f64,
}

/// εμ − 1 from the susceptibilities.
#[inline]
fn index_excess(chi_e: f64, chi_m: f64) -> f64 {
    chi_e + chi_m + chi_e * chi_m
}

/// A stack evaluated at one imaginary frequency; cheap to query at many b.
#[derive(Debug, Clone)]
pub struct StackResponse<'a> {
    stack: &'a LayerStack,
    layers: Vec<LayerResponse>,
}

impl StackResponse<'_> {
    pub fn permittivity(&self, layer: usize) -> f64 {
        1.0 + self.layers[layer].chi_e
    }

    pub fn permeability(&self, layer: usize) -> f64 {
        1.0 + self.layers[layer].chi_m
    }

    /// max_l ε_l(iu)μ_l(iu).
    pub fn max_index_sq(&self) -> f64 {
        self.layers
            .iter()
            .map(|l| 1.0 + index_excess(l.chi_e, l.chi_m))
            .fold(1.0, f64::max)
    }

    #[inline]
    fn decay(&self, l: usize, b: f64) -> f64 {
        let b2 = b * b + self.layers[l].dk2;
        debug_assert!(b2 >= 0.0);
        b2.sqrt()
    }

    /// Recursion from the outermost layer towards the atom layer.
    fn recurse(&self, side: Side, b: f64) -> (f64, f64) {
        let j = self.stack.atom_layer;
        let n = self.layers.len() - 1;
        // b = 0 happens only at u = q = 0; the ratios then have the finite
        // limit obtained with equal placeholder decay constants.
        let degenerate = b == 0.0;
        let mut rs = 0.0;
        let mut rp = 0.0;
        let b2 = b * b;
        let mut step = |l: usize, nb: usize| {
            let bl = self.decay(l, b);
            let bn = self.decay(nb, b);
            let e = match self.stack.layers[nb].thickness {
                Some(d) => (-2.0 * bn * d).exp(),
                None => 0.0,
            };
            let ln = &self.layers[l];
            let nn = &self.layers[nb];
            // x = X_{l±1} b_l, y = X_l b_{l±1}; x − y is formed from
            // x² − y² so that nearly index-matched layers keep full precision.
            let pair = |xn: f64, xl: f64| -> (f64, f64) {
                if degenerate {
                    return (xn - xl, 2.0 + xn + xl);
                }
                let (x, y) = ((1.0 + xn) * bl, (1.0 + xl) * bn);
                let sq = b2 * (xn - xl) * (2.0 + xn + xl) + (1.0 + xn) * (1.0 + xn) * ln.dk2
                    - (1.0 + xl) * (1.0 + xl) * nn.dk2;
                (sq / (x + y), x + y)
            };
            let (diff, sum) = pair(nn.chi_m, ln.chi_m);
            rs = fresnel_step(diff, sum, e * rs);
            let (diff, sum) = pair(nn.chi_e, ln.chi_e);
            rp = fresnel_step(diff, sum, e * rp);
        };
        match side {
            Side::Minus => {
                for l in 1..=j {
                    step(l, l - 1);
                }
            }
            Side::Plus => {
                for l in (j..n).rev() {
                    step(l, l + 1);
                }
            }
        }
        (rs, rp)
    }

    /// Coefficients at vacuum decay constant `b`.
    pub fn at(&self, b: f64) -> ReflectionSet {
        let (rs_minus, rp_minus) = self.recurse(Side::Minus, b);
        let (rs_plus, rp_plus) = self.recurse(Side::Plus, b);
        let round_trip = match self.stack.atom_layer_width() {
            Some(d) => (-2.0 * b * d).exp(),
            None => 0.0,
        };
        ReflectionSet {
            rs_minus,
            rs_plus,
            rp_minus,
            rp_plus,
            ds: 1.0 - rs_minus * rs_plus * round_trip,
            dp: 1.0 - rp_minus * rp_plus * round_trip,
        }
    }
}

/// One step of the recursion multiplied through by `b_l b_{l±1}`:
/// `diff = x − y`, `sum = x + y` with `x = μ_{l±1} b_l`, `y = μ_l b_{l±1}`
/// (ε for p waves), `er = e^{−2b d}·r`.
#[inline]
fn fresnel_step(diff: f64, sum: f64, er: f64) -> f64 {
    (diff + sum * er) / (sum + diff * er)
}

/// One (u, b) point of the kernel for a single homogeneous medium:
/// vacuum decay constant `b` and medium decay constant `bm`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub u: f64,
    pub b: f64,
    /// ε(iu) − 1.
    pub chi_e: f64,
    /// μ(iu) − 1.
    pub chi_m: f64,
    pub bm: f64,
}

impl KernelPoint {
    pub fn new(m: &Material, u: f64, b: f64) -> Self {
        Self::with_susceptibilities(u, b, m.chi_e_imag(u), m.chi_m_imag(u))
    }

    /// From precomputed ε(iu) − 1 and μ(iu) − 1.
    pub fn with_susceptibilities(u: f64, b: f64, chi_e: f64, chi_m: f64) -> Self {
        let k = u / SPEED_OF_LIGHT;
        let bm2 = b * b + k * k * index_excess(chi_e, chi_m);
        debug_assert!(bm2 >= 0.0);
        Self {
            u,
            b,
            chi_e,
            chi_m,
            bm: bm2.sqrt(),
        }
    }

    pub fn from_q(m: &Material, u: f64, q: f64) -> Self {
        Self::new(m, u, q.hypot(u / SPEED_OF_LIGHT))
    }

    pub fn permittivity(&self) -> f64 {
        1.0 + self.chi_e
    }

    pub fn permeability(&self) -> f64 {
        1.0 + self.chi_m
    }

    /// X²b² − b_M² for X = 1 + χ, without cancellation.
    #[inline]
    fn numerator(&self, chi: f64) -> f64 {
        let k = self.u / SPEED_OF_LIGHT;
        self.b * self.b * chi * (2.0 + chi) - k * k * index_excess(self.chi_e, self.chi_m)
    }

    /// Half-space (r_s, r_p).
    pub fn half_space(&self) -> (f64, f64) {
        let r = |chi: f64| {
            let s = (1.0 + chi) * self.b + self.bm;
            self.numerator(chi) / (s * s)
        };
        (r(self.chi_m), r(self.chi_e))
    }

    /// Plate of thickness `d` (r_s, r_p).
    pub fn slab(&self, d: f64) -> (f64, f64) {
        let (b, bm) = (self.b, self.bm);
        let t = (bm * d).tanh();
        let r = |chi: f64| {
            let xb = (1.0 + chi) * b;
            self.numerator(chi) * t / (2.0 * xb * bm + (xb * xb + bm * bm) * t)
        };
        (r(self.chi_m), r(self.chi_e))
    }

    /// Plate linearized in `bm·d`.
    pub fn thin_plate(&self, d: f64) -> (f64, f64) {
        let r = |chi: f64| self.numerator(chi) * d / (2.0 * (1.0 + chi) * self.b);
        (r(self.chi_m), r(self.chi_e))
    }
}

/// Closed-form half-space coefficients (r_s, r_p) for the atom in vacuum.
pub fn half_space_coefficients(m: &Material, u: f64, q: f64) -> (f64, f64) {
    KernelPoint::from_q(m, u, q).half_space()
}

/// Closed-form coefficients of a free-standing plate of thickness `d`.
pub fn slab_coefficients(m: &Material, d: f64, u: f64, q: f64) -> (f64, f64) {
    KernelPoint::from_q(m, u, q).slab(d)
}

/// Linearized coefficients of an asymptotically thin plate.
pub fn thin_plate_coefficients(m: &Material, d: f64, u: f64, q: f64) -> (f64, f64) {
    KernelPoint::from_q(m, u, q).thin_plate(d)
}

/// Symmetric cavity of gap `s` between two identical half spaces.
pub fn cavity_coefficients(m: &Material, s: f64, u: f64, q: f64) -> ReflectionSet {
    let p = KernelPoint::from_q(m, u, q);
    let (rs, rp) = p.half_space();
    let e = (-2.0 * p.b * s).exp();
    ReflectionSet {
        rs_minus: rs,
        rs_plus: rs,
        rp_minus: rp,
        rp_plus: rp,
        ds: 1.0 - rs * rs * e,
        dp: 1.0 - rp * rp * e,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::Resonance;

    const W: f64 = 2.4e15;

    fn mat(pe: f64, te: f64, pm: f64, tm: f64) -> Material {
        let e = (pe > 0.0).then(|| Resonance::new(pe * W, te * W, 0.001 * W).unwrap());
        let m = (pm > 0.0).then(|| Resonance::new(pm * W, tm * W, 0.001 * W).unwrap());
        Material::drude_lorentz(e, m)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn single_interface_electrostatic_limit() {
        // ε = 2 constant over the sampled range: large ωT, matching ωP
        let m = Material::drude_lorentz(Some(Resonance::new(1e20, 1e20, 0.0).unwrap()), None);
        let s = LayerStack::half_space(m);
        let u = 1e10;
        let rp = s.reflection(Side::Minus, Polarization::P, u, 1e6 * u / SPEED_OF_LIGHT).unwrap();
        assert!((rp - 1.0 / 3.0).abs() < 1e-9, "{rp}");
    }

    #[test]
    fn vacuum_stack_reflects_nothing() {
        let s = LayerStack::new(
            alloc::vec![
                Layer::semi_infinite(Material::vacuum()),
                Layer::finite(Material::vacuum(), 1e-7).unwrap(),
                Layer::finite(Material::vacuum(), 2e-7).unwrap(),
                Layer::semi_infinite(Material::vacuum()),
            ],
            2,
        )
        .unwrap();
        for (u, q) in [(0.0, 0.0), (1e14, 0.0), (1e15, 1e7), (0.0, 3e6)] {
            let r = s.reflection_set(u, q).unwrap();
            assert_eq!((r.rs_minus, r.rs_plus, r.rp_minus, r.rp_plus), (0.0, 0.0, 0.0, 0.0));
            assert_eq!((r.ds, r.dp), (1.0, 1.0));
        }
    }

    #[test]
    fn closed_forms_match_recursion() {
        let m = mat(0.75, 1.03, 2.0, 1.0);
        let hs = LayerStack::half_space(m.clone());
        let d = 0.3 * SPEED_OF_LIGHT / W;
        let slab = LayerStack::slab(m.clone(), d).unwrap();
        let cav = LayerStack::cavity(m.clone(), m.clone(), 15.0 * SPEED_OF_LIGHT / W).unwrap();
        for iu in 0..12 {
            let u = W * 1e-3 * 3f64.powi(iu);
            for iq in 0..12 {
                let q = W / SPEED_OF_LIGHT * 1e-3 * 3f64.powi(iq);
                let r = hs.reflection_set(u, q).unwrap();
                let (s, p) = half_space_coefficients(&m, u, q);
                assert!(rel(r.rs_minus, s) < 1e-11 && rel(r.rp_minus, p) < 1e-11, "{} {} {} {}", r.rs_minus, s, r.rp_minus, p);
                let r = slab.reflection_set(u, q).unwrap();
                let (s, p) = slab_coefficients(&m, d, u, q);
                assert!(rel(r.rs_minus, s) < 1e-11, "{} {}", r.rs_minus, s);
                assert!(rel(r.rp_minus, p) < 1e-11, "{} {} {} {}", r.rp_minus, p, u / W, q * SPEED_OF_LIGHT / W);
                let r = cav.reflection_set(u, q).unwrap();
                let c = cavity_coefficients(&m, 15.0 * SPEED_OF_LIGHT / W, u, q);
                for (a, b) in [
                    (r.rs_minus, c.rs_minus),
                    (r.rs_plus, c.rs_plus),
                    (r.rp_minus, c.rp_minus),
                    (r.rp_plus, c.rp_plus),
                    (r.ds, c.ds),
                    (r.dp, c.dp),
                ] {
                    assert!(rel(a, b) < 1e-11);
                }
            }
        }
    }

    #[test]
    fn half_space_signs() {
        let e = mat(0.75, 1.03, 0.0, 0.0);
        let m = mat(0.0, 0.0, 2.0, 1.0);
        for u in [0.01 * W, W, 30.0 * W] {
            for q in [1e3, 1e6, 1e9] {
                let (s, p) = half_space_coefficients(&e, u, q);
                assert!(s < 0.0 && p > 0.0);
                let (s, p) = half_space_coefficients(&m, u, q);
                assert!(s > 0.0 && p < 0.0);
            }
        }
        assert_eq!(half_space_coefficients(&Material::vacuum(), W, 1e6), (0.0, 0.0));
    }

    #[test]
    fn slab_limits() {
        let m = mat(0.75, 1.03, 2.0, 1.0);
        let u = W;
        let q = 2.0 * W / SPEED_OF_LIGHT;
        let eps = m.eps_imag(u);
        let mu = m.mu_imag(u);
        let bm = (q * q + (u / SPEED_OF_LIGHT).powi(2) * eps * mu).sqrt();
        let (hs, hp) = half_space_coefficients(&m, u, q);
        let (ss, sp) = slab_coefficients(&m, 10.0 / bm, u, q);
        assert!((hs - ss).abs() < 1e-8 && (hp - sp).abs() < 1e-8);

        // The linearization error is first order in x = bm·d with slope
        // (X² + bm²)/(2X·bm), X = μb or εb.
        let b = q.hypot(u / SPEED_OF_LIGHT);
        for x in [1e-4, 1e-6] {
            let d = x / bm;
            let (ss, sp) = slab_coefficients(&m, d, u, q);
            let (ts, tp) = thin_plate_coefficients(&m, d, u, q);
            for (slab, thin, xb) in [(ss, ts, mu * b), (sp, tp, eps * b)] {
                let predicted = x * (xb * xb + bm * bm) / (2.0 * xb * bm);
                assert!((rel(slab, thin) / predicted - 1.0).abs() < 10.0 * x);
            }
        }

        let (ss, sp) = slab_coefficients(&m, 1e-30, u, q);
        assert!(ss.abs() < 1e-20 && sp.abs() < 1e-20);
    }

    #[test]
    fn multiple_reflection_series() {
        let m = mat(0.75, 1.03, 2.0, 1.0);
        let s = 15.0 * SPEED_OF_LIGHT / W;
        let (u, q) = (0.2 * W, 0.1 * W / SPEED_OF_LIGHT);
        let c = cavity_coefficients(&m, s, u, q);
        let b = q.hypot(u / SPEED_OF_LIGHT);
        let ratio = c.rp_minus * c.rp_plus * (-2.0 * b * s).exp();
        assert!(ratio.abs() < 1.0);
        let partial: f64 = (0..200).map(|n| ratio.powi(n)).sum();
        assert!(rel(partial, 1.0 / c.dp) < 1e-14);
    }

    #[test]
    fn mirrored_swaps_sides() {
        let m = mat(0.75, 1.03, 0.0, 0.0);
        let s = LayerStack::new(
            alloc::vec![
                Layer::semi_infinite(m.clone()),
                Layer::finite(Material::vacuum(), 1e-7).unwrap(),
                Layer::finite(mat(0.0, 0.0, 2.0, 1.0), 5e-8).unwrap(),
                Layer::semi_infinite(Material::vacuum()),
            ],
            1,
        )
        .unwrap();
        let r = s.reflection_set(W, 1e7).unwrap();
        let rm = s.mirrored().reflection_set(W, 1e7).unwrap();
        assert_eq!(r.rs_minus, rm.rs_plus);
        assert_eq!(r.rp_plus, rm.rp_minus);
        assert!(rel(r.dp, rm.dp) < 1e-15);
    }

    #[test]
    fn invalid_stacks_rejected() {
        let m = mat(0.75, 1.03, 0.0, 0.0);
        assert!(LayerStack::new(alloc::vec![Layer::semi_infinite(m.clone())], 0).is_err());
        assert!(LayerStack::new(
            alloc::vec![Layer::semi_infinite(Material::vacuum()), Layer::semi_infinite(m.clone())],
            1
        )
        .is_err());
        assert!(LayerStack::new(
            alloc::vec![
                Layer::semi_infinite(m.clone()),
                Layer::semi_infinite(Material::vacuum()),
                Layer::semi_infinite(m.clone()),
            ],
            1
        )
        .is_err());
        assert!(Layer::finite(m.clone(), 0.0).is_err());
        assert!(LayerStack::half_space(m).reflection_set(-1.0, 0.0).is_err());
    }
}
