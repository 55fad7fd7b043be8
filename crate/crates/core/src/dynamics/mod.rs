//! Excited-state dynamics of a two-level atom near a half space:
//! body-induced shifts and widths, the resonant near-field force and the
//! population-weighted force transient.
//!
//! Level 0 is the ground state and level 1 the excited state. Forces are
//! positive away from the surface.

mod force;
mod green;
mod spectrum;

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

pub use force::{
    ground_state_force, off_resonant_force, off_resonant_width_correction, resonant_force_nearfield, ProfileVariant,
};
pub use green::{halfspace_green_imag, halfspace_im_green, halfspace_im_green_perp, halfspace_re_green, Orientation};
pub use spectrum::{
    free_space_rate, level_shift, level_width, self_consistent_spectrum, DynamicSpectrum, MAX_ITERATIONS, RELAXATION,
    SPECTRUM_TOLERANCE,
};

use crate::atom::{Atom, DipoleStrength};
use crate::materials::Material;
use crate::quad::QuadratureSpec;
use crate::{Error, Result};

/// Downward decay rates Γₙᵐ (n → m, m < n) of a ladder atom.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderRates {
    branching: Vec<Vec<f64>>,
    totals: Vec<f64>,
}

impl LadderRates {
    /// `branching[n][m]` is the rate from level n to level m. Only m < n may
    /// be nonzero: upward entries would close a repopulation loop.
    pub fn new(branching: Vec<Vec<f64>>) -> Result<Self> {
        let n = branching.len();
        if n == 0 {
            return Err(Error::invalid("levels", 0.0, "need at least one level"));
        }
        for (i, row) in branching.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid("branching row length", row.len() as f64, "matrix must be square"));
            }
            for (j, &g) in row.iter().enumerate() {
                if !(g.is_finite() && g >= 0.0) {
                    return Err(Error::invalid("decay rate", g, "must be finite and ≥ 0"));
                }
                if j >= i && g != 0.0 {
                    return Err(Error::invalid("decay rate", g, "only downward rates (m < n) are allowed"));
                }
            }
        }
        let totals = branching.iter().map(|row| row.iter().sum()).collect();
        Ok(Self { branching, totals })
    }

    /// A two-level atom with excited-state width Γ₁.
    pub fn two_level(gamma: f64) -> Result<Self> {
        Self::new(alloc::vec![alloc::vec![0.0, 0.0], alloc::vec![gamma, 0.0]])
    }

    pub fn levels(&self) -> usize {
        self.totals.len()
    }

    /// Total width Γₙ = Σₘ Γₙᵐ.
    pub fn width(&self, level: usize) -> f64 {
        self.totals[level]
    }

    /// Mode amplitudes A[m][j] of σₘ(t) = Σⱼ A[m][j] e^{−Γⱼt} for σ(0) = δₘₗ.
    fn amplitudes(&self, initial: usize) -> Result<Vec<Vec<f64>>> {
        let n = self.levels();
        let g = &self.totals;
        let mut a = alloc::vec![alloc::vec![0.0; n]; n];
        a[initial][initial] = 1.0;
        for m in (0..initial).rev() {
            for j in m + 1..=initial {
                let num: f64 = (m + 1..=initial).map(|k| self.branching[k][m] * a[k][j]).sum();
                if num == 0.0 {
                    continue;
                }
                if g[m] == g[j] {
                    return Err(Error::DegenerateRates);
                }
                a[m][j] = num / (g[m] - g[j]);
            }
            a[m][m] = -a[m][m + 1..=initial].iter().sum::<f64>();
        }
        Ok(a)
    }
}

/// Populations σₘₘ(t) for the atom prepared in level `initial`.
pub fn population_dynamics(rates: &LadderRates, initial: usize, t: f64) -> Result<Vec<f64>> {
    if initial >= rates.levels() {
        return Err(Error::invalid("initial level", initial as f64, "no such level"));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid("time", t, "must be finite and ≥ 0"));
    }
    let a = rates.amplitudes(initial)?;
    let decay: Vec<f64> = rates.totals.iter().map(|g| (-g * t).exp()).collect();
    Ok(a
        .iter()
        .map(|row| row.iter().zip(&decay).map(|(c, e)| c * e).sum::<f64>().max(0.0))
        .collect())
}

/// [σ₀₀, σ₁₁] for a two-level atom starting in the excited state.
pub fn two_level_populations(gamma: f64, t: f64) -> [f64; 2] {
    let s1 = (-gamma * t).exp();
    [1.0 - s1, s1]
}

/// Position-dependent force components of the two-level atom (N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceComponents {
    /// F₀ = F₀ᵒʳ.
    pub ground: f64,
    /// F₁ʳ.
    pub resonant: f64,
    /// F₁ᵒʳ.
    pub excited_off_resonant: f64,
}

impl ForceComponents {
    /// F₁ = F₁ʳ + F₁ᵒʳ.
    pub fn excited(&self) -> f64 {
        self.resonant + self.excited_off_resonant
    }

    /// ⟨F⟩ for the given excited-state population.
    pub fn mean(&self, excited_population: f64) -> f64 {
        excited_population * self.excited() + (1.0 - excited_population) * self.ground
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub excited_population: f64,
    pub force: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceTrajectory {
    pub spectrum: DynamicSpectrum,
    pub components: ForceComponents,
    pub points: Vec<TrajectoryPoint>,
    pub converged: bool,
}

/// Force components for a given spectrum, perpendicular dipole.
pub fn force_components(
    atom: &Atom,
    material: &Material,
    spectrum: &DynamicSpectrum,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<(ForceComponents, bool)> {
    let o = Orientation::Perpendicular;
    let f0 = off_resonant_force(atom, material, spectrum, z, 0, o, spec)?;
    let resonant = resonant_force_nearfield(atom, material, spectrum, z)?;
    Ok((
        ForceComponents {
            ground: f0.value,
            resonant,
            // α₁ = −α₀ for two levels
            excited_off_resonant: -f0.value,
        },
        f0.converged,
    ))
}

/// ⟨F(t)⟩ = σ₁₁(t)(F₁ʳ + F₁ᵒʳ) + σ₀₀(t)F₀ for an atom excited at t = 0,
/// with the self-consistent spectrum at `z`.
pub fn force_trajectory(
    atom: &Atom,
    material: &Material,
    z: f64,
    times: &[f64],
    spec: &QuadratureSpec,
) -> Result<ForceTrajectory> {
    let spectrum = self_consistent_spectrum(atom, material, z, Orientation::Perpendicular, spec)?;
    let (components, ok) = force_components(atom, material, &spectrum, z, spec)?;
    let gamma = spectrum.widths[1];
    let points = times
        .iter()
        .map(|&t| {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::invalid("time", t, "must be finite and ≥ 0"));
            }
            let s1 = two_level_populations(gamma, t)[1];
            Ok(TrajectoryPoint {
                t,
                excited_population: s1,
                force: components.mean(s1),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ForceTrajectory {
        spectrum,
        components,
        points,
        converged: ok && spectrum.converged,
    })
}

/// One point of an F₁ʳ dispersion profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    /// Bare ω₁₀ (rad/s).
    pub frequency: f64,
    pub variant: ProfileVariant,
    pub force: f64,
    pub converged: bool,
}

/// F₁ʳ at fixed z as a function of the bare transition frequency, for each
/// requested variant. The atom's dipole strength is held fixed.
pub fn resonant_force_profile(
    strength: DipoleStrength,
    material: &Material,
    z: f64,
    frequencies: &[f64],
    variants: &[ProfileVariant],
    spec: &QuadratureSpec,
) -> Result<Vec<ProfilePoint>> {
    let o = Orientation::Perpendicular;
    let mut out = Vec::with_capacity(frequencies.len() * variants.len());
    for &w in frequencies {
        let atom = Atom::two_level(w, strength)?;
        let needs_full = variants
            .iter()
            .any(|v| matches!(v, ProfileVariant::Full | ProfileVariant::ShiftOnly));
        let full = if needs_full {
            self_consistent_spectrum(&atom, material, z, o, spec)?
        } else {
            DynamicSpectrum::perturbative(w)
        };
        let bare = if variants.contains(&ProfileVariant::BroadeningOnly) {
            level_width(&atom, material, z, w, o, spec)?
        } else {
            crate::quad::Integral::exact(0.0)
        };
        for &v in variants {
            let s = v.select(&full, bare.value);
            let converged = match v {
                ProfileVariant::Full | ProfileVariant::ShiftOnly => full.converged,
                ProfileVariant::BroadeningOnly => bare.converged,
                ProfileVariant::Perturbative => true,
            };
            out.push(ProfilePoint {
                frequency: w,
                variant: v,
                force: resonant_force_nearfield(&atom, material, &s, z)?,
                converged,
            });
        }
    }
    Ok(out)
}
