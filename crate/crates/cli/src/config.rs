//! TOML configuration: materials, atoms, stacks and scenarios.
//!
//! Frequencies are given in units of `units.reference_frequency` (rad/s)
//! and lengths in units of c/reference_frequency.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use cpforge_core::atom::{dipole_sq_from_strength, DipoleStrength, Transition};
use cpforge_core::units::{Units, DEFAULT_REFERENCE_FREQUENCY};
use cpforge_core::{Atom, Layer, LayerStack, Material, Resonance};
use serde::Deserialize;

/// A schema or reference problem, reported with the offending key path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

pub type ConfigResult<T> = Result<T, ConfigError>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub units: UnitsSpec,
    #[serde(default)]
    pub materials: BTreeMap<String, MaterialSpec>,
    #[serde(default)]
    pub atoms: BTreeMap<String, AtomSpec>,
    #[serde(default)]
    pub stacks: BTreeMap<String, StackSpec>,
    #[serde(default)]
    pub scenarios: BTreeMap<String, ScenarioSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsSpec {
    /// rad/s
    pub reference_frequency: f64,
}

impl Default for UnitsSpec {
    fn default() -> Self {
        Self {
            reference_frequency: DEFAULT_REFERENCE_FREQUENCY,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceSpec {
    pub plasma: f64,
    pub transverse: f64,
    #[serde(default)]
    pub damping: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub electric: Option<ResonanceSpec>,
    pub magnetic: Option<ResonanceSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub frequency: f64,
    /// ω²|d|²/(3πħε₀c³) at this transition's frequency.
    pub beta: Option<f64>,
    /// |d|² in C² m².
    pub dipole_sq: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    /// Two-level shorthand.
    pub frequency: Option<f64>,
    pub beta: Option<f64>,
    pub dipole_sq: Option<f64>,
    pub transitions: Option<Vec<TransitionSpec>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSpec {
    pub material: String,
    /// Omitted for the two outer layers.
    pub thickness: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StackSpec {
    HalfSpace { material: String },
    Slab { material: String, thickness: f64 },
    Cavity { left: String, right: String, gap: f64 },
    Layers { layers: Vec<LayerSpec>, atom_layer: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Values(Vec<f64>),
    Range {
        from: f64,
        to: f64,
        points: usize,
        #[serde(default)]
        spacing: Spacing,
    },
}

impl GridSpec {
    /// Non-empty, finite and strictly increasing.
    pub fn values(&self, path: &str) -> ConfigResult<Vec<f64>> {
        let v = match self {
            GridSpec::Values(v) => v.clone(),
            GridSpec::Range {
                from,
                to,
                points,
                spacing,
            } => {
                let n = *points;
                if n == 1 {
                    vec![*from]
                } else {
                    if *spacing == Spacing::Log && !(*from > 0.0 && *to > 0.0) {
                        return Err(ConfigError::new(path, "log spacing needs positive bounds"));
                    }
                    (0..n)
                        .map(|i| {
                            let f = i as f64 / (n - 1) as f64;
                            if i == n - 1 {
                                return *to;
                            }
                            match spacing {
                                Spacing::Linear => from + (to - from) * f,
                                Spacing::Log => (from.ln() + (to.ln() - from.ln()) * f).exp(),
                            }
                        })
                        .collect()
                }
            }
        };
        if v.is_empty() {
            return Err(ConfigError::new(path, "grid is empty"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(ConfigError::new(path, "grid values must be finite"));
        }
        if v.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(ConfigError::new(path, "grid must be strictly increasing"));
        }
        Ok(v)
    }

    /// Same grid with its upper end replaced.
    pub fn with_upper(&self, upper: f64) -> GridSpec {
        match self {
            GridSpec::Values(v) => GridSpec::Values(v.iter().copied().filter(|&x| x <= upper).collect()),
            GridSpec::Range {
                from,
                points,
                spacing,
                ..
            } => GridSpec::Range {
                from: *from,
                to: upper,
                points: *points,
                spacing: *spacing,
            },
        }
    }
}

/// Which resonance parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParameter {
    ElectricPlasma,
    ElectricTransverse,
    ElectricDamping,
    MagneticPlasma,
    MagneticTransverse,
    MagneticDamping,
}

impl SweepParameter {
    pub fn label(&self) -> &'static str {
        match self {
            SweepParameter::ElectricPlasma => "wPe",
            SweepParameter::ElectricTransverse => "wTe",
            SweepParameter::ElectricDamping => "ge",
            SweepParameter::MagneticPlasma => "wPm",
            SweepParameter::MagneticTransverse => "wTm",
            SweepParameter::MagneticDamping => "gm",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub material: String,
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScenarioSpec {
    /// U(z) and F(z), one column pair per stack (or per sweep value).
    Potential {
        stacks: Vec<String>,
        atom: String,
        z: GridSpec,
        sweep: Option<SweepSpec>,
        output: Option<String>,
    },
    /// Asymptotic coefficients per material; thin-plate ones if `thickness`.
    Coeffs {
        materials: Vec<String>,
        atom: String,
        thickness: Option<f64>,
        output: Option<String>,
    },
    /// μ(0) on the C4 = 0 border over a grid of ε(0).
    Border { eps: GridSpec, output: Option<String> },
    /// Wall position and height per stack (or per sweep value).
    Wall {
        stacks: Vec<String>,
        atom: String,
        z_band: [f64; 2],
        sweep: Option<SweepSpec>,
        output: Option<String>,
    },
    /// Wall height of a free plate against its thickness, and the best one.
    ThicknessOpt {
        material: String,
        atom: String,
        thickness: GridSpec,
        z_band: [f64; 2],
        output: Option<String>,
    },
    /// U across the gap of cavity stacks.
    Cavity {
        stacks: Vec<String>,
        atom: String,
        points: usize,
        #[serde(default = "default_margin")]
        margin: f64,
        output: Option<String>,
    },
    /// Resonant-force profile over ω₁₀ (`frequencies`) or force transient
    /// over t·Γ₁ (`times`) for a two-level atom near a half space.
    Dynamics {
        material: String,
        atom: String,
        z: f64,
        frequencies: Option<GridSpec>,
        times: Option<GridSpec>,
        variants: Option<Vec<String>>,
        output: Option<String>,
    },
}

fn default_margin() -> f64 {
    0.01
}

impl ScenarioSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ScenarioSpec::Potential { .. } => "potential",
            ScenarioSpec::Coeffs { .. } => "coeffs",
            ScenarioSpec::Border { .. } => "border",
            ScenarioSpec::Wall { .. } => "wall",
            ScenarioSpec::ThicknessOpt { .. } => "thickness-opt",
            ScenarioSpec::Cavity { .. } => "cavity",
            ScenarioSpec::Dynamics { .. } => "dynamics",
        }
    }

    pub fn output(&self) -> Option<&str> {
        match self {
            ScenarioSpec::Potential { output, .. }
            | ScenarioSpec::Coeffs { output, .. }
            | ScenarioSpec::Border { output, .. }
            | ScenarioSpec::Wall { output, .. }
            | ScenarioSpec::ThicknessOpt { output, .. }
            | ScenarioSpec::Cavity { output, .. }
            | ScenarioSpec::Dynamics { output, .. } => output.as_deref(),
        }
    }
}

pub fn load(path: &Path) -> anyhow::Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new("", format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> anyhow::Result<Config> {
    let config: Config = toml::from_str(text).map_err(|e| ConfigError::new("", e.message().trim_end()).with_span(text, e.span()))?;
    config.check()?;
    Ok(config)
}

impl ConfigError {
    fn with_span(mut self, text: &str, span: Option<std::ops::Range<usize>>) -> Self {
        if let Some(r) = span {
            let line = text[..r.start.min(text.len())].matches('\n').count() + 1;
            self.path = format!("line {line}");
        }
        self
    }
}

impl Config {
    pub fn units(&self) -> ConfigResult<Units> {
        Units::new(self.units.reference_frequency)
            .map_err(|e| ConfigError::new("units.reference_frequency", e))
    }

    /// Every reference resolves and every object builds.
    pub fn check(&self) -> ConfigResult<()> {
        self.units()?;
        for name in self.materials.keys() {
            self.material(name, "materials")?;
        }
        for name in self.atoms.keys() {
            self.atom(name, "atoms")?;
        }
        for name in self.stacks.keys() {
            self.stack(name, "stacks")?;
        }
        for (name, s) in &self.scenarios {
            self.check_scenario(name, s)?;
        }
        Ok(())
    }

    fn check_scenario(&self, name: &str, s: &ScenarioSpec) -> ConfigResult<()> {
        let at = |key: &str| format!("scenarios.{name}.{key}");
        let stacks = |list: &[String]| -> ConfigResult<()> {
            if list.is_empty() {
                return Err(ConfigError::new(at("stacks"), "list is empty"));
            }
            list.iter().try_for_each(|s| self.stack(s, &at("stacks")).map(|_| ()))
        };
        match s {
            ScenarioSpec::Potential {
                stacks: list,
                atom,
                z,
                sweep,
                ..
            } => {
                stacks(list)?;
                self.atom(atom, &at("atom"))?;
                z.values(&at("z"))?;
                if let Some(sw) = sweep {
                    self.check_sweep(sw, list, &at("sweep"))?;
                }
            }
            ScenarioSpec::Coeffs {
                materials,
                atom,
                thickness,
                ..
            } => {
                if materials.is_empty() {
                    return Err(ConfigError::new(at("materials"), "list is empty"));
                }
                for m in materials {
                    self.material(m, &at("materials"))?;
                }
                self.atom(atom, &at("atom"))?;
                if let Some(d) = thickness {
                    positive(*d, &at("thickness"))?;
                }
            }
            ScenarioSpec::Border { eps, .. } => {
                let v = eps.values(&at("eps"))?;
                if v[0] < 1.0 {
                    return Err(ConfigError::new(at("eps"), "ε(0) must be ≥ 1"));
                }
            }
            ScenarioSpec::Wall {
                stacks: list,
                atom,
                z_band,
                sweep,
                ..
            } => {
                stacks(list)?;
                self.atom(atom, &at("atom"))?;
                band(*z_band, &at("z_band"))?;
                if let Some(sw) = sweep {
                    self.check_sweep(sw, list, &at("sweep"))?;
                }
            }
            ScenarioSpec::ThicknessOpt {
                material,
                atom,
                thickness,
                z_band,
                ..
            } => {
                self.material(material, &at("material"))?;
                self.atom(atom, &at("atom"))?;
                let d = thickness.values(&at("thickness"))?;
                if d[0] <= 0.0 {
                    return Err(ConfigError::new(at("thickness"), "thicknesses must be > 0"));
                }
                band(*z_band, &at("z_band"))?;
            }
            ScenarioSpec::Cavity {
                stacks: list,
                atom,
                points,
                margin,
                ..
            } => {
                stacks(list)?;
                for s in list {
                    if !matches!(self.stacks.get(s), Some(StackSpec::Cavity { .. })) {
                        return Err(ConfigError::new(at("stacks"), format!("'{s}' is not a cavity stack")));
                    }
                }
                self.atom(atom, &at("atom"))?;
                if *points == 0 {
                    return Err(ConfigError::new(at("points"), "grid is empty"));
                }
                if !(*margin > 0.0 && *margin < 0.5) {
                    return Err(ConfigError::new(at("margin"), "must lie in (0, 0.5)"));
                }
            }
            ScenarioSpec::Dynamics {
                material,
                atom,
                z,
                frequencies,
                times,
                variants,
                ..
            } => {
                self.material(material, &at("material"))?;
                let a = self.atom(atom, &at("atom"))?;
                a.two_level_transition()
                    .map_err(|_| ConfigError::new(at("atom"), "dynamics needs a two-level atom"))?;
                positive(*z, &at("z"))?;
                match (frequencies, times) {
                    (Some(f), None) => {
                        if f.values(&at("frequencies"))?[0] <= 0.0 {
                            return Err(ConfigError::new(at("frequencies"), "frequencies must be > 0"));
                        }
                    }
                    (None, Some(t)) => {
                        if t.values(&at("times"))?[0] < 0.0 {
                            return Err(ConfigError::new(at("times"), "times must be ≥ 0"));
                        }
                    }
                    _ => {
                        return Err(ConfigError::new(
                            format!("scenarios.{name}"),
                            "give exactly one of `frequencies` (profile) or `times` (trajectory)",
                        ))
                    }
                }
                if let Some(v) = variants {
                    parse_variants(v, &at("variants"))?;
                }
            }
        }
        Ok(())
    }

    fn check_sweep(&self, sw: &SweepSpec, stacks: &[String], path: &str) -> ConfigResult<()> {
        if stacks.len() != 1 {
            return Err(ConfigError::new(path, "a sweep needs exactly one stack"));
        }
        if sw.values.is_empty() {
            return Err(ConfigError::new(format!("{path}.values"), "list is empty"));
        }
        self.material(&sw.material, &format!("{path}.material"))?;
        for &v in &sw.values {
            self.swept_stack(&stacks[0], sw, v, path)?;
        }
        Ok(())
    }

    pub fn material(&self, name: &str, path: &str) -> ConfigResult<Material> {
        if name == "vacuum" {
            return Ok(Material::vacuum());
        }
        let spec = self
            .materials
            .get(name)
            .ok_or_else(|| ConfigError::new(path, format!("unknown material '{name}'")))?;
        self.build_material(spec, &format!("materials.{name}"))
    }

    fn build_material(&self, spec: &MaterialSpec, path: &str) -> ConfigResult<Material> {
        let units = self.units()?;
        let res = |r: &Option<ResonanceSpec>, key: &str| -> ConfigResult<Option<Resonance>> {
            r.map(|r| {
                Resonance::reduced(&units, r.plasma, r.transverse, r.damping)
                    .map_err(|e| ConfigError::new(format!("{path}.{key}"), e))
            })
            .transpose()
        };
        Ok(Material::drude_lorentz(
            res(&spec.electric, "electric")?,
            res(&spec.magnetic, "magnetic")?,
        ))
    }

    pub fn atom(&self, name: &str, path: &str) -> ConfigResult<Atom> {
        let spec = self
            .atoms
            .get(name)
            .ok_or_else(|| ConfigError::new(path, format!("unknown atom '{name}'")))?;
        let here = format!("atoms.{name}");
        let units = self.units()?;
        let transition = |t: &TransitionSpec, at: &str| -> ConfigResult<Transition> {
            let w = units.frequency(t.frequency);
            let d2 = match (t.beta, t.dipole_sq) {
                (Some(b), None) => dipole_sq_from_strength(b, w),
                (None, Some(d)) => d,
                _ => return Err(ConfigError::new(at, "give exactly one of `beta` or `dipole_sq`")),
            };
            Ok(Transition {
                frequency: w,
                dipole_sq: d2,
            })
        };
        let list = match (&spec.transitions, spec.frequency) {
            (Some(ts), None) if spec.beta.is_none() && spec.dipole_sq.is_none() => ts
                .iter()
                .enumerate()
                .map(|(i, t)| transition(t, &format!("{here}.transitions[{i}]")))
                .collect::<ConfigResult<Vec<_>>>()?,
            (None, Some(f)) => vec![transition(
                &TransitionSpec {
                    frequency: f,
                    beta: spec.beta,
                    dipole_sq: spec.dipole_sq,
                },
                &here,
            )?],
            _ => {
                return Err(ConfigError::new(
                    here,
                    "give either `frequency` with `beta`/`dipole_sq`, or a `transitions` list",
                ))
            }
        };
        Atom::new(list).map_err(|e| ConfigError::new(format!("atoms.{name}"), e))
    }

    pub fn stack(&self, name: &str, path: &str) -> ConfigResult<LayerStack> {
        let spec = self
            .stacks
            .get(name)
            .ok_or_else(|| ConfigError::new(path, format!("unknown stack '{name}'")))?;
        self.build_stack(name, spec, None)
    }

    fn build_stack(&self, name: &str, spec: &StackSpec, replace: Option<(&str, &Material)>) -> ConfigResult<LayerStack> {
        let here = format!("stacks.{name}");
        let units = self.units()?;
        let mat = |m: &str, key: &str| -> ConfigResult<Material> {
            match replace {
                Some((r, with)) if r == m => Ok(with.clone()),
                _ => self.material(m, &format!("{here}.{key}")),
            }
        };
        let err = |key: &str| {
            let p = format!("{here}.{key}");
            move |e: cpforge_core::Error| ConfigError::new(p, e)
        };
        match spec {
            StackSpec::HalfSpace { material } => Ok(LayerStack::half_space(mat(material, "material")?)),
            StackSpec::Slab { material, thickness } => {
                LayerStack::slab(mat(material, "material")?, units.length(*thickness)).map_err(err("thickness"))
            }
            StackSpec::Cavity { left, right, gap } => {
                LayerStack::cavity(mat(left, "left")?, mat(right, "right")?, units.length(*gap)).map_err(err("gap"))
            }
            StackSpec::Layers { layers, atom_layer } => {
                let n = layers.len();
                let built = layers
                    .iter()
                    .enumerate()
                    .map(|(i, l)| {
                        let key = format!("layers[{i}]");
                        let m = mat(&l.material, &key)?;
                        match (l.thickness, i == 0 || i + 1 == n) {
                            (None, true) => Ok(Layer::semi_infinite(m)),
                            (Some(d), false) => Layer::finite(m, units.length(d)).map_err(err(&key)),
                            (Some(_), true) => Err(ConfigError::new(format!("{here}.{key}"), "outer layers have no thickness")),
                            (None, false) => Err(ConfigError::new(format!("{here}.{key}"), "inner layers need a thickness")),
                        }
                    })
                    .collect::<ConfigResult<Vec<_>>>()?;
                LayerStack::new(built, *atom_layer).map_err(err("atom_layer"))
            }
        }
    }

    /// The named stack with the swept material parameter set to `value`.
    pub fn swept_stack(&self, stack: &str, sweep: &SweepSpec, value: f64, path: &str) -> ConfigResult<LayerStack> {
        let spec = self
            .stacks
            .get(stack)
            .ok_or_else(|| ConfigError::new(path, format!("unknown stack '{stack}'")))?;
        let mut m = self
            .materials
            .get(&sweep.material)
            .cloned()
            .ok_or_else(|| ConfigError::new(format!("{path}.material"), format!("unknown material '{}'", sweep.material)))?;
        let slot = |r: &mut Option<ResonanceSpec>| -> ConfigResult<()> {
            if r.is_none() {
                return Err(ConfigError::new(
                    format!("{path}.parameter"),
                    format!("material '{}' has no such resonance", sweep.material),
                ));
            }
            Ok(())
        };
        use SweepParameter::*;
        match sweep.parameter {
            ElectricPlasma | ElectricTransverse | ElectricDamping => slot(&mut m.electric)?,
            _ => slot(&mut m.magnetic)?,
        }
        match sweep.parameter {
            ElectricPlasma => m.electric.as_mut().unwrap().plasma = value,
            ElectricTransverse => m.electric.as_mut().unwrap().transverse = value,
            ElectricDamping => m.electric.as_mut().unwrap().damping = value,
            MagneticPlasma => m.magnetic.as_mut().unwrap().plasma = value,
            MagneticTransverse => m.magnetic.as_mut().unwrap().transverse = value,
            MagneticDamping => m.magnetic.as_mut().unwrap().damping = value,
        }
        let built = self.build_material(&m, &format!("{path}.values"))?;
        self.build_stack(stack, spec, Some((&sweep.material, &built)))
    }
}

fn positive(x: f64, path: &str) -> ConfigResult<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(ConfigError::new(path, "must be finite and > 0"));
    }
    Ok(())
}

fn band(b: [f64; 2], path: &str) -> ConfigResult<()> {
    if !(b[0] > 0.0 && b[1] > b[0] && b[1].is_finite()) {
        return Err(ConfigError::new(path, "need 0 < lower < upper"));
    }
    Ok(())
}

pub fn parse_variants(names: &[String], path: &str) -> ConfigResult<Vec<cpforge_core::dynamics::ProfileVariant>> {
    use cpforge_core::dynamics::ProfileVariant;
    if names.is_empty() {
        return Err(ConfigError::new(path, "list is empty"));
    }
    names
        .iter()
        .map(|n| {
            ProfileVariant::ALL
                .iter()
                .copied()
                .find(|v| v.name() == n)
                .ok_or_else(|| {
                    ConfigError::new(
                        path,
                        format!("unknown variant '{n}' (full, shift_only, broadening_only, perturbative)"),
                    )
                })
        })
        .collect()
}

/// Two-level dipole strength held fixed across a frequency profile.
pub fn fixed_strength(atom: &Atom) -> DipoleStrength {
    DipoleStrength::Squared(atom.transitions()[0].dipole_sq)
}
