//! Scenario drivers. Grid points are evaluated in parallel and collected in
//! grid order, so output is deterministic.

use anyhow::Result;
use cpforge_core::asymptotics::{
    border_point, half_space_asymptotics, optimal_thickness, thin_plate_asymptotics, wall_maximum, ThicknessOptimum,
};
use cpforge_core::dynamics::{
    force_components, population_dynamics, resonant_force_profile, self_consistent_spectrum, LadderRates,
    Orientation, ProfileVariant,
};
use cpforge_core::potential::{potential, validate_grid, Normalization};
use cpforge_core::units::Units;
use cpforge_core::{Atom, LayerStack, QuadratureSpec};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{fixed_strength, parse_variants, Config, ConfigError, ScenarioSpec};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub spec: QuadratureSpec,
    pub normalize: Normalization,
    /// Replaces the upper end of a border scenario's ε(0) grid.
    pub eps_max: Option<f64>,
}

/// Output units for one atom.
struct Scale {
    length: f64,
    energy: f64,
    force: f64,
    l: &'static str,
    e: &'static str,
    f: &'static str,
}

impl Scale {
    fn new(n: Normalization, atom: &Atom) -> Self {
        let (l, e, f) = match n {
            Normalization::Si => ("m", "J", "N"),
            Normalization::Dimensionless => ("c/w10", "hbar w10 beta", "hbar w10^2 beta/c"),
        };
        Self {
            length: n.length_unit(atom),
            energy: n.energy_unit(atom),
            force: n.force_unit(atom),
            l,
            e,
            f,
        }
    }

    /// Unit of a coefficient multiplying 1/zⁿ.
    fn coefficient(&self, n: i32) -> f64 {
        self.energy * self.length.powi(n)
    }

    fn coefficient_unit(&self, n: i32) -> String {
        match self.l {
            "m" => format!("J m^{n}"),
            _ => format!("{} (c/w10)^{n}", self.e),
        }
    }
}

fn config_err(path: String) -> impl Fn(cpforge_core::Error) -> ConfigError {
    move |e| ConfigError::new(path.clone(), e)
}

pub fn run(config: &Config, name: &str, opts: &RunOptions) -> Result<Table> {
    let scenario = config
        .scenarios
        .get(name)
        .ok_or_else(|| ConfigError::new("scenarios", format!("no scenario named '{name}'")))?;
    let at = |key: &str| format!("scenarios.{name}.{key}");
    let units = config.units()?;
    let spec = &opts.spec;
    let mut table = match scenario {
        ScenarioSpec::Potential {
            stacks,
            atom,
            z,
            sweep,
            ..
        } => {
            let atom = config.atom(atom, &at("atom"))?;
            let stacks = labelled_stacks(config, stacks, sweep.as_ref(), &at("sweep"))?;
            let grid: Vec<f64> = z.values(&at("z"))?.iter().map(|&x| units.length(x)).collect();
            for (_, s) in &stacks {
                validate_grid(s, &atom, &grid).map_err(config_err(at("z")))?;
            }
            potential_table(&stacks, &atom, &grid, opts)?
        }
        ScenarioSpec::Coeffs {
            materials,
            atom,
            thickness,
            ..
        } => {
            let atom = config.atom(atom, &at("atom"))?;
            let sc = Scale::new(opts.normalize, &atom);
            let (names, powers) = match thickness {
                None => (["C4", "C3", "C1"], [4, 3, 1]),
                Some(_) => (["D5", "D4", "D2"], [5, 4, 2]),
            };
            let mut columns = vec!["material".to_string()];
            for (n, p) in names.iter().zip(powers) {
                columns.push(format!("{n} [{}]", sc.coefficient_unit(p)));
            }
            columns.push(format!("z_wall [{}]", sc.l));
            columns.push(format!("U_wall [{}]", sc.e));
            let mut t = Table::new(columns);
            let mats = materials
                .iter()
                .map(|m| config.material(m, &at("materials")))
                .collect::<Result<Vec<_>, _>>()?;
            let rows = mats
                .par_iter()
                .map(|m| match thickness {
                    None => half_space_asymptotics(m, &atom, spec),
                    Some(d) => thin_plate_asymptotics(m, &atom, units.length(*d), spec),
                })
                .collect::<cpforge_core::Result<Vec<_>>>()?;
            for (name, c) in materials.iter().zip(rows) {
                t.flag_unless(c.converged);
                let w = c.wall();
                t.push(vec![
                    name.as_str().into(),
                    (c.retarded / sc.coefficient(powers[0])).into(),
                    (c.electric / sc.coefficient(powers[1])).into(),
                    (c.magnetic / sc.coefficient(powers[2])).into(),
                    w.map(|w| w.z_max / sc.length).into(),
                    w.map(|w| w.u_max / sc.energy).into(),
                ]);
            }
            t
        }
        ScenarioSpec::Border { eps, .. } => {
            let grid = match opts.eps_max {
                Some(m) => eps.with_upper(m),
                None => eps.clone(),
            };
            let v = grid.values(&at("eps"))?;
            if v[0] < 1.0 {
                return Err(ConfigError::new(at("eps"), "ε(0) must be ≥ 1").into());
            }
            let pts = v
                .par_iter()
                .map(|&e| border_point(e, spec))
                .collect::<cpforge_core::Result<Vec<_>>>()?;
            let mut t = Table::new(
                ["eps0", "mu0_border", "mu0_weak_asymptote", "mu0_strong_asymptote"]
                    .map(String::from)
                    .to_vec(),
            );
            for p in pts {
                t.flag_unless(p.converged);
                t.push(vec![
                    p.permittivity.into(),
                    p.permeability.into(),
                    p.weak_asymptote.into(),
                    p.strong_asymptote.into(),
                ]);
            }
            t
        }
        ScenarioSpec::Wall {
            stacks,
            atom,
            z_band,
            sweep,
            ..
        } => {
            let atom = config.atom(atom, &at("atom"))?;
            let sc = Scale::new(opts.normalize, &atom);
            let list = labelled_stacks(config, stacks, sweep.as_ref(), &at("sweep"))?;
            let (lo, hi) = (units.length(z_band[0]), units.length(z_band[1]));
            let peaks = list
                .par_iter()
                .map(|(_, s)| wall_maximum(s, &atom, lo, hi, spec))
                .collect::<cpforge_core::Result<Vec<_>>>()?;
            let mut t = Table::new(vec![
                "stack".into(),
                format!("z_wall [{}]", sc.l),
                format!("U_wall [{}]", sc.e),
            ]);
            for ((label, _), p) in list.iter().zip(peaks) {
                if let Some(p) = p {
                    t.flag_unless(p.converged);
                }
                t.push(vec![
                    label.as_str().into(),
                    p.map(|p| p.z / sc.length).into(),
                    p.map(|p| p.energy / sc.energy).into(),
                ]);
            }
            t
        }
        ScenarioSpec::ThicknessOpt {
            material,
            atom,
            thickness,
            z_band,
            ..
        } => {
            let m = config.material(material, &at("material"))?;
            let atom = config.atom(atom, &at("atom"))?;
            let sc = Scale::new(opts.normalize, &atom);
            let ds = thickness.values(&at("thickness"))?;
            let band = (units.length(z_band[0]), units.length(z_band[1]));
            let peaks = ds
                .par_iter()
                .map(|&d| -> cpforge_core::Result<_> {
                    let s = LayerStack::slab(m.clone(), units.length(d))?;
                    wall_maximum(&s, &atom, band.0, band.1, spec)
                })
                .collect::<cpforge_core::Result<Vec<_>>>()?;
            let mut t = Table::new(vec![
                "row".into(),
                format!("d [{}]", sc.l),
                format!("z_wall [{}]", sc.l),
                format!("U_wall [{}]", sc.e),
            ]);
            for (&d, p) in ds.iter().zip(peaks) {
                if let Some(p) = p {
                    t.flag_unless(p.converged);
                }
                t.push(vec![
                    "scan".into(),
                    (units.length(d) / sc.length).into(),
                    p.map(|p| p.z / sc.length).into(),
                    p.map(|p| p.energy / sc.energy).into(),
                ]);
            }
            let d_band = (units.length(ds[0]), units.length(ds[ds.len() - 1]));
            match (ds.len() > 1, optimal_thickness(&m, &atom, d_band, band, spec)?) {
                (true, ThicknessOptimum::Optimum { thickness, wall }) => {
                    t.flag_unless(wall.converged);
                    t.push(vec![
                        "optimum".into(),
                        (thickness / sc.length).into(),
                        (wall.z / sc.length).into(),
                        (wall.energy / sc.energy).into(),
                    ]);
                }
                _ => t.push(vec!["optimum".into(), Cell::Empty, Cell::Empty, Cell::Empty]),
            }
            t
        }
        ScenarioSpec::Cavity {
            stacks,
            atom,
            points,
            margin,
            ..
        } => {
            let atom = config.atom(atom, &at("atom"))?;
            let list = stacks
                .iter()
                .map(|s| Ok((s.clone(), config.stack(s, &at("stacks"))?)))
                .collect::<Result<Vec<_>, ConfigError>>()?;
            let n = *points;
            let frac: Vec<f64> = (0..n)
                .map(|i| {
                    let f = if n == 1 { 0.5 } else { i as f64 / (n - 1) as f64 };
                    margin + (1.0 - 2.0 * margin) * f
                })
                .collect();
            let sc = Scale::new(opts.normalize, &atom);
            let mut columns = vec!["z/s".to_string()];
            let mut cols = Vec::new();
            for (label, s) in &list {
                let gap = s.atom_layer_width().expect("checked cavity stack");
                let grid: Vec<f64> = frac.iter().map(|f| f * gap).collect();
                validate_grid(s, &atom, &grid).map_err(config_err(at("margin")))?;
                columns.push(format!("U_{label} [{}]", sc.e));
                cols.push(
                    grid.par_iter()
                        .map(|&z| potential(s, &atom, z, spec))
                        .collect::<cpforge_core::Result<Vec<_>>>()?,
                );
            }
            let mut t = Table::new(columns);
            for (i, f) in frac.iter().enumerate() {
                let mut row = vec![Cell::from(*f)];
                for c in &cols {
                    t.flag_unless(c[i].converged);
                    row.push((c[i].energy / sc.energy).into());
                }
                t.push(row);
            }
            t
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
            let m = config.material(material, &at("material"))?;
            let atom = config.atom(atom, &at("atom"))?;
            let sc = Scale::new(opts.normalize, &atom);
            let z = units.length(*z);
            match (frequencies, times) {
                (Some(f), _) => {
                    let vs = match variants {
                        Some(v) => parse_variants(v, &at("variants"))?,
                        None => ProfileVariant::ALL.to_vec(),
                    };
                    let ws: Vec<f64> = f.values(&at("frequencies"))?.iter().map(|&w| units.frequency(w)).collect();
                    let strength = fixed_strength(&atom);
                    let rows = ws
                        .par_iter()
                        .map(|&w| resonant_force_profile(strength, &m, z, &[w], &vs, spec))
                        .collect::<cpforge_core::Result<Vec<_>>>()?;
                    let mut columns = vec!["w10 [w_ref]".to_string()];
                    columns.extend(vs.iter().map(|v| format!("F1r_{} [{}]", v.name(), sc.f)));
                    let mut t = Table::new(columns);
                    for (w, pts) in ws.iter().zip(rows) {
                        let mut row = vec![Cell::from(units.reduced_frequency(*w))];
                        for p in pts {
                            t.flag_unless(p.converged);
                            row.push((p.force / sc.force).into());
                        }
                        t.push(row);
                    }
                    t
                }
                (None, Some(ts)) => trajectory(&atom, &m, z, &ts.values(&at("times"))?, &sc, spec)?,
                (None, None) => unreachable!("checked when the config was loaded"),
            }
        }
    };
    table.meta.insert("rel_tol".into(), json!(spec.rel_tol));
    table.meta.insert("reference_frequency".into(), json!(units.reference_frequency()));
    table.meta.insert(
        "normalize".into(),
        json!(match opts.normalize {
            Normalization::Si => "si",
            Normalization::Dimensionless => "dimensionless",
        }),
    );
    Ok(table)
}

fn labelled_stacks(
    config: &Config,
    stacks: &[String],
    sweep: Option<&crate::config::SweepSpec>,
    path: &str,
) -> Result<Vec<(String, LayerStack)>> {
    Ok(match sweep {
        None => stacks
            .iter()
            .map(|s| Ok((s.clone(), config.stack(s, path)?)))
            .collect::<Result<_, ConfigError>>()?,
        Some(sw) => sw
            .values
            .iter()
            .map(|&v| Ok((format!("{}={v}", sw.parameter.label()), config.swept_stack(&stacks[0], sw, v, path)?)))
            .collect::<Result<_, ConfigError>>()?,
    })
}

fn potential_table(stacks: &[(String, LayerStack)], atom: &Atom, grid: &[f64], opts: &RunOptions) -> Result<Table> {
    let sc = Scale::new(opts.normalize, atom);
    let mut columns = vec![format!("z [{}]", sc.l)];
    for (label, _) in stacks {
        columns.push(format!("U_{label} [{}]", sc.e));
        columns.push(format!("F_{label} [{}]", sc.f));
    }
    let cols = stacks
        .iter()
        .map(|(_, s)| {
            grid.par_iter()
                .map(|&z| potential(s, atom, z, &opts.spec))
                .collect::<cpforge_core::Result<Vec<_>>>()
        })
        .collect::<cpforge_core::Result<Vec<_>>>()?;
    let mut t = Table::new(columns);
    for (i, &z) in grid.iter().enumerate() {
        let mut row = vec![Cell::from(z / sc.length)];
        for c in &cols {
            t.flag_unless(c[i].converged);
            row.push((c[i].energy / sc.energy).into());
            row.push((c[i].force / sc.force).into());
        }
        t.push(row);
    }
    Ok(t)
}

fn trajectory(
    atom: &Atom,
    material: &cpforge_core::Material,
    z: f64,
    times: &[f64],
    sc: &Scale,
    spec: &QuadratureSpec,
) -> Result<Table> {
    let spectrum = self_consistent_spectrum(atom, material, z, Orientation::Perpendicular, spec)?;
    let (c, ok) = force_components(atom, material, &spectrum, z, spec)?;
    let gamma = spectrum.widths[1];
    let rates = LadderRates::two_level(gamma)?;
    let mut t = Table::new(vec![
        "t [1/Gamma1]".into(),
        "t [s]".into(),
        "sigma11".into(),
        format!("F [{}]", sc.f),
    ]);
    t.flag_unless(ok && spectrum.converged);
    for &x in times {
        let secs = x / gamma;
        let s = population_dynamics(&rates, 1, secs)?;
        t.push(vec![
            x.into(),
            secs.into(),
            s[1].into(),
            (c.mean(s[1]) / sc.force).into(),
        ]);
    }
    let units = Units::new(spectrum.bare_frequency)?;
    t.meta.insert(
        "spectrum".into(),
        json!({
            "bare_frequency": spectrum.bare_frequency,
            "shifted_frequency": spectrum.frequency,
            "relative_shift": units.reduced_frequency(spectrum.frequency) - 1.0,
            "shifts": spectrum.shifts,
            "widths": spectrum.widths,
            "iterations": spectrum.iterations,
            "converged": spectrum.converged,
        }),
    );
    t.meta.insert(
        "forces".into(),
        json!({
            "ground": c.ground / sc.force,
            "resonant": c.resonant / sc.force,
            "excited_off_resonant": c.excited_off_resonant / sc.force,
        }),
    );
    Ok(t)
}
