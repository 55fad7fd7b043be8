//! `cpforge`: run Casimir-Polder scenarios from a TOML config.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 config or input error,
//! 3 numerical failure or flagged quadrature (without `--allow-flags`).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod run;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cpforge_core::potential::Normalization;
use cpforge_core::QuadratureSpec;

use config::ConfigError;
use run::RunOptions;
use table::Format;

#[derive(Parser, Debug)]
#[command(name = "cpforge", version, about = "Casimir-Polder potentials and forces near planar multilayers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario, or all of them when no name is given.
    Run {
        config: PathBuf,
        scenario: Option<String>,
        /// Relative quadrature tolerance.
        #[arg(long)]
        rel_tol: Option<f64>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Units::Si)]
        normalize: Units,
        /// Exit 0 even when some quadratures missed the tolerance.
        #[arg(long)]
        allow_flags: bool,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Upper end of the ε(0) grid of border scenarios.
        #[arg(long)]
        eps_max: Option<f64>,
    },
    /// Print scenario names, one per line.
    List { config: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Units {
    Si,
    Dimensionless,
}

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<ConfigError>().is_some() {
        return EXIT_CONFIG;
    }
    if let Some(e) = e.downcast_ref::<cpforge_core::Error>() {
        use cpforge_core::Error::*;
        return match e {
            NonFinite(_) | NoBracket { .. } | DegenerateRates => EXIT_NUMERICAL,
            _ => EXIT_CONFIG,
        };
    }
    EXIT_IO
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn execute(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::List { config } => {
            for name in config::load(&config)?.scenarios.keys() {
                println!("{name}");
            }
            Ok(0)
        }
        Command::Run {
            config,
            scenario,
            rel_tol,
            out,
            format,
            normalize,
            allow_flags,
            threads,
            eps_max,
        } => {
            let cfg = config::load(&config)?;
            let spec = match rel_tol {
                Some(t) => QuadratureSpec::with_rel_tol(t)
                    .map_err(|e| ConfigError::new("--rel-tol", e))?,
                None => QuadratureSpec::default(),
            };
            if let Some(m) = eps_max {
                if !(m.is_finite() && m > 1.0) {
                    return Err(ConfigError::new("--eps-max", "must be finite and > 1").into());
                }
            }
            let opts = RunOptions {
                spec,
                normalize: match normalize {
                    Units::Si => Normalization::Si,
                    Units::Dimensionless => Normalization::Dimensionless,
                },
                eps_max,
            };
            let names: Vec<String> = match scenario {
                Some(s) => vec![s],
                None => cfg.scenarios.keys().cloned().collect(),
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()?;
            let mut flagged = 0;
            for name in &names {
                let table = pool.install(|| run::run(&cfg, name, &opts))?;
                let path = output_path(&out, cfg.scenarios[name].output(), name, format);
                table.write(&path, format, name, cfg.scenarios[name].kind())?;
                eprintln!("{name}: {} rows -> {}", table.rows.len(), path.display());
                if table.flagged > 0 {
                    eprintln!("{name}: {} points missed the quadrature tolerance", table.flagged);
                    flagged += table.flagged;
                }
            }
            Ok(if flagged > 0 && !allow_flags { EXIT_NUMERICAL } else { 0 })
        }
    }
}

fn output_path(dir: &Path, output: Option<&str>, name: &str, format: Format) -> PathBuf {
    match output {
        Some(o) => dir.join(o),
        None => dir.join(format!("{name}.{}", format.extension())),
    }
}
