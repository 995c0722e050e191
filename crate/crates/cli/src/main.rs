//! Command-line front end: seeded identity suites, characteristic numbers
//! of model bundles, transgression and tube-class checks, and locus
//! procedures. Results go to stdout as JSON lines, a human summary to
//! stderr. Exit codes: 0 all checks pass, 1 a check failed, 2 bad usage.

mod config;
mod geometry;
mod loci_cmd;
mod record;
mod verify;

use anyhow::Result;
use clap::{Parser, Subcommand};

use config::{parse_cells, Config};
use record::Emitter;

#[derive(Parser)]
#[command(
    name = "charlab",
    version,
    about = "numerical laboratory for curvature-built characteristic classes"
)]
struct Cli {
    /// Preset file with `key = value` lines; flags override file values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<String>,

    /// Write the command's columnar data (point clouds, profiles) here
    #[arg(long, global = true, value_name = "PATH")]
    emit_csv: Option<String>,

    /// Fill runtime_ms in records; off keeps repeated runs byte-identical
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded dual-route suite for one algebraic identity
    Verify {
        /// realified-det, pfaffian, pf-squared, euler-chern, or whitney
        suite: String,
        /// Single matrix size to test instead of the suite's default sweep
        #[arg(long)]
        n: Option<usize>,
        /// Random draws per size and mode
        #[arg(long)]
        trials: Option<usize>,
        /// Seed for the deterministic generator
        #[arg(long)]
        seed: Option<u64>,
        /// exact, float, or both
        #[arg(long)]
        mode: Option<String>,
    },

    /// Integrate a characteristic-class monomial over a model bundle
    Charnum {
        /// s2, torus, cp1, cp2, or o<d>
        #[arg(long)]
        model: String,
        /// Class monomial such as e, c1^2, p1, or c1*c2
        #[arg(long)]
        class: String,
        /// Comma-separated cells per axis
        #[arg(long)]
        grid: Option<String>,
        /// Chart truncation radius for planar models
        #[arg(long)]
        radius: Option<f64>,
        /// Polar cap half-angle excluded from angular charts
        #[arg(long)]
        cap: Option<f64>,
        /// Skip tail extrapolation on truncated charts
        #[arg(long)]
        raw: bool,
    },

    /// Build the fiberwise primitive on a circle bundle and check its
    /// defining identities
    Transgression {
        /// ts2 (unit tangent circle bundle) or flat (trivial model)
        #[arg(long)]
        model: Option<String>,
        /// Enforce residual tolerances instead of only reporting values
        #[arg(long)]
        check: bool,
        /// Relative finite-difference step
        #[arg(long)]
        step: Option<f64>,
        /// Cells per base axis for the residual grid
        #[arg(long)]
        grid: Option<usize>,
        /// Quadrature points along the fiber
        #[arg(long)]
        quad: Option<usize>,
        /// Polar cap half-angle for the base chart
        #[arg(long)]
        cap: Option<f64>,
    },

    /// Check the compactly supported fiber class: unit mass, support,
    /// and closedness
    Thom {
        /// Enforce tolerances instead of only reporting values
        #[arg(long)]
        check: bool,
        /// Quadrature points along the fiber angle
        #[arg(long)]
        quad: Option<usize>,
        /// Relative finite-difference step for the closedness residual
        #[arg(long)]
        step: Option<f64>,
    },

    /// Find section zeros, report signed indices, and compare the sum
    /// with the curvature integral
    Zeros {
        /// Model override; inferred from the section when omitted
        #[arg(long)]
        model: Option<String>,
        /// rotation (sphere vector field) or roots-<d> (line bundle section)
        #[arg(long)]
        section: String,
        /// Comma-separated cells per axis for the scan
        #[arg(long)]
        grid: Option<String>,
        /// Relative residual tolerance for accepting a zero
        #[arg(long)]
        tol: Option<f64>,
        /// Chart truncation radius for planar models
        #[arg(long)]
        radius: Option<f64>,
        /// Polar cap half-angle for angular charts
        #[arg(long)]
        cap: Option<f64>,
    },

    /// Pair a class against a test form two ways: chart integral and
    /// evaluation on the supporting locus
    DualCheck {
        /// unit-pairing (point locus) or area-pairing (parametrized locus)
        #[arg(long)]
        example: String,
        /// Comma-separated cells per axis for the chart integral
        #[arg(long)]
        grid: Option<String>,
        /// Chart truncation radius
        #[arg(long)]
        radius: Option<f64>,
        /// Polar cap half-angle
        #[arg(long)]
        cap: Option<f64>,
    },

    /// Count section zeros on a slice and compare with the restricted
    /// degree integral, including a deformed and a complementary slice
    Intersect {
        /// Degree of the root section on the first factor
        #[arg(long)]
        degree: Option<u32>,
        /// Chart truncation radius
        #[arg(long)]
        radius: Option<f64>,
        /// Comma-separated cells per slice axis
        #[arg(long)]
        grid: Option<String>,
        /// Base point of the slice as two comma-separated coordinates
        #[arg(long)]
        slice: Option<String>,
        /// Base point of the deformed slice
        #[arg(long)]
        alt_slice: Option<String>,
    },

    /// Scan a section tuple for rank drop, fit the locus dimension, and
    /// run the transversality gate
    Degeneracy {
        /// transverse (rank-two pair) or pinned (nowhere-degenerate section)
        #[arg(long)]
        example: String,
        /// Comma-separated cells per axis for the scan
        #[arg(long)]
        cells: Option<String>,
        /// Relative singular-value threshold for the locus
        #[arg(long)]
        tau: Option<f64>,
        /// Chart truncation radius
        #[arg(long)]
        radius: Option<f64>,
    },

    /// Cross-route consistency checks between integral and locus methods
    Consistency {
        /// degree-split or pontryagin-count
        #[arg(long)]
        check: String,
        /// Chart truncation radius
        #[arg(long)]
        radius: Option<f64>,
    },
}

const DEFAULT_SEED: u64 = 7;
const DEFAULT_RADIUS: f64 = 20.0;
const DEFAULT_CAP: f64 = 0.05;

/// Flag wins, then the config file, then the caller's default.
fn pick<T>(flag: Option<T>, cfg: &Config, key: &str) -> Result<Option<T>>
where
    T: std::str::FromStr,
    <T as std::str::FromStr>::Err: std::fmt::Display,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key),
    }
}

fn pick_cells(flag: &Option<String>, cfg: &Config, key: &str) -> Result<Option<Vec<usize>>> {
    match flag {
        Some(raw) => Ok(Some(parse_cells(raw)?)),
        None => cfg.get_list(key),
    }
}

fn parse_point(raw: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = raw.split(',').collect();
    let bad = || charlab::Error::BadConfig(format!("point {raw:?} is not two comma-separated numbers"));
    if parts.len() != 2 {
        return Err(bad().into());
    }
    let x: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let y: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    Ok((x, y))
}

fn verify_defaults(suite: &str) -> Result<(Vec<usize>, usize)> {
    match suite {
        "realified-det" => Ok((vec![1, 2, 3, 4], 200)),
        "pfaffian" => Ok((vec![2, 4, 6, 8], 100)),
        "pf-squared" => Ok((vec![2, 4], 100)),
        "euler-chern" => Ok((vec![1, 2, 3], 50)),
        "whitney" => Ok((vec![2, 3], 50)),
        other => Err(charlab::Error::UnknownName {
            kind: "verify suite",
            name: other.to_string(),
        }
        .into()),
    }
}

fn dispatch(cmd: &Command, cfg: &Config, em: &mut Emitter) -> Result<()> {
    match cmd {
        Command::Verify {
            suite,
            n,
            trials,
            seed,
            mode,
        } => {
            let (default_sizes, default_trials) = verify_defaults(suite)?;
            let n = pick(*n, cfg, "n")?;
            if n == Some(0) {
                return Err(charlab::Error::BadConfig(
                    "matrix size 0 is empty; pass a positive --n".to_string(),
                )
                .into());
            }
            let trials = pick(*trials, cfg, "trials")?.unwrap_or(default_trials);
            if trials == 0 {
                return Err(charlab::Error::BadConfig(
                    "at least one trial is needed".to_string(),
                )
                .into());
            }
            let mode_raw = match mode {
                Some(m) => m.clone(),
                None => cfg.get::<String>("mode")?.unwrap_or_else(|| "both".to_string()),
            };
            let args = verify::SuiteArgs {
                sizes: n.map(|v| vec![v]).unwrap_or(default_sizes),
                trials,
                seed: pick(*seed, cfg, "seed")?.unwrap_or(DEFAULT_SEED),
                mode: verify::Mode::parse(&mode_raw)?,
            };
            match suite.as_str() {
                "realified-det" => verify::realified_det(&args, em),
                "pfaffian" => verify::pfaffian_routes(&args, em),
                "pf-squared" => verify::pf_squared(&args, em),
                "euler-chern" => verify::euler_chern(&args, em),
                "whitney" => verify::whitney(&args, em),
                _ => unreachable!("suite validated above"),
            }
        }
        Command::Charnum {
            model,
            class,
            grid,
            radius,
            cap,
            raw,
        } => geometry::charnum(
            &geometry::CharnumArgs {
                model: model.clone(),
                class: class.clone(),
                grid: pick_cells(grid, cfg, "grid")?,
                radius: pick(*radius, cfg, "radius")?,
                cap: pick(*cap, cfg, "cap")?.unwrap_or(DEFAULT_CAP),
                raw: *raw,
            },
            em,
        ),
        Command::Transgression {
            model,
            check,
            step,
            grid,
            quad,
            cap,
        } => geometry::transgression(
            &geometry::TransgressionArgs {
                model: model.clone().unwrap_or_else(|| "ts2".to_string()),
                check: *check,
                step: pick(*step, cfg, "step")?,
                grid: pick(*grid, cfg, "grid")?,
                quad: pick(*quad, cfg, "quad")?.unwrap_or(8),
                cap: pick(*cap, cfg, "cap")?.unwrap_or(DEFAULT_CAP),
            },
            em,
        ),
        Command::Thom { check, quad, step } => geometry::thom(
            &geometry::ThomArgs {
                check: *check,
                quad: pick(*quad, cfg, "quad")?.unwrap_or(8),
                step: pick(*step, cfg, "step")?.unwrap_or(1e-3),
            },
            em,
        ),
        Command::Zeros {
            model,
            section,
            grid,
            tol,
            radius,
            cap,
        } => {
            let implied = if section == "rotation" {
                "s2".to_string()
            } else if let Some(d) = section.strip_prefix("roots-") {
                format!("o{d}")
            } else {
                return Err(charlab::Error::UnknownName {
                    kind: "section",
                    name: section.clone(),
                }
                .into());
            };
            if let Some(m) = model {
                if *m != implied {
                    return Err(charlab::Error::BadConfig(format!(
                        "section {section} lives on model {implied}, not {m}"
                    ))
                    .into());
                }
            }
            loci_cmd::zeros(
                &loci_cmd::ZerosArgs {
                    section: section.clone(),
                    grid: pick_cells(grid, cfg, "grid")?,
                    tol: pick(*tol, cfg, "tol")?.unwrap_or(1e-7),
                    radius: pick(*radius, cfg, "radius")?.unwrap_or(DEFAULT_RADIUS),
                    cap: pick(*cap, cfg, "cap")?.unwrap_or(DEFAULT_CAP),
                },
                em,
            )
        }
        Command::DualCheck {
            example,
            grid,
            radius,
            cap,
        } => loci_cmd::dual_check(
            &loci_cmd::DualArgs {
                example: example.clone(),
                grid: pick_cells(grid, cfg, "grid")?,
                radius: pick(*radius, cfg, "radius")?.unwrap_or(DEFAULT_RADIUS),
                cap: pick(*cap, cfg, "cap")?.unwrap_or(DEFAULT_CAP),
            },
            em,
        ),
        Command::Intersect {
            degree,
            radius,
            grid,
            slice,
            alt_slice,
        } => {
            let slice_raw = match slice {
                Some(s) => s.clone(),
                None => cfg
                    .get::<String>("slice")?
                    .unwrap_or_else(|| "2.0,1.1".to_string()),
            };
            let alt_raw = match alt_slice {
                Some(s) => s.clone(),
                None => cfg
                    .get::<String>("alt_slice")?
                    .unwrap_or_else(|| "0.7,4.0".to_string()),
            };
            loci_cmd::intersect(
                &loci_cmd::IntersectArgs {
                    degree: pick(*degree, cfg, "degree")?.unwrap_or(2),
                    radius: pick(*radius, cfg, "radius")?.unwrap_or(DEFAULT_RADIUS),
                    grid: pick_cells(grid, cfg, "grid")?,
                    slice: parse_point(&slice_raw)?,
                    alt_slice: parse_point(&alt_raw)?,
                },
                em,
            )
        }
        Command::Degeneracy {
            example,
            cells,
            tau,
            radius,
        } => loci_cmd::degeneracy(
            &loci_cmd::DegeneracyArgs {
                example: example.clone(),
                cells: pick_cells(cells, cfg, "cells")?,
                tau: pick(*tau, cfg, "tau")?.unwrap_or(1e-4),
                radius: pick(*radius, cfg, "radius")?.unwrap_or(DEFAULT_RADIUS),
            },
            em,
        ),
        Command::Consistency { check, radius } => loci_cmd::consistency(
            &loci_cmd::ConsistencyArgs {
                check: check.clone(),
                radius: pick(*radius, cfg, "radius")?.unwrap_or(DEFAULT_RADIUS),
            },
            em,
        ),
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    use charlab::Error as E;
    match e.downcast_ref::<E>() {
        Some(E::SymmetryViolation(_)) | Some(E::ValidationFailed(_)) | Some(E::Numeric(_)) => 1,
        _ => 2,
    }
}

fn main() {
    let cli = Cli::parse();
    let cfg = match Config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    };
    let mut em = Emitter::new(cli.timings, cli.emit_csv.clone());
    match dispatch(&cli.command, &cfg, &mut em) {
        Ok(()) => match em.finish() {
            Ok(0) => {}
            Ok(_) => std::process::exit(1),
            Err(e) => {
                eprintln!("error: {e}");
                std::process::exit(1);
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(exit_code(&e));
        }
    }
}
