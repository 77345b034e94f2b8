//! Configuration, exports, verification reports and the command-line driver.

mod args;
mod config;
mod export;
mod verify;

pub use args::{CatenoidAction, Cli, Command, CommonArgs, HelicoidAction, SurfaceArgs};
pub use config::{Family, GridConfig, MetricConfig, Outputs, Overrides, Parameters, RunConfig};
pub use export::{export_curve, export_mesh, helicoid_section_points, write_curve, write_mesh, CurvePoint};
pub use verify::{run_verification, CheckRecord, Comparison, Metadata, Summary, VerificationReport};

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use serde_json::json;

use crate::catenoid::{
    intersection_shrink_study, limit_study, omega_check, solve_theta_tilde_with, theta_plus, CatenoidProfile,
};
use crate::error::{Error, Result};
use crate::helicoid::{solve_k_for_period, HelicoidProfile};

/// The `(ũ, ṽ)` grid used by `limit-study`: `ũ ∈ {−π, −π/2, 0, π/2, π}`,
/// `ṽ ∈ {−1, −1/2, 0, 1/2, 1}`.
pub fn limit_grid() -> Vec<(f64, f64)> {
    let mut g = Vec::with_capacity(25);
    for i in 0..5 {
        for j in 0..5 {
            g.push((-PI + 0.5 * PI * i as f64, -1.0 + 0.5 * j as f64));
        }
    }
    g
}

fn emit(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("json value serializes");
    writeln!(out, "{text}").map_err(|source| Error::Io {
        path: "<stdout>".into(),
        source,
    })
}

/// Reads the config file (if any) and applies flags without requiring the
/// family parameters, for subcommands that only need the metric.
fn loose_config(common: &CommonArgs, family: Family) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::new(family),
    };
    cfg.apply(&common.overrides());
    cfg.metric_params()?;
    cfg.tolerances.validate()?;
    Ok(cfg)
}

fn full_config(common: &CommonArgs, mut flags: Overrides) -> Result<RunConfig> {
    let base = common.overrides();
    flags = Overrides {
        family: flags.family,
        k: flags.k,
        c: flags.c,
        theta: flags.theta,
        ..base
    };
    RunConfig::resolve(common.config.as_deref(), &flags)
}

/// Solves the catenoid of `cfg`, at `θ` if given, else at `θ̃_c`.
fn catenoid_from(cfg: &RunConfig) -> Result<CatenoidProfile> {
    let m = cfg.metric_params()?;
    let c = cfg.parameters.c.expect("validated");
    let theta = match cfg.parameters.theta {
        Some(t) => t,
        None => solve_theta_tilde_with(&m, c, cfg.tolerances.root, &cfg.tolerances)?,
    };
    CatenoidProfile::solve_with(m, omega_check(&m, c, theta)?, cfg.tolerances)
}

fn write_mesh_if_requested(cfg: &RunConfig, grid: &crate::surface::SurfaceGrid) -> Result<()> {
    if let Some(path) = &cfg.outputs.mesh {
        export_mesh(grid, path)?;
    }
    Ok(())
}

fn path_json(p: &Option<std::path::PathBuf>) -> serde_json::Value {
    p.as_deref().map(Path::display).map(|d| d.to_string()).into()
}

/// Runs a parsed command, writing results to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Helicoid { k, common, action } => match action {
            Some(HelicoidAction::SolvePeriod { t }) => {
                let cfg = loose_config(&common, Family::Helicoid)?;
                let k = solve_k_for_period(&cfg.metric_params()?, t, &cfg.tolerances)?;
                emit(out, &json!({ "T": t, "K": k }))?;
                Ok(0)
            }
            None => {
                let cfg = full_config(
                    &common,
                    Overrides {
                        family: Some(Family::Helicoid),
                        k,
                        ..Default::default()
                    },
                )?;
                let p = HelicoidProfile::solve_with(
                    cfg.metric_params()?,
                    cfg.parameters.k.expect("validated"),
                    cfg.tolerances,
                )?;
                let w = p.w();
                let grid = p.sample_grid(
                    cfg.grid.u_range((-2.0, 2.0)),
                    cfg.grid.v_range((-2.0 * w, 2.0 * w)),
                    cfg.grid.nu,
                    cfg.grid.nv,
                )?;
                write_mesh_if_requested(&cfg, &grid)?;
                emit(
                    out,
                    &json!({
                        "family": "helicoid",
                        "K": p.k(),
                        "W": w,
                        "period": p.period(),
                        "vertices": grid.samples.len(),
                        "mesh": path_json(&cfg.outputs.mesh),
                        "config_hash": cfg.hash(),
                    }),
                )?;
                Ok(0)
            }
        },
        Command::Catenoid {
            c,
            theta,
            common,
            action,
        } => match action {
            Some(CatenoidAction::SolveTheta { c }) => {
                let cfg = loose_config(&common, Family::Catenoid)?;
                let m = cfg.metric_params()?;
                let t = solve_theta_tilde_with(&m, c, cfg.tolerances.root, &cfg.tolerances)?;
                emit(
                    out,
                    &json!({ "c": c, "theta_tilde": t, "theta_plus": theta_plus(&m, c) }),
                )?;
                Ok(0)
            }
            None => {
                let cfg = full_config(
                    &common,
                    Overrides {
                        family: Some(Family::Catenoid),
                        c,
                        theta,
                        ..Default::default()
                    },
                )?;
                let p = catenoid_from(&cfg)?;
                let u = p.u_half();
                let grid = p.sample_grid(
                    cfg.grid.u_range((-u, u)),
                    cfg.grid.v_range((-1.0, 1.0)),
                    cfg.grid.nu,
                    cfg.grid.nv,
                )?;
                write_mesh_if_requested(&cfg, &grid)?;
                let z = p.lattice_vector();
                emit(
                    out,
                    &json!({
                        "family": "catenoid",
                        "c": p.c(),
                        "theta": p.theta(),
                        "U": u,
                        "H": p.h(),
                        "Z": [z.re, z.im],
                        "vertices": grid.samples.len(),
                        "mesh": path_json(&cfg.outputs.mesh),
                        "config_hash": cfg.hash(),
                    }),
                )?;
                Ok(0)
            }
        },
        Command::CrossSection {
            surface,
            level,
            samples,
            common,
        } => {
            let mut flags = Overrides::default();
            surface.apply(&mut flags);
            let cfg = full_config(&common, flags)?;
            let points: Vec<CurvePoint> = match cfg.family {
                Family::Helicoid => {
                    let m = cfg.metric_params()?;
                    let p = HelicoidProfile::solve_with(m, cfg.parameters.k.expect("validated"), cfg.tolerances)?;
                    let s = p.cross_section(level)?;
                    helicoid_section_points(&s, m.lambda1(), cfg.grid.u_range((-2.0, 2.0)), samples)
                }
                Family::Catenoid => {
                    let p = catenoid_from(&cfg)?;
                    (&p.cross_section(level, samples)?).into()
                }
            };
            match &cfg.outputs.csv {
                Some(path) => export_curve(&points, path)?,
                None => write_curve(&points, out)?,
            }
            Ok(0)
        }
        Command::Verify { surface, common } => {
            let mut flags = Overrides::default();
            surface.apply(&mut flags);
            let cfg = full_config(&common, flags)?;
            let report = run_verification(&cfg);
            let value = serde_json::to_value(&report).expect("report serializes");
            match &cfg.outputs.report {
                Some(path) => {
                    let text = serde_json::to_string_pretty(&value).expect("report serializes");
                    std::fs::write(path, text + "\n").map_err(|source| Error::Io {
                        path: path.clone(),
                        source,
                    })?;
                    emit(
                        out,
                        &json!({ "summary": report.summary, "report": path.display().to_string() }),
                    )?;
                }
                None => emit(out, &value)?,
            }
            Ok(report.exit_code())
        }
        Command::LimitStudy {
            c_list,
            shrink_c_list,
            common,
        } => {
            let cfg = loose_config(&common, Family::Catenoid)?;
            let m = cfg.metric_params()?;
            let limits = limit_study(&m, &c_list, &limit_grid())?;
            let shrink = intersection_shrink_study(&m, &shrink_c_list, 401)?;
            emit(out, &json!({ "limit": limits, "shrink": shrink }))?;
            Ok(0)
        }
    }
}
