//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{Family, Overrides};

#[derive(Debug, Parser)]
#[command(
    name = "e2surf",
    version,
    about = "Minimal helicoids and catenoids in the universal cover of E(2)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand. Each one overrides the value read
/// from `--config`.
#[derive(Debug, Default, Clone, Args)]
pub struct CommonArgs {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub lambda1: Option<f64>,
    #[arg(long, global = true)]
    pub lambda2: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub u_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub u_max: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub v_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub v_max: Option<f64>,
    #[arg(long, global = true)]
    pub nu: Option<usize>,
    #[arg(long, global = true)]
    pub nv: Option<usize>,
    #[arg(long, global = true)]
    pub ode_tol: Option<f64>,
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,
    #[arg(long, global = true)]
    pub root_tol: Option<f64>,
    /// Write the sampled surface as OBJ.
    #[arg(long, global = true)]
    pub mesh: Option<PathBuf>,
    /// Write a section as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Write the verification report as JSON.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Args)]
pub struct SurfaceArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long = "K", allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a helicoid and optionally export its mesh.
    Helicoid {
        #[arg(long = "K", allow_hyphen_values = true)]
        k: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
        #[command(subcommand)]
        action: Option<HelicoidAction>,
    },
    /// Solve a catenoid and optionally export its mesh.
    Catenoid {
        #[arg(long)]
        c: Option<f64>,
        /// Use this θ instead of the period root.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
        #[command(subcommand)]
        action: Option<CatenoidAction>,
    },
    /// Sample a horizontal section and write it as CSV.
    CrossSection {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Helicoid: the height C. Catenoid: μ, the plane being x3 = λ1 λ2 μ.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        level: f64,
        #[arg(long, default_value_t = 401)]
        samples: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the invariant suite and write a JSON report. Exits 1 on any failure.
    Verify {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Catenoid limits as c grows.
    LimitStudy {
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 50.0, 100.0])]
        c_list: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [2.0, 5.0, 10.0, 50.0])]
        shrink_c_list: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum HelicoidAction {
    /// Find K with translation period T.
    SolvePeriod {
        #[arg(long = "T", allow_hyphen_values = true)]
        t: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatenoidAction {
    /// Find θ̃_c.
    SolveTheta {
        #[arg(long)]
        c: f64,
    },
}

impl CommonArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            lambda1: self.lambda1,
            lambda2: self.lambda2,
            u_min: self.u_min,
            u_max: self.u_max,
            v_min: self.v_min,
            v_max: self.v_max,
            nu: self.nu,
            nv: self.nv,
            ode_tol: self.ode_tol,
            quad_tol: self.quad_tol,
            root_tol: self.root_tol,
            mesh: self.mesh.clone(),
            csv: self.csv.clone(),
            report: self.report.clone(),
            ..Default::default()
        }
    }
}

impl SurfaceArgs {
    pub fn apply(&self, o: &mut Overrides) {
        o.family = self.family.or(o.family);
        o.k = self.k;
        o.c = self.c;
        o.theta = self.theta;
    }
}
