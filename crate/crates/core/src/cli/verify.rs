//! The invariant suite behind `e2surf verify`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{Family, RunConfig};
use crate::catenoid::{h_by_quadrature, solve_theta_tilde_with, CatenoidProfile};
use crate::e2::{GroupElement, MetricParams};
use crate::error::Result;
use crate::helicoid::{collinearity_residual, period_by_quadrature, w_by_quadrature, HelicoidProfile};
use crate::numerics::fd_derivative;
use crate::weierstrass::{
    eta_and_a, frame_xz_fd, hopf, induced_metric_factor, mean_curvature_fd, pde_residual, wirtinger_fd, GaussMapValue,
};

/// Largest number of check nodes per grid direction.
const CHECK_NODES: usize = 10;
const FD_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    /// Passes when `value ≤ tol`.
    Max,
    /// Passes when `value > tol`.
    Min,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    /// `None` when the check could not be evaluated.
    pub value: Option<f64>,
    pub tol: f64,
    pub comparison: Comparison,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_half: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_tilde: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_residual: Option<f64>,
    /// `[Re Z, Im Z]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: Family,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
    pub metadata: Metadata,
    pub config_hash: String,
    pub config: RunConfig,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0 && self.summary.total > 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn record(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

#[derive(Default)]
struct Suite {
    records: Vec<CheckRecord>,
}

impl Suite {
    fn push(&mut self, name: &str, anchor: &str, tol: f64, cmp: Comparison, value: Result<f64>) {
        let (value, error) = match value {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let pass = match (value, cmp) {
            (Some(v), Comparison::Max) => v <= tol,
            (Some(v), Comparison::Min) => v > tol,
            (None, _) => false,
        };
        self.records.push(CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            value,
            tol,
            comparison: cmp,
            pass,
            error,
        });
    }

    fn max(&mut self, name: &str, anchor: &str, tol: f64, value: impl FnOnce() -> Result<f64>) {
        self.push(name, anchor, tol, Comparison::Max, value());
    }

    fn min(&mut self, name: &str, anchor: &str, tol: f64, value: impl FnOnce() -> Result<f64>) {
        self.push(name, anchor, tol, Comparison::Min, value());
    }

    fn failure(&mut self, name: &str, anchor: &str, e: crate::Error) {
        self.push(name, anchor, 0.0, Comparison::Max, Err(e));
    }
}

fn nodes(range: (f64, f64), n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64)
        .collect()
}

fn check_grid(cfg: &RunConfig, u: (f64, f64), v: (f64, f64)) -> Vec<(f64, f64)> {
    let us = nodes(cfg.grid.u_range(u), cfg.grid.nu.min(CHECK_NODES));
    let vs = nodes(cfg.grid.v_range(v), cfg.grid.nv.min(CHECK_NODES));
    vs.iter().flat_map(|&v| us.iter().map(move |&u| (u, v))).collect()
}

/// Running maximum over points, failing on the first error.
fn sup(points: &[(f64, f64)], f: impl Fn(f64, f64) -> Result<f64>) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(u, v) in points {
        let x = f(u, v)?;
        worst = if x.is_nan() { f64::NAN } else { worst.max(x) };
    }
    Ok(worst)
}

/// Checks shared by both families that only need the Gauss map and the
/// immersion.
#[allow(clippy::too_many_arguments)]
fn weierstrass_checks(
    s: &mut Suite,
    m: &MetricParams,
    pts: &[(f64, f64)],
    q0: Complex64,
    gauss: &(dyn Fn(f64, f64) -> (GaussMapValue, Complex64) + Sync),
    g_only: &(dyn Fn(f64, f64) -> Complex64 + Sync),
    immerse: &(dyn Fn(f64, f64) -> GroupElement + Sync),
    rho2: &(dyn Fn(f64, f64) -> f64 + Sync),
    curvature: &(dyn Fn(f64, f64) -> (f64, f64) + Sync),
) {
    s.max("hopf_constant", "Hopf differential is constant", 1e-10, || {
        sup(pts, |u, v| Ok((hopf(m, &gauss(u, v).0)?.q - q0).norm()))
    });
    s.max(
        "pde_residual",
        "Gauss map solves the harmonic map equation",
        1e-10,
        || {
            sup(pts, |u, v| {
                let (gv, gzz) = gauss(u, v);
                Ok(pde_residual(m, &gv, gzz)?.norm())
            })
        },
    );
    s.max(
        "pde_residual_fd",
        "harmonic map equation from finite differences of g, relative to 1+|g|",
        1e-5,
        || {
            sup(pts, |u, v| {
                let (gv, gzz) = wirtinger_fd(g_only, u, v, FD_STEP);
                Ok(pde_residual(m, &gv, gzz)?.norm() / (1.0 + gv.g.norm()))
            })
        },
    );
    s.max(
        "immersion_differential",
        "frame components of X_z from the Gauss map",
        1e-6,
        || {
            sup(pts, |u, v| {
                let data = eta_and_a(m, &gauss(u, v).0)?;
                let fd = frame_xz_fd(m, immerse, u, v, FD_STEP);
                let scale = 1.0 + data.a1.norm() + data.a2.norm() + data.a3.norm();
                Ok(data
                    .components()
                    .iter()
                    .zip(fd)
                    .map(|(a, b)| (a - b).norm() / scale)
                    .fold(0.0, f64::max))
            })
        },
    );
    s.max(
        "conformal_factor",
        "induced metric factor rho^2 (relative)",
        1e-10,
        || {
            sup(pts, |u, v| {
                let w = induced_metric_factor(m, &gauss(u, v).0)?;
                Ok((w - rho2(u, v)).abs() / w)
            })
        },
    );
    s.max("mean_curvature_fd", "the immersion is minimal", 1e-4, || {
        sup(pts, |u, v| Ok(mean_curvature_fd(m, immerse, (u, v), FD_STEP)?.abs()))
    });
    s.max("gauss_curvature_fd", "K = -Laplacian(ln rho)/rho^2", 1e-4, || {
        sup(pts, |u, v| {
            let lr = |u: f64, v: f64| 0.5 * rho2(u, v).ln();
            let lap = fd_derivative(|t| lr(t, v), u, 2, FD_STEP) + fd_derivative(|t| lr(u, t), v, 2, FD_STEP);
            let (r2, k) = curvature(u, v);
            Ok((k + lap / r2).abs())
        })
    });
}

fn helicoid_suite(cfg: &RunConfig, m: MetricParams, s: &mut Suite, meta: &mut Metadata) {
    let k = cfg.parameters.k.unwrap_or(f64::NAN);
    let p = match HelicoidProfile::solve_with(m, k, cfg.tolerances) {
        Ok(p) => p,
        Err(e) => return s.failure("profile", "helicoid profile ODE", e),
    };
    let w = p.w();
    meta.w = Some(w);
    meta.period = Some(p.period());

    s.max("w_quadrature", "W by quadrature over b", 1e-8, || {
        Ok((w - w_by_quadrature(&m, k, 1e-13)?).abs())
    });
    if m.is_flat() {
        s.max("w_flat", "flat case W = pi/sqrt(1-K)", 1e-8, || {
            Ok((w - PI / (1.0 - k).sqrt()).abs())
        });
    }
    s.max("period_quadrature", "translation period by quadrature", 1e-8, || {
        Ok((p.period() - period_by_quadrature(&m, k, 1e-13)?).abs())
    });
    let vs = nodes((-w, w), 41);
    s.max("profile_odd", "b and x3 are odd", 1e-10, || {
        Ok(vs
            .iter()
            .map(|&v| (p.b(v) + p.b(-v)).abs().max((p.x3(v) + p.x3(-v)).abs()))
            .fold(0.0, f64::max))
    });
    s.max(
        "profile_quasi_periodic",
        "b(v+W) = b(v)+pi, x3(v+W) = x3(v)+x3(W)",
        1e-10,
        || {
            Ok(vs
                .iter()
                .map(|&v| {
                    (p.b(v + w) - p.b(v) - PI)
                        .abs()
                        .max((p.x3(v + w) - p.x3(v) - p.x3_at_w()).abs())
                })
                .fold(0.0, f64::max))
        },
    );

    let pts = check_grid(cfg, (-2.0, 2.0), (-2.0 * w, 2.0 * w));
    let l1 = m.lambda1();
    weierstrass_checks(
        s,
        &m,
        &pts,
        Complex64::new(k / 16.0, 0.0),
        &|u, v| p.gauss_map(u, v),
        &|u, v| Complex64::from_polar((-l1 * u).exp(), p.b(v)),
        &|u, v| p.immerse(u, v),
        &|u, v| p.rho2(u, v),
        &|u, v| p.curvature(u, v),
    );
    s.max(
        "rotation_symmetry",
        "rotations by pi about coordinate axes",
        1e-6,
        || {
            sup(&pts, |u, v| {
                let x = p.immerse(u, v);
                Ok(p.immerse(-u, v)
                    .max_abs_diff(&GroupElement::new(-x.x, -x.y, x.z))
                    .max(p.immerse(u, -v).max_abs_diff(&GroupElement::new(-x.x, x.y, -x.z)))
                    .max(p.immerse(-u, -v).max_abs_diff(&GroupElement::new(x.x, -x.y, -x.z))))
            })
        },
    );
    s.max("translation_period", "invariance under (0, 0, 2 x3(W))", 1e-6, || {
        let t = GroupElement::new(0.0, 0.0, p.period());
        sup(&pts, |u, v| {
            Ok((t * p.immerse(u, v)).max_abs_diff(&p.immerse(u, v + 2.0 * w)))
        })
    });
    let u_range = cfg.grid.u_range((-2.0, 2.0));
    s.max(
        "section_collinear",
        "horizontal sections are straight lines",
        1e-10,
        || {
            let mut worst = 0.0f64;
            for level in [0.0, p.period() / 3.0] {
                let sec = p.cross_section(level)?;
                let pts: Vec<_> = nodes(u_range, 41).iter().map(|&u| p.immerse(u, sec.v0)).collect();
                worst = worst.max(collinearity_residual(&pts));
            }
            Ok(worst)
        },
    );
    if m.is_flat() {
        s.max(
            "total_curvature",
            "flat total absolute curvature 4 pi/sqrt(1-K)",
            1e-3,
            || Ok((p.total_abs_curvature(25.0)?.value - 4.0 * PI / (1.0 - k).sqrt()).abs()),
        );
    } else {
        s.min(
            "total_curvature_divergence",
            "total absolute curvature diverges",
            1.1,
            || {
                let t = p.total_abs_curvature(10.0)?;
                Ok(t.doubled_window_value / t.value)
            },
        );
    }
}

fn catenoid_suite(cfg: &RunConfig, m: MetricParams, s: &mut Suite, meta: &mut Metadata) {
    let c = cfg.parameters.c.unwrap_or(f64::NAN);
    let theta = match cfg.parameters.theta {
        Some(t) => t,
        None => match solve_theta_tilde_with(&m, c, cfg.tolerances.root, &cfg.tolerances) {
            Ok(t) => {
                meta.theta_tilde = Some(t);
                t
            }
            Err(e) => return s.failure("theta_tilde", "period root in theta", e),
        },
    };
    meta.theta = Some(theta);
    let p = match crate::catenoid::omega_check(&m, c, theta)
        .and_then(|op| CatenoidProfile::solve_with(m, op, cfg.tolerances))
    {
        Ok(p) => p,
        Err(e) => return s.failure("profile", "catenoid profile ODE", e),
    };
    let big_u = p.u_half();
    let z = p.lattice_vector();
    meta.u_half = Some(big_u);
    meta.h_residual = Some(p.h());
    meta.z = Some([z.re, z.im]);

    s.max("period_closing", "H(c, theta) = 0", 1e-10, || Ok(p.h().abs()));
    s.max("period_integral_forms", "two integral forms of H agree", 1e-8, || {
        Ok((p.h() - h_by_quadrature(&m, p.omega(), 1e-12)?).abs())
    });
    let d = p.omega().d;
    if m.is_flat() {
        s.max("u_flat", "flat case U = pi/sqrt(c^2+2cos(theta)-D^2)", 1e-8, || {
            Ok((big_u - PI / (c * c + 2.0 * theta.cos() - d * d).sqrt()).abs())
        });
    }
    let us = nodes((-big_u, big_u), 41);
    s.max("profile_odd", "phi, f, G are odd", 1e-10, || {
        Ok(us
            .iter()
            .map(|&u| {
                let (a, b) = (p.state(u), p.state(-u));
                (0..3).map(|i| (a[i] + b[i]).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max))
    });
    s.max(
        "profile_quasi_periodic",
        "phi(u+U) = phi(u)+pi, G(u+U) = G(u)+G(U)",
        1e-10,
        || {
            Ok(us
                .iter()
                .map(|&u| {
                    (p.phi(u + big_u) - p.phi(u) - PI)
                        .abs()
                        .max((p.g(u + big_u) - p.g(u) - p.g_at_u()).abs())
                })
                .fold(0.0, f64::max))
        },
    );
    s.max("f_additive", "f(u+U) = f(u)+f(U)", 1e-10, || {
        Ok(us
            .iter()
            .map(|&u| (p.f(u + big_u) - p.f(u) - p.f_at_u()).abs())
            .fold(0.0, f64::max))
    });

    let pts = check_grid(cfg, (-big_u, big_u), (-1.0, 1.0));
    weierstrass_checks(
        s,
        &m,
        &pts,
        Complex64::from_polar(0.125, -theta),
        &|u, v| p.gauss_map(u, v),
        &|u, v| Complex64::from_polar((p.f(u) + c * v).exp(), p.phi(u)),
        &|u, v| p.immerse(u, v),
        &|u, v| p.rho2(u, v),
        &|u, v| p.curvature(u, v),
    );
    s.max("lattice_periodicity", "X(z+Z) = X(z)", 1e-6, || {
        sup(&pts, |u, v| {
            Ok(p.immerse(u, v).max_abs_diff(&p.immerse(u + z.re, v + z.im)))
        })
    });
    s.max(
        "rotation_symmetry",
        "X(z+Z/2) is X(z) rotated by pi about the x3-axis",
        1e-6,
        || {
            sup(&pts, |u, v| {
                let x = p.immerse(u, v);
                Ok(p.immerse(u + 0.5 * z.re, v + 0.5 * z.im)
                    .max_abs_diff(&GroupElement::new(-x.x, -x.y, x.z)))
            })
        },
    );
    s.max("reflection_symmetry", "X(-z) = (x1, -x2, -x3)(z)", 1e-6, || {
        sup(&pts, |u, v| {
            let x = p.immerse(u, v);
            Ok(p.immerse(-u, -v).max_abs_diff(&GroupElement::new(x.x, -x.y, -x.z)))
        })
    });
    if d != 0.0 {
        for mu in [-1.0, 0.0, 1.0] {
            match p.cross_section(mu, 401) {
                Ok(sec) => {
                    s.max(
                        &format!("section_closed[{mu}]"),
                        "horizontal sections are closed",
                        1e-8,
                        || Ok(sec.closure_gap()),
                    );
                    s.min(
                        &format!("section_convex[{mu}]"),
                        "horizontal sections are convex",
                        0.0,
                        || Ok(sec.convexity_check()?.worst_margin),
                    );
                    s.max(
                        &format!("section_winding[{mu}]"),
                        "sections wind once around the x3-axis",
                        0.0,
                        || Ok((sec.winding_number() - 1).abs() as f64),
                    );
                }
                Err(e) => s.failure(&format!("section[{mu}]"), "horizontal sections", e),
            }
        }
    }
    if m.is_flat() {
        s.max("total_curvature", "flat total absolute curvature 4 pi", 1e-3, || {
            Ok((p.total_abs_curvature(20.0)?.value - 4.0 * PI).abs())
        });
    } else {
        s.min(
            "total_curvature_divergence",
            "total absolute curvature diverges",
            1.1,
            || {
                let t = p.total_abs_curvature(20.0)?;
                Ok(t.doubled_window_value / t.value)
            },
        );
    }
}

/// Runs the family's invariant suite. Solver failures become failed records.
pub fn run_verification(cfg: &RunConfig) -> VerificationReport {
    let mut suite = Suite::default();
    let mut meta = Metadata::default();
    match cfg.validate().and_then(|_| cfg.metric_params()) {
        Ok(m) => match cfg.family {
            Family::Helicoid => helicoid_suite(cfg, m, &mut suite, &mut meta),
            Family::Catenoid => catenoid_suite(cfg, m, &mut suite, &mut meta),
        },
        Err(e) => suite.failure("config", "configuration", e),
    }
    let passed = suite.records.iter().filter(|r| r.pass).count();
    VerificationReport {
        family: cfg.family,
        summary: Summary {
            total: suite.records.len(),
            passed,
            failed: suite.records.len() - passed,
        },
        records: suite.records,
        metadata: meta,
        config_hash: cfg.hash(),
        config: cfg.clone(),
    }
}
