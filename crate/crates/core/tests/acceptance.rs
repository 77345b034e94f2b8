//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use e2surf::catenoid::{intersection_shrink_study, limit_study, solve_theta_tilde, theta_plus, CatenoidProfile};
use e2surf::cli::limit_grid;
use e2surf::helicoid::{collinearity_residual, solve_k_for_period, HelicoidProfile};
use e2surf::numerics::fd_derivative;
use e2surf::weierstrass::{hopf, mean_curvature_fd, pde_residual, wirtinger_fd};
use e2surf::{GroupElement, MetricParams, Result, Tolerances};

const FD_H: f64 = 1e-3;

fn metric(l1: f64) -> MetricParams {
    MetricParams::new(l1, 1.0).unwrap()
}

fn grid(u: (f64, f64), v: (f64, f64), n: usize) -> Vec<(f64, f64)> {
    let at = |r: (f64, f64), i: usize| r.0 + (r.1 - r.0) * i as f64 / (n - 1) as f64;
    (0..n).flat_map(|j| (0..n).map(move |i| (at(u, i), at(v, j)))).collect()
}

fn random_points(rng: &mut ChaCha8Rng, u: (f64, f64), v: (f64, f64), n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| (rng.gen_range(u.0..u.1), rng.gen_range(v.0..v.1)))
        .collect()
}

fn sup(pts: &[(f64, f64)], f: impl Fn(f64, f64) -> Result<f64>) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(u, v) in pts {
        let x = f(u, v)?;
        if x.is_nan() {
            return Ok(f64::NAN);
        }
        worst = worst.max(x);
    }
    Ok(worst)
}

/// Independent bisection on the flat period function.
fn flat_theta_oracle(c: f64) -> f64 {
    let h = |t: f64| {
        let d = t.sin() / c;
        d * d + c * c - c * (c * c + 2.0 * t.cos() - d * d).sqrt()
    };
    let (mut lo, mut hi) = (1e-9, FRAC_PI_2);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn flat_helicoid() -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut pass = true;
    for k in [0.25, 0.5, 0.75, 0.9] {
        let t0 = Instant::now();
        let p = HelicoidProfile::solve(MetricParams::FLAT, k)?;
        let dw = (p.w() - PI / (1.0 - k).sqrt()).abs();
        let tc = p.total_abs_curvature(25.0)?;
        let dc = (tc.value - 4.0 * PI / (1.0 - k).sqrt()).abs();
        let secs = t0.elapsed().as_secs_f64();
        pass &= dw < 1e-8 && dc < 1e-3 && secs < 5.0;
        lines.push(format!("K={k}: dW={dw:.1e} dTC={dc:.1e} {secs:.2}s"));
    }
    outcome(pass, lines.join("; "))
}

fn hopf_constancy() -> Result<Outcome> {
    let mut worst_h = 0.0f64;
    let mut worst_c = 0.0f64;
    for l1 in [1.0, 2.0, 5.0] {
        let m = metric(l1);
        let h = HelicoidProfile::solve(m, 0.5)?;
        let w = h.w();
        let q = Complex64::new(0.5 / 16.0, 0.0);
        worst_h = worst_h.max(sup(&grid((-2.0, 2.0), (-w, w), 30), |u, v| {
            Ok((hopf(&m, &h.gauss_map(u, v).0)?.q - q).norm())
        })?);
        let c = CatenoidProfile::closed(m, 2.0)?;
        let u0 = c.u_half();
        let q = Complex64::from_polar(0.125, -c.theta());
        worst_c = worst_c.max(sup(&grid((-u0, u0), (-1.0, 1.0), 30), |u, v| {
            Ok((hopf(&m, &c.gauss_map(u, v).0)?.q - q).norm())
        })?);
    }
    outcome(
        worst_h < 1e-10 && worst_c < 1e-10,
        format!("helicoid {worst_h:.1e}, catenoid {worst_c:.1e}"),
    )
}

fn pde_residuals() -> Result<Outcome> {
    let mut analytic = 0.0f64;
    // the residual is homogeneous of degree one in g, so the finite-difference
    // error is measured relative to 1 + |g|
    let mut fd = 0.0f64;
    let mut fd_abs = 0.0f64;
    for l1 in [1.0, 2.0, 5.0] {
        let m = metric(l1);
        let h = HelicoidProfile::solve(m, 0.5)?;
        let w = h.w();
        let pts = grid((-2.0, 2.0), (-w, w), 10);
        analytic = analytic.max(sup(&pts, |u, v| {
            let (gv, gzz) = h.gauss_map(u, v);
            Ok(pde_residual(&m, &gv, gzz)?.norm())
        })?);
        let g = |u: f64, v: f64| Complex64::from_polar((-l1 * u).exp(), h.b(v));
        fd = fd.max(sup(&pts, |u, v| {
            let (gv, gzz) = wirtinger_fd(g, u, v, FD_H);
            Ok(pde_residual(&m, &gv, gzz)?.norm() / (1.0 + gv.g.norm()))
        })?);
        fd_abs = fd_abs.max(sup(&pts, |u, v| {
            let (gv, gzz) = wirtinger_fd(g, u, v, FD_H);
            Ok(pde_residual(&m, &gv, gzz)?.norm())
        })?);

        let c = CatenoidProfile::closed(m, 2.0)?;
        let u0 = c.u_half();
        let pts = grid((-u0, u0), (-1.0, 1.0), 10);
        analytic = analytic.max(sup(&pts, |u, v| {
            let (gv, gzz) = c.gauss_map(u, v);
            Ok(pde_residual(&m, &gv, gzz)?.norm())
        })?);
        let g = |u: f64, v: f64| Complex64::from_polar((c.f(u) + c.c() * v).exp(), c.phi(u));
        fd = fd.max(sup(&pts, |u, v| {
            let (gv, gzz) = wirtinger_fd(g, u, v, FD_H);
            Ok(pde_residual(&m, &gv, gzz)?.norm() / (1.0 + gv.g.norm()))
        })?);
        fd_abs = fd_abs.max(sup(&pts, |u, v| {
            let (gv, gzz) = wirtinger_fd(g, u, v, FD_H);
            Ok(pde_residual(&m, &gv, gzz)?.norm())
        })?);
    }
    outcome(
        analytic < 1e-10 && fd < 1e-5,
        format!("analytic {analytic:.1e}, finite differences {fd:.1e} relative ({fd_abs:.1e} absolute)"),
    )
}

fn period_problem() -> Result<Outcome> {
    let mut worst_h = 0.0f64;
    let mut in_range = true;
    let mut worst_lattice = 0.0f64;
    for l1 in [1.0, 2.0, 5.0] {
        let m = metric(l1);
        for c in [1.5, 2.0, 5.0, 20.0] {
            let p = CatenoidProfile::closed(m, c)?;
            let t = p.theta();
            in_range &= t > 0.0 && t < FRAC_PI_2.min(theta_plus(&m, c));
            worst_h = worst_h.max(p.h().abs());
            let z = p.lattice_vector();
            let u0 = p.u_half();
            worst_lattice = worst_lattice.max(sup(&grid((-u0, u0), (-1.0, 1.0), 10), |u, v| {
                Ok(p.immerse(u, v).max_abs_diff(&p.immerse(u + z.re, v + z.im)))
            })?);
        }
    }
    let flat = solve_theta_tilde(&MetricParams::FLAT, 2.0, 1e-12)?;
    let oracle = (flat - flat_theta_oracle(2.0)).abs();
    outcome(
        worst_h < 1e-10 && in_range && oracle < 1e-8 && worst_lattice < 1e-6,
        format!("|H| {worst_h:.1e}, in range {in_range}, flat oracle {oracle:.1e}, lattice {worst_lattice:.1e}"),
    )
}

fn flat_catenoid() -> Result<Outcome> {
    let t0 = Instant::now();
    let c = 2.0;
    let p = CatenoidProfile::closed(MetricParams::FLAT, c)?;
    let t = p.theta();
    let d = t.sin() / c;
    let du = (p.u_half() - PI / (c * c + 2.0 * t.cos() - d * d).sqrt()).abs();
    let dc = (p.total_abs_curvature(20.0)?.value - 4.0 * PI).abs();
    let secs = t0.elapsed().as_secs_f64();
    outcome(
        du < 1e-8 && dc < 1e-3 && secs < 10.0,
        format!("dU={du:.1e} dTC={dc:.1e} {secs:.2}s"),
    )
}

fn period_inversion() -> Result<Outcome> {
    let m = metric(2.0);
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    let mut ks = Vec::new();
    for t in [0.5, 2.0 * PI, 10.0] {
        let k = solve_k_for_period(&m, t, &tol)?;
        worst = worst.max((HelicoidProfile::solve(m, k)?.period() - t).abs());
        ks.push(format!("{k:.6}"));
    }
    outcome(worst < 1e-8, format!("K = [{}], worst {worst:.1e}", ks.join(", ")))
}

fn minimality() -> Result<Outcome> {
    let m = metric(2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = HelicoidProfile::solve(m, 0.5)?;
    let w = h.w();
    let pts = random_points(&mut rng, (-2.0, 2.0), (-w, w), 50);
    let wh = sup(&pts, |u, v| {
        Ok(mean_curvature_fd(&m, |a, b| h.immerse(a, b), (u, v), FD_H)?.abs())
    })?;
    let c = CatenoidProfile::closed(m, 2.0)?;
    let u0 = c.u_half();
    let pts = random_points(&mut rng, (-u0, u0), (-1.0, 1.0), 50);
    let wc = sup(&pts, |u, v| {
        Ok(mean_curvature_fd(&m, |a, b| c.immerse(a, b), (u, v), FD_H)?.abs())
    })?;
    outcome(wh < 1e-4 && wc < 1e-4, format!("helicoid {wh:.1e}, catenoid {wc:.1e}"))
}

fn sections() -> Result<Outcome> {
    let mut colinear = 0.0f64;
    let mut gap = 0.0f64;
    let mut convex = true;
    let mut windings = Vec::new();
    for l1 in [1.0, 2.0, 5.0] {
        let m = metric(l1);
        let h = HelicoidProfile::solve(m, 0.5)?;
        for level in [0.0, 0.3 * h.period(), -1.1] {
            let s = h.cross_section(level)?;
            let pts: Vec<GroupElement> = (0..41).map(|i| h.immerse(-2.0 + 0.1 * i as f64, s.v0)).collect();
            colinear = colinear.max(collinearity_residual(&pts));
        }
        let c = CatenoidProfile::closed(m, 2.0)?;
        for mu in [-1.0, 0.0, 1.0] {
            let s = c.cross_section(mu, 401)?;
            gap = gap.max(s.closure_gap());
            convex &= s.convexity_check()?.pass;
            windings.push(s.winding_number());
        }
    }
    let wound = windings.iter().all(|&n| n == 1);
    outcome(
        colinear < 1e-10 && gap < 1e-8 && convex && wound,
        format!("collinearity {colinear:.1e}, closure {gap:.1e}, convex {convex}, windings {windings:?}"),
    )
}

/// `𝒦 + Δ(ln ρ)/ρ²` with the Laplacian by finite differences.
fn curvature_defect(rho2: impl Fn(f64, f64) -> f64, k: f64, u: f64, v: f64) -> f64 {
    let lr = |a: f64, b: f64| 0.5 * rho2(a, b).ln();
    let lap = fd_derivative(|t| lr(t, v), u, 2, FD_H) + fd_derivative(|t| lr(u, t), v, 2, FD_H);
    (k + lap / rho2(u, v)).abs()
}

fn curvature_cross_check() -> Result<Outcome> {
    let m = metric(2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = HelicoidProfile::solve(m, 0.5)?;
    let w = h.w();
    let pts = random_points(&mut rng, (-2.0, 2.0), (-w, w), 20);
    let wh = sup(&pts, |u, v| {
        Ok(curvature_defect(|a, b| h.rho2(a, b), h.curvature(u, v).1, u, v))
    })?;
    let c = CatenoidProfile::closed(m, 2.0)?;
    let u0 = c.u_half();
    let pts = random_points(&mut rng, (-u0, u0), (-1.0, 1.0), 20);
    let wc = sup(&pts, |u, v| {
        Ok(curvature_defect(|a, b| c.rho2(a, b), c.curvature(u, v).1, u, v))
    })?;
    let dh = h.total_abs_curvature(10.0)?.divergent;
    let dc = c.total_abs_curvature(20.0)?.divergent;
    outcome(
        wh < 1e-4 && wc < 1e-4 && dh && dc,
        format!("helicoid {wh:.1e}, catenoid {wc:.1e}, divergence flags {dh}/{dc}"),
    )
}

fn limits() -> Result<Outcome> {
    let m = metric(2.0);
    let rows = limit_study(&m, &[10.0, 50.0, 100.0], &limit_grid())?;
    let dev: Vec<f64> = rows.iter().map(|r| r.deviation).collect();
    let dec = dev.windows(2).all(|w| w[1] < w[0]);
    let shrink = intersection_shrink_study(&m, &[2.0, 5.0, 10.0, 50.0], 401)?;
    let radii: Vec<f64> = shrink.iter().map(|r| r.radius).collect();
    let shrinks = radii.windows(2).all(|w| w[1] < w[0]) && radii[radii.len() - 1] < 1e-2 * radii[0];
    let t100 = solve_theta_tilde(&MetricParams::FLAT, 100.0, 1e-12)?;
    let near = (t100 - FRAC_PI_2).abs() < 0.05;
    outcome(
        dec && dev[2] < 0.05 && shrinks && near,
        format!(
            "deviations {:?}, radii {:?}, flat theta_100 {t100:.4}",
            dev.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>(),
            radii.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>()
        ),
    )
}

fn symmetries() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for l1 in [1.0, 2.0, 5.0] {
        let m = metric(l1);
        let h = HelicoidProfile::solve(m, 0.5)?;
        let w = h.w();
        worst = worst.max(sup(&grid((-2.0, 2.0), (-2.0 * w, 2.0 * w), 15), |u, v| {
            let x = h.immerse(u, v);
            Ok(h.immerse(-u, v)
                .max_abs_diff(&GroupElement::new(-x.x, -x.y, x.z))
                .max(h.immerse(u, -v).max_abs_diff(&GroupElement::new(-x.x, x.y, -x.z)))
                .max(h.immerse(-u, -v).max_abs_diff(&GroupElement::new(x.x, -x.y, -x.z))))
        })?);
        let c = CatenoidProfile::closed(m, 2.0)?;
        let z = c.lattice_vector();
        let u0 = c.u_half();
        worst = worst.max(sup(&grid((-u0, u0), (-1.0, 1.0), 15), |u, v| {
            let x = c.immerse(u, v);
            Ok(c.immerse(u + 0.5 * z.re, v + 0.5 * z.im)
                .max_abs_diff(&GroupElement::new(-x.x, -x.y, x.z))
                .max(c.immerse(-u, -v).max_abs_diff(&GroupElement::new(x.x, -x.y, -x.z))))
        })?);
    }
    outcome(worst < 1e-6, format!("worst {worst:.1e}"))
}

fn f_additivity() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut flat_gap = 0.0;
    for l1 in [1.0, 2.0] {
        let p = CatenoidProfile::closed(metric(l1), 2.0)?;
        let u0 = p.u_half();
        for i in 0..41 {
            let u = -u0 + 2.0 * u0 * i as f64 / 40.0;
            worst = worst.max((p.f(u + u0) - p.f(u) - p.f_at_u()).abs());
        }
        if l1 == 1.0 {
            flat_gap = (p.f_at_u() - PI).abs();
        }
    }
    outcome(
        worst < 1e-10 && flat_gap > 0.1,
        format!("additivity {worst:.1e}, flat |f(U) - pi| = {flat_gap:.3}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("flat helicoid constants", flat_helicoid),
        ("Hopf differential constant", hopf_constancy),
        ("harmonic map residual", pde_residuals),
        ("catenoid period problem", period_problem),
        ("flat catenoid", flat_catenoid),
        ("helicoid period inversion", period_inversion),
        ("minimality by finite differences", minimality),
        ("horizontal sections", sections),
        ("curvature cross-check", curvature_cross_check),
        ("large-c limits", limits),
        ("rotation and reflection symmetries", symmetries),
        ("f additivity", f_additivity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{:>2} {} {name} ({:.2}s): {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            t0.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
