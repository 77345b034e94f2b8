//! The catenoid family `𝕮_c`.
//!
//! For `(c, θ)` in the admissible set Ω the Gauss map is
//! `g = e^{f(u) + cv + iφ(u)}`, where
//!
//! ```text
//! φ' = √P(φ),   P = c² + 2 cos θ · B − D² B²,
//! f' = D B,     B = λ1² cos² φ + λ2² sin² φ,   D = sin θ / c,
//! G' = (c − φ') / B.
//! ```
//!
//! The surface closes up when `H(c, θ) = D f(U) + c G(U)` vanishes, `U`
//! being the first positive zero of `φ − π`.

mod limits;
mod section;

pub use limits::{intersection_shrink_study, limit_study, LimitRow, ShrinkRow};
pub use section::{ConvexityReport, CrossSection, SectionSample};

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::e2::{GroupElement, MetricParams};
use crate::error::{Error, Result};
use crate::numerics::{find_root, integrate_ode, integrate_until, quad, quad_singular, OdeSolution, Tolerances};
use crate::surface::{SurfaceGrid, SurfaceSample, TotalCurvature};
use crate::weierstrass::GaussMapValue;

/// A validated point `(c, θ)` of Ω.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaPoint {
    pub c: f64,
    pub theta: f64,
    /// `π` if `c > √2 λ1`, else `arccos(1 − c²/λ1²)`.
    pub theta_plus: f64,
    /// `sin θ / c`.
    pub d: f64,
}

pub fn theta_plus(m: &MetricParams, c: f64) -> f64 {
    let l1 = m.lambda1();
    if c > 2f64.sqrt() * l1 {
        PI
    } else {
        (1.0 - c * c / (l1 * l1)).acos()
    }
}

pub fn omega_check(m: &MetricParams, c: f64, theta: f64) -> Result<OmegaPoint> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::OutsideOmega {
            c,
            theta,
            theta_plus: f64::NAN,
        });
    }
    let tp = theta_plus(m, c);
    if !(theta.abs() < tp) {
        return Err(Error::OutsideOmega {
            c,
            theta,
            theta_plus: tp,
        });
    }
    Ok(OmegaPoint {
        c,
        theta,
        theta_plus: tp,
        d: theta.sin() / c,
    })
}

/// Coefficients of the profile system at a fixed `(c, θ)`.
#[derive(Clone, Copy, Debug)]
struct Coeffs {
    l1sq: f64,
    l2sq: f64,
    c: f64,
    d: f64,
    cos_t: f64,
    /// `2 sin²(θ/2)` and `2 cos²(θ/2)`, i.e. `1 ∓ cos θ` without cancellation.
    one_minus: f64,
    one_plus: f64,
}

impl Coeffs {
    fn new(m: &MetricParams, op: &OmegaPoint) -> Self {
        let h = 0.5 * op.theta;
        Coeffs {
            l1sq: m.lambda1().powi(2),
            l2sq: m.lambda2().powi(2),
            c: op.c,
            d: op.d,
            cos_t: op.theta.cos(),
            one_minus: 2.0 * h.sin().powi(2),
            one_plus: 2.0 * h.cos().powi(2),
        }
    }

    fn b(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        self.l1sq * c * c + self.l2sq * s * s
    }

    /// `P` as a function of `B`, factored as `(c² − (1 − cos θ)B)(c² + (1 + cos θ)B)/c²`.
    fn p(&self, b: f64) -> f64 {
        let c2 = self.c * self.c;
        (c2 - self.one_minus * b) * (c2 + self.one_plus * b) / c2
    }

    fn rhs(&self, phi: f64) -> [f64; 3] {
        let b = self.b(phi);
        let sp = self.p(b).sqrt();
        // c − √P = (D²B² − 2 cos θ B)/(c + √P)
        [sp, self.d * b, (self.d * self.d * b - 2.0 * self.cos_t) / (self.c + sp)]
    }

    /// `(min P, max P)` over `B ∈ [λ2², λ1²]`.
    fn p_range(&self) -> (f64, f64) {
        let (a, b) = (self.p(self.l2sq), self.p(self.l1sq));
        let mut hi = a.max(b);
        if self.d != 0.0 {
            let vertex = self.cos_t / (self.d * self.d);
            if vertex > self.l2sq && vertex < self.l1sq {
                hi = hi.max(self.p(vertex));
            }
        }
        (a.min(b), hi)
    }
}

/// Integrates from `u = 0` until `φ` passes `π` and returns the solution with `U`.
fn half_period(k: &Coeffs, tol: &Tolerances) -> Result<(OdeSolution<3>, f64)> {
    let rhs = |_u: f64, y: &[f64; 3]| k.rhs(y[0]);
    let sol = integrate_until(rhs, [0.0; 3], 0.0, f64::MAX / 4.0, tol.ode, |_, y| y[0] >= PI)?;
    let (a, b) = sol
        .crossing_step(0, PI)
        .ok_or_else(|| Error::NoRoot("φ never reaches π".into()))?;
    let u = sol.locate(0, PI, a, b, tol.root * 1e-2)?;
    Ok((sol, u))
}

fn check_positive(m: &MetricParams, op: &OmegaPoint) -> Result<Coeffs> {
    let k = Coeffs::new(m, op);
    let (lo, _) = k.p_range();
    if !(lo > 0.0) {
        return Err(Error::PositivityViolated(format!(
            "P reaches {lo:e} at c = {}, θ = {}",
            op.c, op.theta
        )));
    }
    Ok(k)
}

/// `H(c, θ) = D f(U) + c G(U)` from the profile ODE up to `U`.
pub fn h_value(m: &MetricParams, op: &OmegaPoint, tol: &Tolerances) -> Result<f64> {
    let k = check_positive(m, op)?;
    let (sol, u) = half_period(&k, tol)?;
    let y = sol.eval(u);
    Ok(op.d * y[1] + op.c * y[2])
}

/// The same `H` written as a single integral over `x = cos φ ∈ [−1, 1]`
/// with the weight `1/√(1 − x²)`.
pub fn h_by_quadrature(m: &MetricParams, op: &OmegaPoint, tol: f64) -> Result<f64> {
    let k = check_positive(m, op)?;
    let (c, d) = (op.c, op.d);
    quad_singular(
        |x| {
            let b = k.l1sq * x * x + k.l2sq * (1.0 - x * x);
            let sp = k.p(b).sqrt();
            (d * d * b * (2.0 * c + sp) - 2.0 * c * k.cos_t) / ((c + sp) * sp)
        },
        tol,
    )
}

/// The flat-metric period function `H = U (D² + c² − c√(c² + 2cos θ − D²))`.
pub fn flat_h(c: f64, theta: f64) -> f64 {
    let d = theta.sin() / c;
    let s = (c * c + 2.0 * theta.cos() - d * d).sqrt();
    PI / s * (d * d + c * c - c * s)
}

/// The unique `θ̃_c ∈ (0, min(π/2, θ_c⁺))` with `H(c, θ̃_c) = 0`.
pub fn solve_theta_tilde(m: &MetricParams, c: f64, tol: f64) -> Result<f64> {
    solve_theta_tilde_with(m, c, tol, &Tolerances::default())
}

pub fn solve_theta_tilde_with(m: &MetricParams, c: f64, tol: f64, tols: &Tolerances) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::config("tol", "must be positive"));
    }
    let tp = omega_check(m, c, 0.0)?.theta_plus;
    let h = |theta: f64| -> Result<f64> { h_value(m, &omega_check(m, c, theta)?, tols) };

    let lo = tol;
    if h(lo)? >= 0.0 {
        return Err(Error::BracketingFailed { c });
    }
    let mut hi = FRAC_PI_2.min(tp) - 1e-9;
    let mut gap = tp - hi;
    loop {
        if h(hi)? > 0.0 {
            break;
        }
        gap *= 0.5;
        if gap < 1e-12 {
            return Err(Error::BracketingFailed { c });
        }
        hi = tp - gap;
    }
    let hf = |theta: f64| h(theta).unwrap_or(f64::NAN);
    let r = find_root(hf, (lo, hi), tol.min(1e-12))?;
    Ok(r.root)
}

/// The lattice vector `Z = 2U − 2i f(U)/c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodVector {
    pub z: Complex64,
}

#[derive(Clone, Debug)]
pub struct CatenoidProfile {
    m: MetricParams,
    omega: OmegaPoint,
    k: Coeffs,
    tol: Tolerances,
    /// `[φ, f, G]` on `[−span, span]`.
    sol: OdeSolution<3>,
    span: f64,
    u_half: f64,
    f_u: f64,
    g_u: f64,
    /// Bounds `a1 ≤ φ' ≤ a2`.
    phi_prime_bounds: (f64, f64),
}

impl CatenoidProfile {
    pub fn solve(m: MetricParams, c: f64, theta: f64) -> Result<Self> {
        Self::solve_with(m, omega_check(&m, c, theta)?, Tolerances::default())
    }

    /// The closed catenoid: `θ` is the root `θ̃_c`.
    pub fn closed(m: MetricParams, c: f64) -> Result<Self> {
        let tol = Tolerances::default();
        let theta = solve_theta_tilde_with(&m, c, tol.root, &tol)?;
        Self::solve_with(m, omega_check(&m, c, theta)?, tol)
    }

    pub fn solve_with(m: MetricParams, op: OmegaPoint, tol: Tolerances) -> Result<Self> {
        let k = check_positive(&m, &op)?;
        let (first, u_half) = half_period(&k, &tol)?;
        let y = first.eval(u_half);

        let rhs = |_u: f64, y: &[f64; 3]| k.rhs(y[0]);
        let span = 2.0 * u_half + 1.0;
        let fwd = integrate_ode(rhs, [0.0; 3], (0.0, span), tol.ode)?;
        let bwd = integrate_ode(rhs, [0.0; 3], (0.0, -span), tol.ode)?;
        let sol = OdeSolution::join(bwd, fwd);

        let (lo, hi) = k.p_range();
        let bounds = (lo.sqrt(), hi.sqrt());
        let slack = 1e-12 * hi.sqrt();
        for d in sol.derivatives() {
            if d[0] < bounds.0 - slack || d[0] > bounds.1 + slack {
                return Err(Error::PositivityViolated(format!(
                    "φ' = {} outside [{}, {}]",
                    d[0], bounds.0, bounds.1
                )));
            }
        }
        Ok(CatenoidProfile {
            m,
            omega: op,
            k,
            tol,
            sol,
            span,
            u_half,
            f_u: y[1],
            g_u: y[2],
            phi_prime_bounds: bounds,
        })
    }

    pub fn metric(&self) -> &MetricParams {
        &self.m
    }

    pub fn omega(&self) -> &OmegaPoint {
        &self.omega
    }

    pub fn c(&self) -> f64 {
        self.omega.c
    }

    pub fn theta(&self) -> f64 {
        self.omega.theta
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// First `u > 0` with `φ(u) = π`.
    pub fn u_half(&self) -> f64 {
        self.u_half
    }

    pub fn f_at_u(&self) -> f64 {
        self.f_u
    }

    pub fn g_at_u(&self) -> f64 {
        self.g_u
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn solution(&self) -> &OdeSolution<3> {
        &self.sol
    }

    pub fn phi_prime_bounds(&self) -> (f64, f64) {
        self.phi_prime_bounds
    }

    /// `H(c, θ)` of this profile.
    pub fn h(&self) -> f64 {
        self.omega.d * self.f_u + self.omega.c * self.g_u
    }

    /// `(φ, f, G)` at `u`, carried beyond the integrated span by
    /// `φ(u + U) = φ(u) + π`, `f(u + U) = f(u) + f(U)`, `G(u + U) = G(u) + G(U)`.
    pub fn state(&self, u: f64) -> [f64; 3] {
        if self.sol.contains(u) {
            return self.sol.eval(u);
        }
        let n = (u / self.u_half).floor();
        let y = self.sol.eval(u - n * self.u_half);
        [y[0] + n * PI, y[1] + n * self.f_u, y[2] + n * self.g_u]
    }

    pub fn phi(&self, u: f64) -> f64 {
        self.state(u)[0]
    }

    pub fn f(&self, u: f64) -> f64 {
        self.state(u)[1]
    }

    pub fn g(&self, u: f64) -> f64 {
        self.state(u)[2]
    }

    /// `B(u) = λ1² cos² φ + λ2² sin² φ`.
    pub fn weight(&self, u: f64) -> f64 {
        self.k.b(self.phi(u))
    }

    /// `(φ', f', G')` at `u`.
    pub fn derivatives(&self, u: f64) -> [f64; 3] {
        self.k.rhs(self.phi(u))
    }

    /// `(φ'', f'')` in closed form.
    pub fn second_derivatives(&self, u: f64) -> (f64, f64) {
        let phi = self.phi(u);
        let b = self.k.b(phi);
        let b_phi = -self.m.anisotropy() * (2.0 * phi).sin();
        let p_b = 2.0 * self.k.cos_t - 2.0 * self.k.d * self.k.d * b;
        let sp = self.k.p(b).sqrt();
        (0.5 * p_b * b_phi, self.k.d * b_phi * sp)
    }

    /// Pointwise data shared by the surface evaluators.
    fn local(&self, u: f64, v: f64) -> Local {
        let [phi, f, g] = self.state(u);
        let b = self.k.b(phi);
        let [dphi, df, _] = self.k.rhs(phi);
        Local {
            phi,
            g,
            b,
            dphi,
            df,
            cm: self.omega.c - dphi,
            a: f + self.omega.c * v,
        }
    }

    pub fn immerse(&self, u: f64, v: f64) -> GroupElement {
        let (l1, l2) = (self.m.lambda1(), self.m.lambda2());
        let (c, d) = (self.omega.c, self.omega.d);
        let p = self.local(u, v);
        let x3 = l1 * l2 * (p.g - d * v);
        let (ch, sh) = (p.a.cosh(), p.a.sinh());
        let (s3, c3) = x3.sin_cos();
        let ld = l1 * l2 * d;
        let m1 = c * c3 * ch - ld * s3 * sh;
        let m2 = c * c3 * sh - ld * s3 * ch;
        let m3 = c * s3 * sh + ld * c3 * ch;
        let m4 = c * s3 * ch + ld * c3 * sh;
        let pre = -1.0 / ((c * c + ld * ld) * p.b);
        let (sp, cp) = p.phi.sin_cos();
        let (fp, cm) = (p.df, p.cm);
        GroupElement::new(
            pre * (fp * cp * m1 / l1 - cm * sp * m2 / l1 - cm * cp * m3 / l2 - fp * sp * m4 / l2),
            pre * (fp * cp * m4 / l1 - cm * sp * m3 / l1 + cm * cp * m2 / l2 + fp * sp * m1 / l2),
            x3,
        )
    }

    /// Gauss map with Wirtinger derivatives and `g_zz̄`, in closed form.
    pub fn gauss_map(&self, u: f64, v: f64) -> (GaussMapValue, Complex64) {
        let c = self.omega.c;
        let p = self.local(u, v);
        let (phi2, f2) = self.second_derivatives(u);
        let g = Complex64::from_polar(p.a.exp(), p.phi);
        let gz = g * Complex64::new(p.df, p.dphi - c) * 0.5;
        let gzbar = g * Complex64::new(p.df, p.dphi + c) * 0.5;
        let gzz = g * Complex64::new(p.df * p.df - p.dphi * p.dphi + f2 + c * c, phi2 + 2.0 * p.df * p.dphi) * 0.25;
        (GaussMapValue::new(g, gz, gzbar), gzz)
    }

    /// `η = ((c − φ') + i f') / B`.
    pub fn eta(&self, u: f64) -> Complex64 {
        let p = self.local(u, 0.0);
        Complex64::new(p.cm, p.df) / p.b
    }

    pub fn rho2(&self, u: f64, v: f64) -> f64 {
        let p = self.local(u, v);
        (p.df * p.df + p.cm * p.cm) * p.a.cosh().powi(2) / (p.b * p.b)
    }

    /// `Δ ln ρ`, whose absolute value is the density of `|𝒦| dA`.
    pub fn laplacian_log_rho(&self, u: f64, v: f64) -> f64 {
        let (lead, tail) = self.laplacian_parts(u);
        let a = self.local(u, v).a;
        lead / a.cosh().powi(2) + tail.0 + tail.1 * a.tanh()
    }

    /// Splits `Δ ln ρ = lead / cosh² A + t0 + t1 tanh A`, the coefficients
    /// depending on `u` only.
    fn laplacian_parts(&self, u: f64) -> (f64, (f64, f64)) {
        let dl = self.m.anisotropy();
        let c = self.omega.c;
        let p = self.local(u, 0.0);
        let n = p.df * p.df + p.cm * p.cm;
        let (s2, c2) = (2.0 * p.phi).sin_cos();
        let t0 = dl * dl * s2 * s2 * n / (4.0 * p.b * p.b) + dl * p.dphi * (p.dphi - c) * c2 / p.b;
        let t1 = -dl * p.dphi * p.df * s2 / p.b;
        (c * c + p.df * p.df, (t0, t1))
    }

    /// `(ρ², 𝒦)` at `(u, v)`.
    pub fn curvature(&self, u: f64, v: f64) -> (f64, f64) {
        let dl = self.m.anisotropy();
        let c = self.omega.c;
        let p = self.local(u, v);
        let n = p.df * p.df + p.cm * p.cm;
        let ch2 = p.a.cosh().powi(2);
        let (s2, c2) = (2.0 * p.phi).sin_cos();
        let gauss = -p.b * p.b * (c * c + p.df * p.df) / (ch2 * ch2 * n)
            - dl * dl * s2 * s2 / (4.0 * ch2)
            - dl * p.b * p.dphi * ((p.dphi - c) * c2 - p.df * p.a.tanh() * s2) / (ch2 * n);
        (n * ch2 / (p.b * p.b), gauss)
    }

    /// The lattice vector of the closed catenoid. Fails unless `|H| ≤ tol`.
    pub fn period_vector(&self, tol: f64) -> Result<PeriodVector> {
        let h = self.h();
        if !(h.abs() <= tol) {
            return Err(Error::PeriodObstruction { h, tol });
        }
        Ok(PeriodVector {
            z: self.lattice_vector(),
        })
    }

    /// `2U − 2i f(U)/c`, whether or not the period closes.
    pub fn lattice_vector(&self) -> Complex64 {
        Complex64::new(2.0 * self.u_half, -2.0 * self.f_u / self.omega.c)
    }

    /// `x3(z + Z) − x3(z) = 2 λ1 λ2 H / c`.
    pub fn height_shift(&self) -> f64 {
        2.0 * self.m.lambda1() * self.m.lambda2() * self.h() / self.omega.c
    }

    pub fn sample_grid(&self, u_range: (f64, f64), v_range: (f64, f64), nu: usize, nv: usize) -> Result<SurfaceGrid> {
        SurfaceGrid::sample(u_range, v_range, nu, nv, |u, v| {
            let (rho2, gauss_curvature) = self.curvature(u, v);
            Ok(SurfaceSample {
                u,
                v,
                position: self.immerse(u, v),
                gauss_map: self.gauss_map(u, v).0.g,
                rho2,
                gauss_curvature,
            })
        })
    }

    /// `∫∫ |Δ ln ρ| du dv` over `u ∈ [−U, U]`, `|v| ≤ v_window`, compared
    /// with the same integral at twice the window.
    pub fn total_abs_curvature(&self, v_window: f64) -> Result<TotalCurvature> {
        let c = self.omega.c;
        let integral = |vw: f64| -> Result<f64> {
            if vw <= 0.0 {
                return Ok(0.0);
            }
            let inner = |u: f64| -> f64 {
                let (lead, (t0, t1)) = self.laplacian_parts(u);
                let f = self.f(u);
                quad(
                    |v| {
                        let a = f + c * v;
                        (lead / a.cosh().powi(2) + t0 + t1 * a.tanh()).abs()
                    },
                    -vw,
                    vw,
                    1e-10,
                )
                .unwrap_or(f64::NAN)
            };
            let u = self.u_half;
            let total = quad(inner, -u, 0.0, 1e-9)? + quad(inner, 0.0, u, 1e-9)?;
            if total.is_finite() {
                Ok(total)
            } else {
                Err(Error::NoConvergence {
                    a: -u,
                    b: u,
                    estimate: f64::NAN,
                })
            }
        };
        TotalCurvature::from_windows(v_window, integral(v_window)?, integral(2.0 * v_window)?)
    }
}

#[derive(Clone, Copy, Debug)]
struct Local {
    phi: f64,
    g: f64,
    b: f64,
    dphi: f64,
    df: f64,
    cm: f64,
    a: f64,
}
