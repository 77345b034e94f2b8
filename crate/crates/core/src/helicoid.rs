//! The helicoid family `𝕳_K`, `0 < |K| < 1`.
//!
//! The Gauss map is `g = e^{−λ1 u + i b(v)}` where `b` solves
//! `b' = √(λ1² − K(λ1² cos² b + λ2² sin² b))`, `b(0) = 0`, and the height
//! function solves `x3' = λ1 λ2 K / (λ1 + b')`, `x3(0) = 0`. `W` is the first
//! positive zero of `b − π`; the surface is invariant under left translation
//! by `(0, 0, 2 x3(W))`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::e2::{GroupElement, MetricParams};
use crate::error::{Error, Result};
use crate::numerics::{find_root, integrate_ode, integrate_until, quad, OdeSolution, Tolerances};
pub use crate::surface::TotalCurvature;
use crate::surface::{SurfaceGrid, SurfaceSample};
use crate::weierstrass::GaussMapValue;

/// Largest admissible `|K|`.
pub const K_MAX: f64 = 1.0 - 1e-6;

#[derive(Clone, Debug)]
pub struct HelicoidProfile {
    m: MetricParams,
    k: f64,
    tol: Tolerances,
    /// `[b, x3]` on `[−span, span]`.
    sol: OdeSolution<2>,
    span: f64,
    w: f64,
    x3w: f64,
}

fn check_k(k: f64) -> Result<()> {
    if !(k.is_finite() && k != 0.0 && k.abs() < K_MAX) {
        return Err(Error::InvalidK { k });
    }
    Ok(())
}

/// `b'` as a function of `b`, arranged as
/// `λ1²(1 − K) cos² b + (λ1² − K λ2²) sin² b` to stay accurate as `K → 1`.
fn b_prime(m: &MetricParams, k: f64, b: f64) -> f64 {
    let (l1sq, l2sq) = (m.lambda1().powi(2), m.lambda2().powi(2));
    let (s, c) = b.sin_cos();
    (l1sq * (1.0 - k) * c * c + (l1sq - k * l2sq) * s * s).sqrt()
}

fn x3_prime(m: &MetricParams, k: f64, bp: f64) -> f64 {
    m.lambda1() * m.lambda2() * k / (m.lambda1() + bp)
}

/// The period `2 x3(W)` as an integral over `b ∈ [0, π]`, without solving
/// the profile ODE.
pub fn period_by_quadrature(m: &MetricParams, k: f64, tol: f64) -> Result<f64> {
    let f = |w: f64| {
        let bp = b_prime(m, k, w);
        2.0 * x3_prime(m, k, bp) / bp
    };
    // the integrand is symmetric about π/2 and peaks at the ends when K → 1
    Ok(2.0 * quad(f, 0.0, 0.5 * PI, 0.5 * tol)?)
}

/// `W = ∫_0^π dw / b'(w)`, again without the ODE.
pub fn w_by_quadrature(m: &MetricParams, k: f64, tol: f64) -> Result<f64> {
    Ok(2.0 * quad(|w| 1.0 / b_prime(m, k, w), 0.0, 0.5 * PI, 0.5 * tol)?)
}

impl HelicoidProfile {
    pub fn solve(m: MetricParams, k: f64) -> Result<Self> {
        Self::solve_with(m, k, Tolerances::default())
    }

    pub fn solve_with(m: MetricParams, k: f64, tol: Tolerances) -> Result<Self> {
        check_k(k)?;
        let rhs = |_v: f64, y: &[f64; 2]| {
            let bp = b_prime(&m, k, y[0]);
            [bp, x3_prime(&m, k, bp)]
        };

        // locate W
        let first = integrate_until(rhs, [0.0, 0.0], 0.0, f64::MAX / 4.0, tol.ode, |_, y| y[0] >= PI)?;
        let (a, b) = first
            .crossing_step(0, PI)
            .ok_or_else(|| Error::NoRoot("b never reaches π".into()))?;
        let w = first.locate(0, PI, a, b, tol.root * 1e-2)?;

        let span = 2.0 * w + 1.0;
        let fwd = integrate_ode(rhs, [0.0, 0.0], (0.0, span), tol.ode)?;
        let bwd = integrate_ode(rhs, [0.0, 0.0], (0.0, -span), tol.ode)?;
        let sol = OdeSolution::join(bwd, fwd);
        let x3w = sol.eval(w)[1];
        Ok(HelicoidProfile {
            m,
            k,
            tol,
            sol,
            span,
            w,
            x3w,
        })
    }

    pub fn metric(&self) -> &MetricParams {
        &self.m
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// First `v > 0` with `b(v) = π`.
    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn x3_at_w(&self) -> f64 {
        self.x3w
    }

    /// Translation period `2 x3(W)` along the `x3`-axis.
    pub fn period(&self) -> f64 {
        2.0 * self.x3w
    }

    /// Half-width of the directly integrated interval.
    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn solution(&self) -> &OdeSolution<2> {
        &self.sol
    }

    /// `(b, x3)` at `v`. Outside the integrated span the values are carried
    /// over by `b(v + W) = b(v) + π`, `x3(v + W) = x3(v) + x3(W)`.
    pub fn b_x3(&self, v: f64) -> (f64, f64) {
        if self.sol.contains(v) {
            let y = self.sol.eval(v);
            return (y[0], y[1]);
        }
        let n = (v / self.w).floor();
        let y = self.sol.eval(v - n * self.w);
        (y[0] + n * PI, y[1] + n * self.x3w)
    }

    pub fn b(&self, v: f64) -> f64 {
        self.b_x3(v).0
    }

    pub fn x3(&self, v: f64) -> f64 {
        self.b_x3(v).1
    }

    /// `b'(v)` evaluated from the ODE right-hand side.
    pub fn b_prime(&self, v: f64) -> f64 {
        b_prime(&self.m, self.k, self.b(v))
    }

    /// `b''(v) = K (λ1² − λ2²) sin b cos b`.
    pub fn b_second(&self, v: f64) -> f64 {
        let b = self.b(v);
        self.k * self.m.anisotropy() * b.sin() * b.cos()
    }

    pub fn x3_prime(&self, v: f64) -> f64 {
        x3_prime(&self.m, self.k, self.b_prime(v))
    }

    pub fn immerse(&self, u: f64, v: f64) -> GroupElement {
        let (l1, l2) = (self.m.lambda1(), self.m.lambda2());
        let (b, x3) = self.b_x3(v);
        let pre = self.x3_prime(v) * (-l1 * u).sinh() / (l1 * l1 * l2);
        let (sb, cb) = b.sin_cos();
        let (s3, c3) = x3.sin_cos();
        GroupElement::new(
            pre * (c3 * sb / l1 + s3 * cb / l2),
            pre * (s3 * sb / l1 - c3 * cb / l2),
            x3,
        )
    }

    /// Gauss map with its Wirtinger derivatives and `g_zz̄`, all in closed form.
    pub fn gauss_map(&self, u: f64, v: f64) -> (GaussMapValue, Complex64) {
        let l1 = self.m.lambda1();
        let b = self.b(v);
        let bp = b_prime(&self.m, self.k, b);
        let bpp = self.k * self.m.anisotropy() * b.sin() * b.cos();
        let g = Complex64::from_polar((-l1 * u).exp(), b);
        let gv = GaussMapValue::new(g, g * (0.5 * (bp - l1)), g * (-0.5 * (bp + l1)));
        let gzzbar = g * Complex64::new(l1 * l1 - bp * bp, bpp) * 0.25;
        (gv, gzzbar)
    }

    /// `η = −iK/(λ1 + b')`.
    pub fn eta(&self, v: f64) -> Complex64 {
        Complex64::new(0.0, -self.k / (self.m.lambda1() + self.b_prime(v)))
    }

    /// The conformal factor `ρ²`.
    pub fn rho2(&self, u: f64, v: f64) -> f64 {
        let c = (self.m.lambda1() * u).cosh();
        (self.k * c / (self.m.lambda1() + self.b_prime(v))).powi(2)
    }

    /// `Δ ln ρ`; also the density of `|𝒦| dA` in `du dv` up to sign.
    pub fn laplacian_log_rho(&self, u: f64, v: f64) -> f64 {
        let l1 = self.m.lambda1();
        let d = self.m.anisotropy();
        let b = self.b(v);
        let bp = b_prime(&self.m, self.k, b);
        let s = l1 + bp;
        let ch = (l1 * u).cosh();
        l1 * l1 / (ch * ch) - self.k * d * bp * (2.0 * b).cos() / s
            + (self.k * d * (2.0 * b).sin()).powi(2) / (4.0 * s * s)
    }

    /// `(ρ², 𝒦)` at `(u, v)`.
    pub fn curvature(&self, u: f64, v: f64) -> (f64, f64) {
        let (l1, l2) = (self.m.lambda1(), self.m.lambda2());
        let d = self.m.anisotropy();
        let k = self.k;
        let b = self.b(v);
        let bp = b_prime(&self.m, k, b);
        let ch2 = (l1 * u).cosh().powi(2);
        let c2b = (2.0 * b).cos();
        let weighted = l1 * l1 * b.cos().powi(2) + l2 * l2 * b.sin().powi(2);
        let gauss = -l1 * l1 * (l1 + bp).powi(2) / (k * k * ch2 * ch2) - d * d * (2.0 * b).sin().powi(2) / (4.0 * ch2)
            + l1 * d * c2b * (bp + l1) / (k * ch2)
            - d * weighted * c2b / ch2;
        (self.rho2(u, v), gauss)
    }

    /// The section `{x3 = C}`: the line `s ↦ (k1 s, k2 s, C)`,
    /// `s = sinh(−λ1 u)`, reached at `v = v0`.
    pub fn cross_section(&self, c: f64) -> Result<HelicoidSection> {
        let (l1, l2) = (self.m.lambda1(), self.m.lambda2());
        let v0 = if c == 0.0 {
            0.0
        } else {
            // x3 is monotone with x3(v + W) = x3(v) + x3(W)
            let n = (c / self.x3w).floor();
            let (lo, hi) = ((n - 1.0) * self.w, (n + 2.0) * self.w);
            find_root(|v| self.x3(v) - c, (lo, hi), self.tol.root * 1e-2)?.root
        };
        let b = self.b(v0);
        let xp = self.x3_prime(v0);
        let (sb, cb) = b.sin_cos();
        let (s3, c3) = c.sin_cos();
        let pre = xp / (l1 * l1 * l2);
        Ok(HelicoidSection {
            c,
            v0,
            k1: pre * (c3 * sb / l1 + s3 * cb / l2),
            k2: pre * (s3 * sb / l1 - c3 * cb / l2),
        })
    }

    /// Samples the immersion on a grid together with the Gauss map, `ρ²` and `𝒦`.
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

    /// `∫∫ |Δ ln ρ| du dv` over `|u| ≤ u_window`, `v ∈ [0, 2W]`, compared
    /// with the same integral at twice the window.
    pub fn total_abs_curvature(&self, u_window: f64) -> Result<TotalCurvature> {
        let tol = 1e-9;
        let integral = |l: f64| -> Result<f64> {
            if l <= 0.0 {
                return Ok(0.0);
            }
            let inner = |v: f64| -> f64 {
                // integrand is even in u
                quad(|u| self.laplacian_log_rho(u, v).abs(), 0.0, l, tol)
                    .map(|x| 2.0 * x)
                    .unwrap_or(f64::NAN)
            };
            let w = self.w;
            let total = quad(inner, 0.0, w, tol)? + quad(inner, w, 2.0 * w, tol)?;
            if total.is_finite() {
                Ok(total)
            } else {
                Err(Error::NoConvergence {
                    a: 0.0,
                    b: 2.0 * w,
                    estimate: f64::NAN,
                })
            }
        };
        TotalCurvature::from_windows(u_window, integral(u_window)?, integral(2.0 * u_window)?)
    }
}

/// A horizontal section of the helicoid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelicoidSection {
    pub c: f64,
    pub v0: f64,
    pub k1: f64,
    pub k2: f64,
}

impl HelicoidSection {
    pub fn point(&self, lambda1: f64, u: f64) -> GroupElement {
        let s = (-lambda1 * u).sinh();
        GroupElement::new(self.k1 * s, self.k2 * s, self.c)
    }
}

/// Largest distance of `points` from the best line through the first and
/// farthest-from-it points, together with the largest height deviation.
pub fn collinearity_residual(points: &[GroupElement]) -> f64 {
    let Some(p0) = points.first() else {
        return 0.0;
    };
    let far = points
        .iter()
        .max_by(|a, b| {
            let da = (a.x - p0.x).hypot(a.y - p0.y);
            let db = (b.x - p0.x).hypot(b.y - p0.y);
            da.total_cmp(&db)
        })
        .unwrap();
    let (dx, dy) = (far.x - p0.x, far.y - p0.y);
    let len = dx.hypot(dy);
    points
        .iter()
        .map(|p| {
            let planar = if len == 0.0 {
                (p.x - p0.x).hypot(p.y - p0.y)
            } else {
                ((p.x - p0.x) * dy - (p.y - p0.y) * dx).abs() / len
            };
            planar.max((p.z - p0.z).abs())
        })
        .fold(0.0, f64::max)
}

/// The parameter `K` whose helicoid has translation period `T`.
///
/// For `T > 0` the period is increasing in `K ∈ (0, 1)` and unbounded, so a
/// root always exists. For `T < 0` the search runs over `K ∈ (−1, 0)`, where
/// the period is bounded below; targets beyond that bound fail with
/// [`Error::NoRoot`]. Their surfaces are the `|T|` helicoids, since
/// invariance under `(0, 0, T)` implies invariance under its inverse.
pub fn solve_k_for_period(m: &MetricParams, t: f64, tol: &Tolerances) -> Result<f64> {
    if !(t.is_finite() && t != 0.0) {
        return Err(Error::NoRoot(format!("period must be finite and non-zero, got {t}")));
    }
    let qtol = tol.quad.min(1e-12);
    let period = |k: f64| -> f64 {
        if k == 0.0 {
            0.0
        } else {
            period_by_quadrature(m, k, qtol).unwrap_or(f64::NAN)
        }
    };
    let edge = if t > 0.0 { K_MAX } else { -K_MAX };
    let reach = period(edge);
    if (t > 0.0 && reach < t) || (t < 0.0 && reach > t) {
        return Err(Error::NoRoot(format!(
            "period {t} is beyond the admissible range (|K| < {K_MAX} reaches {reach})"
        )));
    }
    let r = find_root(|k| period(k) - t, (0.0, edge), tol.root)?;
    check_k(r.root)?;
    Ok(r.root)
}
