use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const LOW: usize = 10;
const HIGH: usize = 20;
const MAX_DEPTH: u32 = 40;
const MAX_PANELS: usize = 50_000;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// from Newton iteration on `P_n`.
pub fn gauss_legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

fn rule(n: usize) -> &'static [(f64, f64)] {
    static LO: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static HI: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    match n {
        LOW => LO.get_or_init(|| gauss_legendre_nodes(LOW)),
        HIGH => HI.get_or_init(|| gauss_legendre_nodes(HIGH)),
        _ => unreachable!(),
    }
}

fn apply(f: &impl Fn(f64) -> f64, a: f64, b: f64, nodes: &[(f64, f64)]) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * nodes.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>()
}

/// Adaptive composite Gauss–Legendre quadrature of `f` over `[a, b]`.
///
/// Each panel is accepted when the 10- and 20-point rules agree within the
/// panel's share of `tol`; otherwise it is bisected.
pub fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return quad(f, b, a, tol).map(|v| -v);
    }
    let total = b - a;
    let mut stack = vec![(a, b, 0u32)];
    let mut sum = 0.0;
    let mut worst = 0.0f64;
    let mut panels = 0usize;
    while let Some((lo, hi, depth)) = stack.pop() {
        panels += 1;
        let fine = apply(&f, lo, hi, rule(HIGH));
        let coarse = apply(&f, lo, hi, rule(LOW));
        if !fine.is_finite() {
            return Err(Error::NonFinite { t: 0.5 * (lo + hi) });
        }
        let err = (fine - coarse).abs();
        let local_tol = (tol * (hi - lo) / total).max(100.0 * f64::EPSILON * fine.abs());
        if panels > MAX_PANELS {
            return Err(Error::NoConvergence { a, b, estimate: err });
        }
        if err <= local_tol || depth >= MAX_DEPTH {
            if err > local_tol {
                worst = worst.max(err);
            }
            sum += fine;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    if worst > tol {
        return Err(Error::NoConvergence { a, b, estimate: worst });
    }
    Ok(sum)
}

/// `∫_{-1}^{1} f(x) / √(1 − x²) dx`, computed as `∫_0^π f(cos s) ds`.
pub fn quad_singular(f: impl Fn(f64) -> f64, tol: f64) -> Result<f64> {
    quad(|s| f(s.cos()), 0.0, PI, tol)
}
