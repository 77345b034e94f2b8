//! Behaviour of the closed catenoids as `c → ∞`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CatenoidProfile;
use crate::e2::MetricParams;
use crate::error::Result;
use crate::surface::with_thread_cap;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub c: f64,
    pub theta_tilde: f64,
    /// Sup-norm distance to the limit plane map over the sample grid.
    pub deviation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShrinkRow {
    pub c: f64,
    pub theta_tilde: f64,
    /// `max √(x1² + x2²)` over the section `x3 = 0`.
    pub radius: f64,
    /// Pointwise a priori bound on the same radius.
    pub bound: f64,
}

fn per_c<T: Send>(c_list: &[f64], job: impl Fn(f64) -> Result<T> + Sync) -> Result<Vec<T>> {
    with_thread_cap(|| c_list.par_iter().map(|&c| job(c)).collect())
}

/// For each `c`, the sup over `(ũ, ṽ) ∈ grid` of the distance between
/// `X_c(ũ/c + i(2 ln c + ṽ)/c)` and `(−cos ũ e^ṽ/(2λ1), −sin ũ e^ṽ/(2λ2), 0)`.
pub fn limit_study(m: &MetricParams, c_list: &[f64], grid: &[(f64, f64)]) -> Result<Vec<LimitRow>> {
    let (l1, l2) = (m.lambda1(), m.lambda2());
    per_c(c_list, |c| {
        let p = CatenoidProfile::closed(*m, c)?;
        let deviation = grid
            .iter()
            .map(|&(ut, vt)| {
                let x = p.immerse(ut / c, (2.0 * c.ln() + vt) / c);
                let e = vt.exp();
                let lim = [-ut.cos() * e / (2.0 * l1), -ut.sin() * e / (2.0 * l2), 0.0];
                (x.x - lim[0]).abs().max((x.y - lim[1]).abs()).max((x.z - lim[2]).abs())
            })
            .fold(0.0, f64::max);
        Ok(LimitRow {
            c,
            theta_tilde: p.theta(),
            deviation,
        })
    })
}

/// For each `c`, the largest radius of the section `x3 = 0` sampled at `n` points.
pub fn intersection_shrink_study(m: &MetricParams, c_list: &[f64], n: usize) -> Result<Vec<ShrinkRow>> {
    let (l1, l2) = (m.lambda1(), m.lambda2());
    per_c(c_list, |c| {
        let p = CatenoidProfile::closed(*m, c)?;
        let s = p.cross_section(0.0, n)?;
        let d = p.omega().d;
        let scale = 1.0 / (c * c + (l1 * l2 * d).powi(2));
        let bound = s
            .samples
            .iter()
            .map(|q| {
                let [dphi, df, _] = p.derivatives(q.u);
                let b = p.weight(q.u);
                let (fp, cm) = (df.abs(), (c - dphi).abs());
                let a = p.f(q.u) + c * p.g(q.u) / d;
                let (ch, sh) = (a.cosh(), a.sinh().abs());
                let b1 = ((c / l1 * fp + l1 * d * cm) * ch + (c / l1 * cm + l1 * d * fp) * sh) * scale / b;
                let b2 = ((c / l2 * fp + l2 * d * cm) * ch + (c / l2 * cm + l2 * d * fp) * sh) * scale / b;
                b1.hypot(b2)
            })
            .fold(0.0, f64::max);
        Ok(ShrinkRow {
            c,
            theta_tilde: p.theta(),
            radius: s.max_radius(),
            bound,
        })
    })
}
