//! Horizontal sections `{x3 = λ1 λ2 μ}` of a closed catenoid.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::CatenoidProfile;
use crate::e2::GroupElement;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionSample {
    pub u: f64,
    pub phi: f64,
    /// `γ(u) = X(u + i (G(u) − μ)/D)`.
    pub gamma: GroupElement,
    /// `γ̃ = (0, 0, −x3) · γ`, a planar curve.
    pub tilde: [f64; 2],
    /// `d γ̃ / du`.
    pub tilde_deriv: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    pub mu: f64,
    /// `2U`, the closing parameter length.
    pub period: f64,
    pub samples: Vec<SectionSample>,
}

/// Outcome of [`CrossSection::convexity_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub pass: bool,
    /// Smallest of the slope decrements and of `−x̃2'`; positive on success.
    pub worst_margin: f64,
    pub checked: usize,
}

impl CatenoidProfile {
    /// `n` samples of the section at level `x3 = λ1 λ2 μ`, `u ∈ [0, 2U]`.
    pub fn cross_section(&self, mu: f64, n: usize) -> Result<CrossSection> {
        if n < 2 {
            return Err(Error::InsufficientSamples { min: 2, got: n });
        }
        if self.omega.d == 0.0 {
            return Err(Error::NoRoot("θ = 0: the u-curves never meet the level".into()));
        }
        let period = 2.0 * self.u_half;
        let samples = (0..n)
            .map(|i| {
                let u = if i + 1 == n {
                    period
                } else {
                    period * i as f64 / (n - 1) as f64
                };
                self.section_point(mu, u)
            })
            .collect();
        Ok(CrossSection { mu, period, samples })
    }

    /// The section point at parameter `u`, from the closed forms for the
    /// rotated curve and its tangent. Requires `θ ≠ 0`.
    pub fn section_point(&self, mu: f64, u: f64) -> SectionSample {
        let (l1, l2) = (self.m.lambda1(), self.m.lambda2());
        let (c, d) = (self.omega.c, self.omega.d);
        let ld = l1 * l2 * d;
        let [phi, f, g] = self.state(u);
        let b = self.k.b(phi);
        let [dphi, df, _] = self.k.rhs(phi);
        let cm = c - dphi;
        let a = f + c * (g - mu) / d;
        let (ch, sh) = (a.cosh(), a.sinh());
        let (sp, cp) = phi.sin_cos();
        let j1 = df * cp * ch - cm * sp * sh;
        let j2 = df * cp * sh - cm * sp * ch;
        let j3 = df * sp * ch + cm * cp * sh;
        let j4 = df * sp * sh + cm * cp * ch;
        let pre = -1.0 / ((c * c + ld * ld) * b);
        let speed = (df * df + cm * cm) * ch / (d * b * b);
        SectionSample {
            u,
            phi,
            gamma: self.immerse(u, (g - mu) / d),
            tilde: [pre * (c / l1 * j1 - l1 * d * j4), pre * (c / l2 * j3 + l2 * d * j2)],
            tilde_deriv: [speed * sp / l1, -speed * cp / l2],
        }
    }
}

impl CrossSection {
    /// `|γ(2U) − γ(0)|`, or 0 for sections not sampled up to `2U`.
    pub fn closure_gap(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) if b.u == self.period => a.gamma.max_abs_diff(&b.gamma),
            _ => 0.0,
        }
    }

    /// Samples with the closing duplicate at `u = 2U` removed.
    fn distinct(&self) -> &[SectionSample] {
        let s = &self.samples;
        match s.last() {
            Some(last) if s.len() > 1 && last.u == self.period => &s[..s.len() - 1],
            _ => s,
        }
    }

    /// Checks that `dx̃1/dx̃2` strictly decreases in `u` and `x̃2' < 0` on
    /// `(−U/2, U/2)`, using the samples that fall there modulo `2U`.
    pub fn convexity_check(&self) -> Result<ConvexityReport> {
        // the endpoints ±U/2 are excluded with a little room: the slope blows up there
        let quarter = 0.25 * self.period * (1.0 - 1e-9);
        let mut pts: Vec<(f64, f64, f64)> = self
            .distinct()
            .iter()
            .filter_map(|s| {
                let w = s.u - self.period * (s.u / self.period).round();
                (w.abs() < quarter).then(|| (w, s.tilde_deriv[0] / s.tilde_deriv[1], s.tilde_deriv[1]))
            })
            .collect();
        if pts.len() < 3 {
            return Err(Error::InsufficientSamples { min: 3, got: pts.len() });
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut worst = f64::INFINITY;
        for p in &pts {
            worst = worst.min(-p.2);
        }
        for w in pts.windows(2) {
            worst = worst.min(w[0].1 - w[1].1);
        }
        Ok(ConvexityReport {
            pass: worst > 0.0,
            worst_margin: worst,
            checked: pts.len(),
        })
    }

    /// Winding number of the closed polygon `γ̃` about the origin.
    pub fn winding_number(&self) -> i64 {
        let pts = self.distinct();
        if pts.is_empty() {
            return 0;
        }
        let mut total = 0.0;
        for i in 0..pts.len() {
            let a = pts[i].tilde;
            let b = pts[(i + 1) % pts.len()].tilde;
            let mut d = b[1].atan2(b[0]) - a[1].atan2(a[0]);
            if d > PI {
                d -= 2.0 * PI;
            } else if d < -PI {
                d += 2.0 * PI;
            }
            total += d;
        }
        (total / (2.0 * PI)).round() as i64
    }

    /// Largest distance of `γ` from the `x3`-axis.
    pub fn max_radius(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.gamma.x.hypot(s.gamma.y))
            .fold(0.0, f64::max)
    }
}
