//! Classical RK4 with step-doubling error control and piecewise quintic
//! Hermite dense output.
//!
//! Each accepted step `[t, t + h]` stores three knots: start, midpoint (from
//! the two half steps) and end, each with its derivative. The dense output
//! over a step is the quintic Hermite interpolant through those six data.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct OdeSolution<const N: usize> {
    knots: Vec<f64>,
    values: Vec<[f64; N]>,
    derivs: Vec<[f64; N]>,
}

fn axpy<const N: usize>(y: &[f64; N], a: f64, k: &[f64; N]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += a * k[i];
    }
    out
}

fn all_finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

struct Stepper<'a, F, const N: usize> {
    rhs: &'a mut F,
}

impl<F, const N: usize> Stepper<'_, F, N>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    fn eval(&mut self, t: f64, y: &[f64; N]) -> Result<[f64; N]> {
        let d = (self.rhs)(t, y);
        if all_finite(&d) {
            Ok(d)
        } else {
            Err(Error::NonFinite { t })
        }
    }

    /// One RK4 step given the derivative `k1` at the start.
    fn rk4(&mut self, t: f64, y: &[f64; N], k1: &[f64; N], h: f64) -> Result<[f64; N]> {
        let k2 = self.eval(t + 0.5 * h, &axpy(y, 0.5 * h, k1))?;
        let k3 = self.eval(t + 0.5 * h, &axpy(y, 0.5 * h, &k2))?;
        let k4 = self.eval(t + h, &axpy(y, h, &k3))?;
        let mut out = *y;
        for i in 0..N {
            out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        Ok(out)
    }
}

/// Integrates `y' = rhs(t, y)` from `(t0, y0)` toward `t_end` (either
/// direction), stopping early after the first step for which `stop` returns
/// true. The returned solution always has increasing knots.
pub fn integrate_until<const N: usize>(
    mut rhs: impl FnMut(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    t0: f64,
    t_end: f64,
    tol: f64,
    mut stop: impl FnMut(f64, &[f64; N]) -> bool,
) -> Result<OdeSolution<N>> {
    assert!(tol > 0.0, "tolerance must be positive");
    if !all_finite(&y0) {
        return Err(Error::NonFinite { t: t0 });
    }
    let mut st = Stepper { rhs: &mut rhs };
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let span = (t_end - t0).abs();

    let mut t = t0;
    let mut y = y0;
    let mut k1 = st.eval(t, &y)?;
    let mut knots = vec![t];
    let mut values = vec![y];
    let mut derivs = vec![k1];
    let mut h = span.min(1e-2);

    while span > 0.0 && (t - t_end) * dir < 0.0 {
        let remaining = (t_end - t).abs();
        let last = h >= remaining;
        let hs = if last { remaining } else { h };
        let hd = dir * hs;

        let full = st.rk4(t, &y, &k1, hd)?;
        let half1 = st.rk4(t, &y, &k1, 0.5 * hd)?;
        let km = st.eval(t + 0.5 * hd, &half1)?;
        let half2 = st.rk4(t + 0.5 * hd, &half1, &km, 0.5 * hd)?;

        let mut err = 0.0f64;
        for i in 0..N {
            err = err.max((half2[i] - full[i]).abs() / 15.0);
        }
        if !err.is_finite() {
            return Err(Error::NonFinite { t });
        }

        if err <= tol {
            let mut y_new = half2;
            for i in 0..N {
                y_new[i] += (half2[i] - full[i]) / 15.0;
            }
            let t_new = if last { t_end } else { t + hd };
            let k_new = st.eval(t_new, &y_new)?;
            knots.push(t + 0.5 * hd);
            values.push(half1);
            derivs.push(km);
            knots.push(t_new);
            values.push(y_new);
            derivs.push(k_new);
            t = t_new;
            y = y_new;
            k1 = k_new;
            if stop(t, &y) {
                break;
            }
        }

        let factor = if err == 0.0 {
            4.0
        } else {
            (0.9 * (tol / err).powf(0.2)).clamp(0.2, 4.0)
        };
        h = hs * factor;
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t, h });
        }
    }

    if dir < 0.0 {
        knots.reverse();
        values.reverse();
        derivs.reverse();
    }
    Ok(OdeSolution { knots, values, derivs })
}

/// Integrates over `t_span = (t0, t1)` starting from `y(t0) = y0`.
pub fn integrate_ode<const N: usize>(
    rhs: impl FnMut(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    t_span: (f64, f64),
    tol: f64,
) -> Result<OdeSolution<N>> {
    integrate_until(rhs, y0, t_span.0, t_span.1, tol, |_, _| false)
}

impl<const N: usize> OdeSolution<N> {
    /// Glues a backward solution ending at `t0` to a forward one starting at `t0`.
    ///
    /// # Panics
    /// If the two halves do not share their junction knot.
    pub fn join(backward: OdeSolution<N>, forward: OdeSolution<N>) -> OdeSolution<N> {
        assert_eq!(backward.t_max(), forward.t_min(), "solutions must meet");
        let mut out = backward;
        out.knots.extend_from_slice(&forward.knots[1..]);
        out.values.extend_from_slice(&forward.values[1..]);
        out.derivs.extend_from_slice(&forward.derivs[1..]);
        out
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[[f64; N]] {
        &self.values
    }

    pub fn derivatives(&self) -> &[[f64; N]] {
        &self.derivs
    }

    pub fn t_min(&self) -> f64 {
        self.knots[0]
    }

    pub fn t_max(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    pub fn final_value(&self) -> [f64; N] {
        *self.values.last().unwrap()
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_min() && t <= self.t_max()
    }

    /// Index of the step (first knot index, always even) containing `t`.
    fn step_index(&self, t: f64) -> usize {
        let n_steps = (self.knots.len() - 1) / 2;
        if n_steps == 0 {
            return 0;
        }
        // partition_point over step end points
        let mut lo = 0;
        let mut hi = n_steps;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.knots[2 * mid + 2] < t {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        2 * lo.min(n_steps - 1)
    }

    fn hermite(&self, t: f64) -> ([f64; N], [f64; N]) {
        if self.knots.len() == 1 {
            return (self.values[0], self.derivs[0]);
        }
        let s = self.step_index(t);
        let z = [
            self.knots[s],
            self.knots[s],
            self.knots[s + 1],
            self.knots[s + 1],
            self.knots[s + 2],
            self.knots[s + 2],
        ];
        let mut val = [0.0; N];
        let mut der = [0.0; N];
        for c in 0..N {
            // divided differences with doubled nodes
            let mut q = [
                self.values[s][c],
                self.values[s][c],
                self.values[s + 1][c],
                self.values[s + 1][c],
                self.values[s + 2][c],
                self.values[s + 2][c],
            ];
            let d = [self.derivs[s][c], self.derivs[s + 1][c], self.derivs[s + 2][c]];
            let mut coef = [0.0; 6];
            coef[0] = q[0];
            for level in 1..6 {
                for i in (level..6).rev() {
                    let dz = z[i] - z[i - level];
                    q[i] = if level == 1 && dz == 0.0 {
                        d[i / 2]
                    } else {
                        (q[i] - q[i - 1]) / dz
                    };
                }
                coef[level] = q[level];
            }
            // Horner for the Newton form and its derivative
            let mut p = coef[5];
            let mut dp = 0.0;
            for k in (0..5).rev() {
                dp = dp * (t - z[k]) + p;
                p = p * (t - z[k]) + coef[k];
            }
            val[c] = p;
            der[c] = dp;
        }
        (val, der)
    }

    /// Dense-output value. Exact at knots; extrapolates polynomially outside
    /// `[t_min, t_max]`, which callers are expected to avoid.
    pub fn eval(&self, t: f64) -> [f64; N] {
        if let Ok(i) = self.knots.binary_search_by(|k| k.total_cmp(&t)) {
            return self.values[i];
        }
        self.hermite(t).0
    }

    /// Derivative of the dense output.
    pub fn eval_derivative(&self, t: f64) -> [f64; N] {
        if let Ok(i) = self.knots.binary_search_by(|k| k.total_cmp(&t)) {
            return self.derivs[i];
        }
        self.hermite(t).1
    }

    /// Locates `t` in `[a, b]` where component `comp` equals `target`, using
    /// the dense output.
    pub fn locate(&self, comp: usize, target: f64, a: f64, b: f64, tol: f64) -> Result<f64> {
        let r = super::find_root(|t| self.eval(t)[comp] - target, (a, b), tol)?;
        Ok(r.root)
    }

    /// The step `[t_i, t_{i+2}]` in which component `comp` first reaches
    /// `target`, scanning knots in increasing order.
    pub fn crossing_step(&self, comp: usize, target: f64) -> Option<(f64, f64)> {
        let n = self.knots.len();
        for i in (0..n.saturating_sub(2)).step_by(2) {
            let a = self.values[i][comp] - target;
            let b = self.values[i + 2][comp] - target;
            if a == 0.0 {
                return Some((self.knots[i], self.knots[i]));
            }
            if a.signum() != b.signum() || b == 0.0 {
                return Some((self.knots[i], self.knots[i + 2]));
            }
        }
        None
    }
}
