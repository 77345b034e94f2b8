//! The ambient space: the universal cover of the Euclidean motion group,
//! modelled on ℝ³, with its two-parameter family of left-invariant metrics.
//!
//! Points are `(x, y, z)` where `z` is the rotation angle on the universal
//! cover and is never reduced modulo 2π. Tangent vectors come in two flavours:
//! [`CoordVector`] in the coordinate frame `{∂x, ∂y, ∂z}` and [`FrameVector`]
//! in the left-invariant orthonormal frame `{E1, E2, E3}`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        GroupElement { x, y, z }
    }

    pub fn inverse(&self) -> Self {
        inverse(*self)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Largest componentwise distance to `other`.
    pub fn max_abs_diff(&self, other: &GroupElement) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        multiply(self, rhs)
    }
}

/// Group product `p * q`: rotate `q`'s planar part by `p.z`, then translate.
pub fn multiply(p: GroupElement, q: GroupElement) -> GroupElement {
    let (s, c) = p.z.sin_cos();
    GroupElement {
        x: p.x + q.x * c - q.y * s,
        y: p.y + q.x * s + q.y * c,
        z: p.z + q.z,
    }
}

pub fn inverse(p: GroupElement) -> GroupElement {
    let (s, c) = p.z.sin_cos();
    GroupElement {
        x: -p.x * c - p.y * s,
        y: p.x * s - p.y * c,
        z: -p.z,
    }
}

/// Jacobian of `q ↦ p * q`. It does not depend on `q`.
pub fn left_translation_jacobian(p: GroupElement) -> [[f64; 3]; 3] {
    let (s, c) = p.z.sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

/// Pushes a coordinate tangent vector forward by left translation by `p`.
pub fn push_forward(p: GroupElement, v: CoordVector) -> CoordVector {
    let j = left_translation_jacobian(p);
    CoordVector {
        vx: j[0][0] * v.vx + j[0][1] * v.vy,
        vy: j[1][0] * v.vx + j[1][1] * v.vy,
        vz: v.vz,
    }
}

/// The metric `g(λ1, λ2)` with `λ3 = 1/(λ1 λ2)`.
///
/// The canonical form has `λ1 ≥ λ2 > 0`; [`MetricParams::new`] rejects
/// anything else while [`MetricParams::normalized`] swaps the pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMetric", into = "RawMetric")]
pub struct MetricParams {
    lambda1: f64,
    lambda2: f64,
}

#[derive(Serialize, Deserialize)]
struct RawMetric {
    lambda1: f64,
    lambda2: f64,
}

impl TryFrom<RawMetric> for MetricParams {
    type Error = Error;

    fn try_from(raw: RawMetric) -> Result<Self> {
        MetricParams::new(raw.lambda1, raw.lambda2)
    }
}

impl From<MetricParams> for RawMetric {
    fn from(m: MetricParams) -> Self {
        RawMetric {
            lambda1: m.lambda1,
            lambda2: m.lambda2,
        }
    }
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams::FLAT
    }
}

impl MetricParams {
    /// The Euclidean metric `λ1 = λ2 = 1`.
    pub const FLAT: MetricParams = MetricParams {
        lambda1: 1.0,
        lambda2: 1.0,
    };

    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self> {
        let invalid = |reason| Error::InvalidMetric {
            lambda1,
            lambda2,
            reason,
        };
        if !(lambda1.is_finite() && lambda2.is_finite()) {
            return Err(invalid("values must be finite"));
        }
        if lambda1 <= 0.0 || lambda2 <= 0.0 {
            return Err(invalid("values must be positive"));
        }
        if lambda1 < lambda2 {
            return Err(invalid("lambda1 must be >= lambda2"));
        }
        Ok(MetricParams { lambda1, lambda2 })
    }

    /// Like [`MetricParams::new`] but orders the pair instead of rejecting it.
    pub fn normalized(a: f64, b: f64) -> Result<Self> {
        if a >= b {
            MetricParams::new(a, b)
        } else {
            MetricParams::new(b, a)
        }
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn lambda3(&self) -> f64 {
        1.0 / (self.lambda1 * self.lambda2)
    }

    pub fn mu1(&self) -> f64 {
        0.5 * (self.lambda2 * self.lambda2 - self.lambda1 * self.lambda1)
    }

    pub fn mu2(&self) -> f64 {
        0.5 * (self.lambda1 * self.lambda1 - self.lambda2 * self.lambda2)
    }

    pub fn mu3(&self) -> f64 {
        0.5 * (self.lambda1 * self.lambda1 + self.lambda2 * self.lambda2)
    }

    /// `λ1² − λ2²`, which multiplies every non-Euclidean term.
    pub fn anisotropy(&self) -> f64 {
        self.lambda1 * self.lambda1 - self.lambda2 * self.lambda2
    }

    pub fn is_flat(&self) -> bool {
        self.lambda1 == 1.0 && self.lambda2 == 1.0
    }

    /// `λ1² cos² t + λ2² sin² t`, the quantity that both families call `B`.
    pub fn weighted_angle(&self, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        self.lambda1 * self.lambda1 * c * c + self.lambda2 * self.lambda2 * s * s
    }

    /// Diagonal of the self-adjoint map `L` with `L(u × v) = [u, v]`.
    pub fn unimodular_eigenvalues(&self) -> [f64; 3] {
        [self.lambda1 * self.lambda1, self.lambda2 * self.lambda2, 0.0]
    }
}

/// Components in the orthonormal frame `{E1, E2, E3}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FrameVector {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl FrameVector {
    pub const ZERO: FrameVector = FrameVector {
        a1: 0.0,
        a2: 0.0,
        a3: 0.0,
    };

    pub const fn new(a1: f64, a2: f64, a3: f64) -> Self {
        FrameVector { a1, a2, a3 }
    }

    pub fn basis(i: Frame) -> Self {
        match i {
            Frame::E1 => FrameVector::new(1.0, 0.0, 0.0),
            Frame::E2 => FrameVector::new(0.0, 1.0, 0.0),
            Frame::E3 => FrameVector::new(0.0, 0.0, 1.0),
        }
    }

    pub fn component(&self, i: Frame) -> f64 {
        match i {
            Frame::E1 => self.a1,
            Frame::E2 => self.a2,
            Frame::E3 => self.a3,
        }
    }

    /// Metric inner product; the frame is orthonormal.
    pub fn dot(&self, other: &FrameVector) -> f64 {
        self.a1 * other.a1 + self.a2 * other.a2 + self.a3 * other.a3
    }

    /// Metric cross product for the positively oriented frame.
    pub fn cross(&self, other: &FrameVector) -> FrameVector {
        FrameVector {
            a1: self.a2 * other.a3 - self.a3 * other.a2,
            a2: self.a3 * other.a1 - self.a1 * other.a3,
            a3: self.a1 * other.a2 - self.a2 * other.a1,
        }
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn scale(&self, k: f64) -> FrameVector {
        FrameVector::new(k * self.a1, k * self.a2, k * self.a3)
    }

    pub fn max_abs(&self) -> f64 {
        self.a1.abs().max(self.a2.abs()).max(self.a3.abs())
    }
}

impl Add for FrameVector {
    type Output = FrameVector;
    fn add(self, o: FrameVector) -> FrameVector {
        FrameVector::new(self.a1 + o.a1, self.a2 + o.a2, self.a3 + o.a3)
    }
}

impl Sub for FrameVector {
    type Output = FrameVector;
    fn sub(self, o: FrameVector) -> FrameVector {
        FrameVector::new(self.a1 - o.a1, self.a2 - o.a2, self.a3 - o.a3)
    }
}

impl Neg for FrameVector {
    type Output = FrameVector;
    fn neg(self) -> FrameVector {
        self.scale(-1.0)
    }
}

/// Components in the coordinate frame `{∂x, ∂y, ∂z}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CoordVector {
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
}

impl CoordVector {
    pub const fn new(vx: f64, vy: f64, vz: f64) -> Self {
        CoordVector { vx, vy, vz }
    }

    pub fn is_finite(&self) -> bool {
        self.vx.is_finite() && self.vy.is_finite() && self.vz.is_finite()
    }
}

impl Add for CoordVector {
    type Output = CoordVector;
    fn add(self, o: CoordVector) -> CoordVector {
        CoordVector::new(self.vx + o.vx, self.vy + o.vy, self.vz + o.vz)
    }
}

impl Sub for CoordVector {
    type Output = CoordVector;
    fn sub(self, o: CoordVector) -> CoordVector {
        CoordVector::new(self.vx - o.vx, self.vy - o.vy, self.vz - o.vz)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Frame {
    E1,
    E2,
    E3,
}

impl Frame {
    pub const ALL: [Frame; 3] = [Frame::E1, Frame::E2, Frame::E3];

    /// 1-based index.
    pub fn from_index(i: usize) -> Option<Frame> {
        match i {
            1 => Some(Frame::E1),
            2 => Some(Frame::E2),
            3 => Some(Frame::E3),
            _ => None,
        }
    }
}

/// Coordinate components of `E1, E2, E3` at `p`.
pub fn frame_at(m: &MetricParams, p: GroupElement) -> [CoordVector; 3] {
    let (s, c) = p.z.sin_cos();
    let (l1, l2) = (m.lambda1(), m.lambda2());
    [
        CoordVector::new(c / l1, s / l1, 0.0),
        CoordVector::new(-s / l2, c / l2, 0.0),
        CoordVector::new(0.0, 0.0, l1 * l2),
    ]
}

/// Coordinate → frame components at `p`.
pub fn to_frame(m: &MetricParams, p: GroupElement, v: CoordVector) -> FrameVector {
    let (s, c) = p.z.sin_cos();
    let (l1, l2) = (m.lambda1(), m.lambda2());
    FrameVector {
        a1: l1 * (c * v.vx + s * v.vy),
        a2: l2 * (-s * v.vx + c * v.vy),
        a3: v.vz / (l1 * l2),
    }
}

/// Frame → coordinate components at `p`.
pub fn from_frame(m: &MetricParams, p: GroupElement, a: FrameVector) -> CoordVector {
    let [e1, e2, e3] = frame_at(m, p);
    CoordVector {
        vx: a.a1 * e1.vx + a.a2 * e2.vx + a.a3 * e3.vx,
        vy: a.a1 * e1.vy + a.a2 * e2.vy + a.a3 * e3.vy,
        vz: a.a1 * e1.vz + a.a2 * e2.vz + a.a3 * e3.vz,
    }
}

/// The metric evaluated on two coordinate vectors at `p`.
pub fn metric_inner(m: &MetricParams, p: GroupElement, u: CoordVector, v: CoordVector) -> f64 {
    let (s, c) = p.z.sin_cos();
    let (l1, l2) = (m.lambda1(), m.lambda2());
    let w1 = |w: &CoordVector| c * w.vx + s * w.vy;
    let w2 = |w: &CoordVector| -s * w.vx + c * w.vy;
    l1 * l1 * w1(&u) * w1(&v) + l2 * l2 * w2(&u) * w2(&v) + u.vz * v.vz / (l1 * l1 * l2 * l2)
}

/// `∇_{Ei} Ej` in frame components.
pub fn connection(m: &MetricParams, i: Frame, j: Frame) -> FrameVector {
    use Frame::*;
    let (mu1, mu2, mu3) = (m.mu1(), m.mu2(), m.mu3());
    match (i, j) {
        (E1, E1) | (E2, E2) | (E3, E3) => FrameVector::ZERO,
        (E1, E2) => FrameVector::new(0.0, 0.0, mu1),
        (E1, E3) => FrameVector::new(0.0, mu2, 0.0),
        (E2, E1) => FrameVector::new(0.0, 0.0, mu1),
        (E2, E3) => FrameVector::new(mu2, 0.0, 0.0),
        (E3, E1) => FrameVector::new(0.0, mu3, 0.0),
        (E3, E2) => FrameVector::new(-mu3, 0.0, 0.0),
    }
}

/// `∇_X Y` for left-invariant fields with constant frame coefficients.
pub fn covariant_derivative(m: &MetricParams, x: FrameVector, y: FrameVector) -> FrameVector {
    let mut out = FrameVector::ZERO;
    for i in Frame::ALL {
        let xi = x.component(i);
        if xi == 0.0 {
            continue;
        }
        for j in Frame::ALL {
            let yj = y.component(j);
            if yj != 0.0 {
                out = out + connection(m, i, j).scale(xi * yj);
            }
        }
    }
    out
}

/// Lie bracket `[Ei, Ej]` of the frame fields.
pub fn bracket(m: &MetricParams, i: Frame, j: Frame) -> FrameVector {
    use Frame::*;
    let (l1sq, l2sq) = (m.lambda1().powi(2), m.lambda2().powi(2));
    match (i, j) {
        (E1, E1) | (E2, E2) | (E3, E3) | (E1, E2) | (E2, E1) => FrameVector::ZERO,
        (E2, E3) => FrameVector::new(l1sq, 0.0, 0.0),
        (E3, E2) => FrameVector::new(-l1sq, 0.0, 0.0),
        (E3, E1) => FrameVector::new(0.0, l2sq, 0.0),
        (E1, E3) => FrameVector::new(0.0, -l2sq, 0.0),
    }
}

/// Principal Ricci curvatures in the frame and the scalar curvature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RicciCurvatures {
    pub ric1: f64,
    pub ric2: f64,
    pub ric3: f64,
    pub scalar: f64,
}

/// The frame diagonalizes Ricci with `Ric(Ei) = 2 μj μk` for `{i, j, k} = {1, 2, 3}`.
/// Since `μ1 = −μ2`, the scalar curvature reduces to `2 μ1 μ2 ≤ 0`, with
/// equality only for the flat metric.
pub fn curvature_invariants(m: &MetricParams) -> RicciCurvatures {
    let (mu1, mu2, mu3) = (m.mu1(), m.mu2(), m.mu3());
    let ric1 = 2.0 * mu2 * mu3;
    let ric2 = 2.0 * mu1 * mu3;
    let ric3 = 2.0 * mu1 * mu2;
    RicciCurvatures {
        ric1,
        ric2,
        ric3,
        scalar: ric1 + ric2 + ric3,
    }
}
