//! Weierstrass data for minimal surfaces: potential, harmonic-map PDE,
//! Hopf differential, the frame components of `X_z`, and an independent
//! finite-difference mean curvature.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::e2::{connection, to_frame, CoordVector, Frame, FrameVector, GroupElement, MetricParams};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Gauss map value with its Wirtinger derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussMapValue {
    pub g: Complex64,
    pub gz: Complex64,
    pub gzbar: Complex64,
    /// `∂_z ḡ`, the conjugate of `g_z̄`.
    pub gbar_z: Complex64,
}

impl GaussMapValue {
    pub fn new(g: Complex64, gz: Complex64, gzbar: Complex64) -> Self {
        GaussMapValue {
            g,
            gz,
            gzbar,
            gbar_z: gzbar.conj(),
        }
    }

    /// A constant map.
    pub fn constant(g: Complex64) -> Self {
        GaussMapValue::new(g, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }
}

/// Unit normal in the frame `{E1, E2, E3}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereNormal {
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
}

impl SphereNormal {
    pub fn as_frame(&self) -> FrameVector {
        FrameVector::new(self.n1, self.n2, self.n3)
    }

    /// Stereographic projection from the south pole.
    pub fn to_gauss_map(&self) -> Complex64 {
        Complex64::new(self.n1, self.n2) / (1.0 + self.n3)
    }
}

/// Frame components of `X_z` and the factor `η`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImmersionDifferential {
    pub a1: Complex64,
    pub a2: Complex64,
    pub a3: Complex64,
    pub eta: Complex64,
}

impl ImmersionDifferential {
    pub fn components(&self) -> [Complex64; 3] {
        [self.a1, self.a2, self.a3]
    }

    /// `A1² + A2² + A3²`, zero for conformal immersions.
    pub fn isotropy_defect(&self) -> Complex64 {
        self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopfValue {
    pub q: Complex64,
}

/// The `H`-potential.
pub fn h_potential(m: &MetricParams, h: f64, q: Complex64) -> Complex64 {
    let q2 = q * q;
    let one = Complex64::new(1.0, 0.0);
    let n = q.norm_sqr();
    let bracket = m.mu2() * (one + q2).norm_sqr() + m.mu1() * (one - q2).norm_sqr() + 4.0 * m.mu3() * n;
    Complex64::new(h * (1.0 + n) * (1.0 + n), -0.5 * bracket)
}

/// The `0`-potential in closed form.
pub fn zero_potential(m: &MetricParams, q: Complex64) -> Complex64 {
    Complex64::new(0.0, -0.5 * denominator(m, q))
}

/// `λ1²(g + ḡ)² − λ2²(g − ḡ)²`, real and non-negative.
fn denominator(m: &MetricParams, g: Complex64) -> f64 {
    let (l1, l2) = (m.lambda1(), m.lambda2());
    4.0 * (l1 * l1 * g.re * g.re + l2 * l2 * g.im * g.im)
}

fn checked_denominator(m: &MetricParams, g: Complex64) -> Result<f64> {
    let d = denominator(m, g);
    let scale = m.lambda1().powi(2) * (1.0 + g.norm_sqr()).powi(2);
    if !(d.is_finite() && d > 1e-14 * scale) {
        return Err(Error::PotentialVanishes { g });
    }
    Ok(d)
}

/// Residual of the harmonic-map equation satisfied by Gauss maps of minimal
/// surfaces, given the value of `g_zz̄`.
pub fn pde_residual(m: &MetricParams, gv: &GaussMapValue, gzzbar: Complex64) -> Result<Complex64> {
    let d = checked_denominator(m, gv.g)?;
    let (l1sq, l2sq) = (m.lambda1().powi(2), m.lambda2().powi(2));
    let g = gv.g;
    let gb = g.conj();
    let num = (l1sq * (g + gb) - l2sq * (g - gb)) * 2.0;
    Ok(gzzbar - num * gv.gz * gv.gzbar / d)
}

/// Coefficient of the Hopf differential.
pub fn hopf(m: &MetricParams, gv: &GaussMapValue) -> Result<HopfValue> {
    let d = checked_denominator(m, gv.g)?;
    Ok(HopfValue {
        q: gv.gz * gv.gbar_z / d,
    })
}

/// `η` and the frame components `A1, A2, A3` of `X_z`.
pub fn eta_and_a(m: &MetricParams, gv: &GaussMapValue) -> Result<ImmersionDifferential> {
    let g = gv.g;
    if g.norm_sqr() == 0.0 || !(g.re.is_finite() && g.im.is_finite()) {
        return Err(Error::GaussMapAtPole { g });
    }
    checked_denominator(m, g)?;
    let gb = g.conj();
    let eta = 4.0 * gb * gv.gz / zero_potential(m, g);
    Ok(ImmersionDifferential {
        a1: eta / 4.0 * (gb - 1.0 / gb),
        a2: I * eta / 4.0 * (gb + 1.0 / gb),
        a3: eta / 2.0,
        eta,
    })
}

/// Conformal factor `ρ²` of the induced metric `ρ²|dz|²`.
pub fn induced_metric_factor(m: &MetricParams, gv: &GaussMapValue) -> Result<f64> {
    let d = checked_denominator(m, gv.g)?;
    let r = 0.5 * d;
    Ok(4.0 * (1.0 + gv.g.norm_sqr()).powi(2) * gv.gz.norm_sqr() / (r * r))
}

/// Inverse stereographic projection of `g`.
pub fn sphere_normal(g: Complex64) -> SphereNormal {
    let n = g.norm_sqr();
    let s = 1.0 / (1.0 + n);
    SphereNormal {
        n1: 2.0 * g.re * s,
        n2: 2.0 * g.im * s,
        n3: (1.0 - n) * s,
    }
}

/// Gauss map data from finite differences of a sampled `g(u, v)`. Returns
/// the value together with `g_zz̄ = (g_uu + g_vv)/4`.
pub fn wirtinger_fd(g: impl Fn(f64, f64) -> Complex64, u: f64, v: f64, h: f64) -> (GaussMapValue, Complex64) {
    let d1 = |f: &dyn Fn(f64) -> Complex64| (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
    let d2 = |f: &dyn Fn(f64) -> Complex64| {
        (-f(-2.0 * h) + 16.0 * f(-h) - 30.0 * f(0.0) + 16.0 * f(h) - f(2.0 * h)) / (12.0 * h * h)
    };
    let along_u = |s: f64| g(u + s, v);
    let along_v = |s: f64| g(u, v + s);
    let gu = d1(&along_u);
    let gv = d1(&along_v);
    let lap = d2(&along_u) + d2(&along_v);
    let value = GaussMapValue::new(g(u, v), (gu - I * gv) * 0.5, (gu + I * gv) * 0.5);
    (value, lap * 0.25)
}

/// First and second coordinate derivatives of a sampled immersion.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceJet {
    pub base: GroupElement,
    pub xu: CoordVector,
    pub xv: CoordVector,
    pub xuu: CoordVector,
    pub xvv: CoordVector,
}

fn coord(a: [f64; 3]) -> CoordVector {
    CoordVector::new(a[0], a[1], a[2])
}

/// Fourth-order central differences of `sampler` at `(u, v)`.
pub fn surface_jet(sampler: impl Fn(f64, f64) -> GroupElement, u: f64, v: f64, h: f64) -> SurfaceJet {
    let base = sampler(u, v);
    let c = base.to_array();
    let dir = |du: f64, dv: f64| {
        let p = |k: f64| sampler(u + k * du, v + k * dv).to_array();
        let (m2, m1, p1, p2) = (p(-2.0 * h), p(-h), p(h), p(2.0 * h));
        let mut first = [0.0; 3];
        let mut second = [0.0; 3];
        for i in 0..3 {
            first[i] = (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h);
            second[i] = (-m2[i] + 16.0 * m1[i] - 30.0 * c[i] + 16.0 * p1[i] - p2[i]) / (12.0 * h * h);
        }
        (coord(first), coord(second))
    };
    let (xu, xuu) = dir(1.0, 0.0);
    let (xv, xvv) = dir(0.0, 1.0);
    SurfaceJet { base, xu, xv, xuu, xvv }
}

/// Frame components of `X_z = (X_u − i X_v)/2` by finite differences.
pub fn frame_xz_fd(
    m: &MetricParams,
    sampler: impl Fn(f64, f64) -> GroupElement,
    u: f64,
    v: f64,
    h: f64,
) -> [Complex64; 3] {
    let jet = surface_jet(sampler, u, v, h);
    let a = to_frame(m, jet.base, jet.xu);
    let b = to_frame(m, jet.base, jet.xv);
    [
        Complex64::new(a.a1, -b.a1) * 0.5,
        Complex64::new(a.a2, -b.a2) * 0.5,
        Complex64::new(a.a3, -b.a3) * 0.5,
    ]
}

/// `(E, F, G)` coefficients of the first fundamental form by finite differences.
pub fn first_fundamental_form_fd(
    m: &MetricParams,
    sampler: impl Fn(f64, f64) -> GroupElement,
    u: f64,
    v: f64,
    h: f64,
) -> (f64, f64, f64) {
    let jet = surface_jet(sampler, u, v, h);
    let a = to_frame(m, jet.base, jet.xu);
    let b = to_frame(m, jet.base, jet.xv);
    (a.norm2(), a.dot(&b), b.norm2())
}

/// `∇_T T` for the tangent `T = ∂_s X` along a coordinate line, from the
/// coordinate first and second derivatives.
fn covariant_second(m: &MetricParams, p: GroupElement, x1: CoordVector, x2: CoordVector) -> FrameVector {
    let (l1, l2) = (m.lambda1(), m.lambda2());
    let (s, c) = p.z.sin_cos();
    let a = to_frame(m, p, x1);
    // d/ds of the coordinate-to-frame matrix applied to x1, plus the matrix on x2
    let zs = x1.vz;
    let da = FrameVector::new(
        l1 * (-s * x1.vx + c * x1.vy) * zs,
        l2 * (-c * x1.vx - s * x1.vy) * zs,
        0.0,
    ) + to_frame(m, p, x2);
    let mut out = da;
    for i in Frame::ALL {
        for j in Frame::ALL {
            let w = a.component(i) * a.component(j);
            if w != 0.0 {
                out = out + connection(m, j, i).scale(w);
            }
        }
    }
    out
}

/// Mean curvature of a conformally parametrized surface from finite
/// differences of its coordinates and the Levi-Civita connection.
pub fn mean_curvature_fd(
    m: &MetricParams,
    sampler: impl Fn(f64, f64) -> GroupElement,
    at: (f64, f64),
    h: f64,
) -> Result<f64> {
    let jet = surface_jet(sampler, at.0, at.1, h);
    let au = to_frame(m, jet.base, jet.xu);
    let av = to_frame(m, jet.base, jet.xv);
    let e = au.norm2();
    if !(e >= 1e-12) {
        return Err(Error::DegenerateMetric { e });
    }
    let n = au.cross(&av);
    let n = n.scale(1.0 / n.norm());
    let huu = covariant_second(m, jet.base, jet.xu, jet.xuu);
    let hvv = covariant_second(m, jet.base, jet.xv, jet.xvv);
    Ok((huu.dot(&n) + hvv.dot(&n)) / (2.0 * e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::e2::{from_frame, metric_inner};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn flat() -> MetricParams {
        MetricParams::FLAT
    }

    #[test]
    fn potential_examples() {
        let q = c(0.7, 0.0);
        assert!((h_potential(&flat(), 0.0, q) - c(0.0, -2.0 * 0.49)).norm() < 1e-15);
        for m in [flat(), MetricParams::new(3.0, 0.5).unwrap()] {
            let r = h_potential(&m, 0.0, c(0.0, 1.0));
            assert!((r - c(0.0, -2.0 * m.lambda2().powi(2))).norm() < 1e-14);
        }
        assert_eq!(h_potential(&flat(), 0.0, c(0.0, 0.0)), c(0.0, 0.0));
        assert_eq!(zero_potential(&flat(), c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn zero_potential_on_the_unit_circle() {
        let m = MetricParams::new(2.0, 1.0).unwrap();
        for b in [0.0, 0.4, 1.3, 2.9] {
            let q = Complex64::from_polar(1.0, b);
            let expected = c(0.0, -2.0 * m.weighted_angle(b));
            assert!((zero_potential(&m, q) - expected).norm() < 1e-14);
        }
        let r = zero_potential(&MetricParams::new(3.0, 1.0).unwrap(), c(0.0, -1.7));
        assert!((r - c(0.0, -2.0 * 1.7 * 1.7)).norm() < 1e-14);
    }

    #[test]
    fn hopf_and_residual_of_constant_map() {
        let m = MetricParams::new(2.0, 1.0).unwrap();
        let gv = GaussMapValue::constant(c(0.3, 0.4));
        assert_eq!(pde_residual(&m, &gv, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(hopf(&m, &gv).unwrap().q, c(0.0, 0.0));
        assert_eq!(induced_metric_factor(&m, &gv).unwrap(), 0.0);
    }

    #[test]
    fn vanishing_potential_is_rejected() {
        let m = flat();
        let gv = GaussMapValue::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        assert!(matches!(
            pde_residual(&m, &gv, c(0.0, 0.0)),
            Err(Error::PotentialVanishes { .. })
        ));
        assert!(matches!(hopf(&m, &gv), Err(Error::PotentialVanishes { .. })));
        assert!(matches!(eta_and_a(&m, &gv), Err(Error::GaussMapAtPole { .. })));
        let nan = GaussMapValue::constant(c(f64::NAN, 0.0));
        assert!(matches!(eta_and_a(&m, &nan), Err(Error::GaussMapAtPole { .. })));
    }

    #[test]
    fn normal_examples() {
        let n = sphere_normal(c(0.0, 0.0));
        assert_eq!((n.n1, n.n2, n.n3), (0.0, 0.0, 1.0));
        let n = sphere_normal(c(1.0, 0.0));
        assert_eq!((n.n1, n.n2, n.n3), (1.0, 0.0, 0.0));
    }

    #[test]
    fn normal_matches_the_complex_formula() {
        let g = c(0.3, -1.4);
        let n = sphere_normal(g);
        let s = 1.0 + g.norm_sqr();
        assert!(((g + g.conj()).re / s - n.n1).abs() < 1e-15);
        assert!(((I * (g.conj() - g)).re / s - n.n2).abs() < 1e-15);
    }

    #[test]
    fn degenerate_surface_is_rejected() {
        let e = mean_curvature_fd(&flat(), |_, _| GroupElement::IDENTITY, (0.0, 0.0), 1e-3);
        assert!(matches!(e, Err(Error::DegenerateMetric { .. })));
    }

    #[test]
    fn horizontal_plane_is_minimal() {
        for m in [
            flat(),
            MetricParams::new(2.0, 1.0).unwrap(),
            MetricParams::new(5.0, 1.0).unwrap(),
        ] {
            for at in [(0.0, 0.0), (1.3, -0.4), (-2.0, 3.0)] {
                let h = mean_curvature_fd(&m, |u, v| GroupElement::new(u, v, 0.0), at, 1e-3).unwrap();
                assert!(h.abs() < 1e-6, "{h}");
            }
        }
    }

    #[test]
    fn round_sphere_in_flat_space() {
        // radius 2 sphere in conformal (stereographic) coordinates
        let r = 2.0;
        let sphere = |u: f64, v: f64| {
            let w = u * u + v * v;
            GroupElement::new(
                2.0 * r * u / (1.0 + w),
                2.0 * r * v / (1.0 + w),
                r * (1.0 - w) / (1.0 + w),
            )
        };
        let h = mean_curvature_fd(&flat(), sphere, (0.3, 0.2), 1e-3).unwrap();
        assert!((h.abs() - 1.0 / r).abs() < 1e-6, "{h}");
    }

    #[test]
    fn wirtinger_fd_on_holomorphic_map() {
        let g = |u: f64, v: f64| c(u, v).exp();
        let (gv, lap) = wirtinger_fd(g, 0.2, 0.5, 1e-3);
        assert!((gv.gz - c(0.2, 0.5).exp()).norm() < 1e-10);
        assert!(gv.gzbar.norm() < 1e-10);
        assert!(lap.norm() < 1e-8);
    }

    proptest! {
        #[test]
        fn stereographic_round_trip(re in -5.0f64..5.0, im in -5.0f64..5.0) {
            let g = c(re, im);
            let n = sphere_normal(g);
            prop_assert!((n.n1 * n.n1 + n.n2 * n.n2 + n.n3 * n.n3 - 1.0).abs() < 1e-12);
            prop_assert!((n.to_gauss_map() - g).norm() < 1e-12 * (1.0 + g.norm()));
        }

        #[test]
        fn h_potential_reduces_to_zero_potential(
            l in (1.0f64..4.0, 0.2f64..1.0),
            re in -3.0f64..3.0,
            im in -3.0f64..3.0,
        ) {
            let m = MetricParams::new(l.0, l.1).unwrap();
            let q = c(re, im);
            let a = h_potential(&m, 0.0, q);
            let b = zero_potential(&m, q);
            prop_assert!((a - b).norm() < 1e-12 * (1.0 + q.norm_sqr()).powi(2));
            prop_assert!(b.re == 0.0 && b.im <= 0.0);
        }

        #[test]
        fn a_components_are_isotropic(
            l in (1.0f64..4.0, 0.2f64..1.0),
            g in (0.1f64..3.0, -3.0f64..3.0),
            gz in (-2.0f64..2.0, -2.0f64..2.0),
            gzb in (-2.0f64..2.0, -2.0f64..2.0),
        ) {
            let m = MetricParams::new(l.0, l.1).unwrap();
            let gv = GaussMapValue::new(c(g.0, g.1), c(gz.0, gz.1), c(gzb.0, gzb.1));
            let d = eta_and_a(&m, &gv).unwrap();
            prop_assert!(d.isotropy_defect().norm() < 1e-10 * (1.0 + d.eta.norm_sqr()));
            prop_assert!((d.a3 - d.eta / 2.0).norm() == 0.0);
            // normal is orthogonal to Re and Im of X_z
            let n = sphere_normal(gv.g);
            let re = FrameVector::new(d.a1.re, d.a2.re, d.a3.re);
            let im = FrameVector::new(d.a1.im, d.a2.im, d.a3.im);
            let scale = 1.0 + d.eta.norm();
            prop_assert!(re.dot(&n.as_frame()).abs() < 1e-12 * scale);
            prop_assert!(im.dot(&n.as_frame()).abs() < 1e-12 * scale);
            // ρ² = 2|X_z|² in the frame
            let rho2 = induced_metric_factor(&m, &gv).unwrap();
            let xz2 = d.a1.norm_sqr() + d.a2.norm_sqr() + d.a3.norm_sqr();
            prop_assert!((rho2 - 2.0 * xz2).abs() < 1e-10 * (1.0 + rho2));
        }

        #[test]
        fn frame_xz_of_a_plane(u in -2.0f64..2.0, v in -2.0f64..2.0, z in -3.0f64..3.0) {
            let m = MetricParams::new(2.0, 1.0).unwrap();
            let p0 = GroupElement::new(0.0, 0.0, z);
            let e1 = from_frame(&m, p0, FrameVector::new(1.0, 0.0, 0.0));
            let e2 = from_frame(&m, p0, FrameVector::new(0.0, 1.0, 0.0));
            let plane = |s: f64, t: f64| GroupElement::new(s * e1.vx + t * e2.vx, s * e1.vy + t * e2.vy, z);
            let xz = frame_xz_fd(&m, plane, u, v, 1e-3);
            prop_assert!((xz[0] - c(0.5, 0.0)).norm() < 1e-10);
            prop_assert!((xz[1] - c(0.0, -0.5)).norm() < 1e-10);
            prop_assert!(xz[2].norm() < 1e-10);
            let (e, f, g) = first_fundamental_form_fd(&m, plane, u, v, 1e-3);
            prop_assert!((e - 1.0).abs() < 1e-10 && f.abs() < 1e-10 && (g - 1.0).abs() < 1e-10);
            prop_assert!(metric_inner(&m, p0, e1, e2).abs() < 1e-15);
        }
    }
}
