//! Frenet apparatus of non-null curves.
//!
//! Frames are computed pointwise from the curve and its covariant
//! derivatives, never by integrating the Frenet system, so the rows of the
//! system are available as residuals. All formulas are written for an
//! arbitrary regular parameter: `T = γ′/‖γ′‖` and `∇_T = ‖γ′‖⁻¹ D/dt`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use serde::Serialize;

use crate::curve::BaseCurve;
use crate::error::{GeomError, Result};
use crate::lorentz::{minkowski_inner, wedge3, MetricSignature};
use crate::numeric::{diff_vec, scale2, sub2, Vec2};
use crate::surface::{inner_with, orthogonal_of, SurfaceChart};

/// Default parameter step for derivatives along curves (1024 per unit).
pub const H_PARAM: f64 = 1.0 / 1024.0;
/// Curvatures below this are treated as zero.
pub const KAPPA_TOL: f64 = 1e-6;
/// Squared norms below this make a frame vector null.
pub const NULL_TOL: f64 = 1e-9;

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Frenet frame of a curve on a surface chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenetApparatus2 {
    pub t: Vec2,
    pub n: Vec2,
    pub kappa: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub geodesic: bool,
}

fn unit_tangent2(chart: &SurfaceChart, gamma: &dyn BaseCurve, t: f64) -> Result<(Vec2, f64, f64)> {
    let p = gamma.point(t);
    let e = gamma.velocity(t);
    let q = chart.inner(p, e, e)?;
    if q.abs() <= NULL_TOL {
        return Err(GeomError::NullSegment { t });
    }
    let speed = q.abs().sqrt();
    Ok((scale2(1.0 / speed, e), speed, sign(q)))
}

/// `T′ = ε₂κN`, `N′ = −ε₁κT` with `κ ≥ 0`. At geodesic points `N` is the
/// rotated tangent and the result is flagged.
pub fn frenet2_at(chart: &SurfaceChart, gamma: &dyn BaseCurve, t: f64) -> Result<FrenetApparatus2> {
    frenet2_with(chart, gamma, t, H_PARAM)
}

pub fn frenet2_with(chart: &SurfaceChart, gamma: &dyn BaseCurve, t: f64, h: f64) -> Result<FrenetApparatus2> {
    let p = gamma.point(t);
    let (tan, speed, eps1) = unit_tangent2(chart, gamma, t)?;
    let field = |s: f64| unit_tangent2(chart, gamma, s).map(|x| x.0);
    let dt = chart.covariant_derivative(gamma, &field, t, h)?.comps;
    let a = scale2(1.0 / speed, dt);
    let q = chart.inner(p, a, a)?;
    let kappa = q.abs().sqrt();
    let g = chart.metric(p)?;
    if kappa <= KAPPA_TOL {
        let n = orthogonal_of(&g, tan);
        let eps2 = sign(inner_with(&g, n, n));
        return Ok(FrenetApparatus2 { t: tan, n, kappa: 0.0, eps1, eps2, geodesic: true });
    }
    if q.abs() <= NULL_TOL {
        return Err(GeomError::NullNormal { t });
    }
    let eps2 = sign(q);
    let n = scale2(1.0 / (eps2 * kappa), a);
    Ok(FrenetApparatus2 { t: tan, n, kappa, eps1, eps2, geodesic: false })
}

/// Residuals of both rows of the planar system, measured by the largest
/// frame coefficient of `T′ − ε₂κN` and `N′ + ε₁κT`.
pub fn frenet2_residuals(chart: &SurfaceChart, gamma: &dyn BaseCurve, t: f64) -> Result<[f64; 2]> {
    let h = H_PARAM;
    let f = frenet2_with(chart, gamma, t, h)?;
    let p = gamma.point(t);
    let g = chart.metric(p)?;
    let speed = unit_tangent2(chart, gamma, t)?.1;
    let tf = |s: f64| unit_tangent2(chart, gamma, s).map(|x| x.0);
    let nf = |s: f64| frenet2_with(chart, gamma, s, h).map(|x| x.n);
    let dt = scale2(1.0 / speed, chart.covariant_derivative(gamma, &tf, t, h)?.comps);
    let dn = scale2(1.0 / speed, chart.covariant_derivative(gamma, &nf, t, h)?.comps);
    let r1 = sub2(dt, scale2(f.eps2 * f.kappa, f.n));
    let r2 = [dn[0] + f.eps1 * f.kappa * f.t[0], dn[1] + f.eps1 * f.kappa * f.t[1]];
    let coef = |r: Vec2| inner_with(&g, r, f.t).abs().max(inner_with(&g, r, f.n).abs());
    Ok([coef(r1), coef(r2)])
}

/// A curve in a three-dimensional pseudo-Riemannian space together with the
/// Levi-Civita derivative of fields along it.
pub trait FrameCurve: Sync {
    type Vector: Copy + Debug + Add<Output = Self::Vector> + Sub<Output = Self::Vector> + Mul<f64, Output = Self::Vector>;

    fn inner(&self, t: f64, a: &Self::Vector, b: &Self::Vector) -> Result<f64>;
    fn velocity(&self, t: f64) -> Result<Self::Vector>;
    /// Covariant derivative with respect to the curve parameter.
    fn covariant_derivative(&self, t: f64, field: &dyn Fn(f64) -> Result<Self::Vector>) -> Result<Self::Vector>;
    /// A nonzero vector orthogonal to both arguments.
    fn complement(&self, t: f64, a: &Self::Vector, b: &Self::Vector) -> Result<Self::Vector>;
    /// Coordinate size, used only to tell null vectors from zero vectors.
    fn coord_norm(&self, v: &Self::Vector) -> f64;
}

/// Frame without torsion; enough to evaluate `g(Ñ, ·)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Frame3<V> {
    pub tangent: V,
    pub normal: V,
    pub binormal: V,
    pub kappa: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    /// `‖γ′(t)‖` in the given parameter.
    pub speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenetApparatus3<V> {
    pub tangent: V,
    pub normal: V,
    pub binormal: V,
    pub kappa: f64,
    pub tau: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    /// Largest frame coefficient of each row of the Frenet system.
    pub residuals: [f64; 3],
}

fn unit_tangent3<C: FrameCurve + ?Sized>(curve: &C, t: f64) -> Result<(C::Vector, f64, f64)> {
    let v = curve.velocity(t)?;
    let q = curve.inner(t, &v, &v)?;
    if q.abs() <= NULL_TOL {
        return Err(GeomError::NullFrameVector { t });
    }
    let speed = q.abs().sqrt();
    Ok((v * (1.0 / speed), speed, sign(q)))
}

/// `T̃`, `Ñ`, `B̃` and `κ̃` at `t`. `B̃ = ε₁ε₂ · w/‖w‖` for the complement `w`
/// of `(T̃, Ñ)`, which reproduces `T ×₁ N = ε₁ε₂B` in Minkowski space.
pub fn frame3_at<C: FrameCurve + ?Sized>(curve: &C, t: f64) -> Result<Frame3<C::Vector>> {
    let (tangent, speed, eps1) = unit_tangent3(curve, t)?;
    let tf = |s: f64| unit_tangent3(curve, s).map(|x| x.0);
    let a = curve.covariant_derivative(t, &tf)? * (1.0 / speed);
    let q = curve.inner(t, &a, &a)?;
    let kappa = q.abs().sqrt();
    if kappa <= KAPPA_TOL {
        if curve.coord_norm(&a) <= 1e3 * KAPPA_TOL {
            return Err(GeomError::GeodesicLift { t, kappa });
        }
        return Err(GeomError::NullFrameVector { t });
    }
    let eps2 = sign(q);
    let normal = a * (1.0 / kappa);
    let w = curve.complement(t, &tangent, &normal)?;
    let qw = curve.inner(t, &w, &w)?;
    if qw.abs() <= NULL_TOL {
        return Err(GeomError::NullFrameVector { t });
    }
    let eps3 = sign(qw);
    let binormal = w * (eps1 * eps2 / qw.abs().sqrt());
    Ok(Frame3 { tangent, normal, binormal, kappa, eps1, eps2, eps3, speed })
}

/// Full apparatus with torsion `τ̃ = ε₃ g(∇Ñ, B̃)` and the residuals of
/// `T′ = κN`, `N′ = −ε₁ε₂κT + τB`, `B′ = −ε₂ε₃τN`.
pub fn frenet3_at<C: FrameCurve + ?Sized>(curve: &C, t: f64) -> Result<FrenetApparatus3<C::Vector>> {
    let f = frame3_at(curve, t)?;
    let inv = 1.0 / f.speed;
    let tf = |s: f64| unit_tangent3(curve, s).map(|x| x.0);
    let nf = |s: f64| frame3_at(curve, s).map(|x| x.normal);
    let bf = |s: f64| frame3_at(curve, s).map(|x| x.binormal);
    let dt = curve.covariant_derivative(t, &tf)? * inv;
    let dn = curve.covariant_derivative(t, &nf)? * inv;
    let db = curve.covariant_derivative(t, &bf)? * inv;
    let tau = f.eps3 * curve.inner(t, &dn, &f.binormal)?;
    let r1 = dt - f.normal * f.kappa;
    let r2 = dn + f.tangent * (f.eps1 * f.eps2 * f.kappa) - f.binormal * tau;
    let r3 = db + f.normal * (f.eps2 * f.eps3 * tau);
    let coef = |r: &C::Vector| -> Result<f64> {
        let mut m: f64 = 0.0;
        for e in [&f.tangent, &f.normal, &f.binormal] {
            m = m.max(curve.inner(t, r, e)?.abs());
        }
        Ok(m)
    };
    Ok(FrenetApparatus3 {
        tangent: f.tangent,
        normal: f.normal,
        binormal: f.binormal,
        kappa: f.kappa,
        tau,
        eps1: f.eps1,
        eps2: f.eps2,
        eps3: f.eps3,
        residuals: [coef(&r1)?, coef(&r2)?, coef(&r3)?],
    })
}

/// Vector of Minkowski 3-space `(+,+,−)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct V3(pub [f64; 3]);

impl Add for V3 {
    type Output = V3;
    fn add(self, o: V3) -> V3 {
        V3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for V3 {
    type Output = V3;
    fn sub(self, o: V3) -> V3 {
        V3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<f64> for V3 {
    type Output = V3;
    fn mul(self, s: f64) -> V3 {
        V3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

type Path3 = Arc<dyn Fn(f64) -> [f64; 3] + Send + Sync>;

/// Curve in flat Minkowski 3-space; derivatives by central differences.
#[derive(Clone)]
pub struct AmbientCurve {
    point: Path3,
    h: f64,
    sig: MetricSignature,
}

impl AmbientCurve {
    pub fn new(point: impl Fn(f64) -> [f64; 3] + Send + Sync + 'static) -> Self {
        Self { point: Arc::new(point), h: H_PARAM, sig: MetricSignature::minkowski3() }
    }

    pub fn point(&self, t: f64) -> [f64; 3] {
        (self.point)(t)
    }
}

impl FrameCurve for AmbientCurve {
    type Vector = V3;

    fn inner(&self, _t: f64, a: &V3, b: &V3) -> Result<f64> {
        minkowski_inner(&self.sig, &a.0, &b.0)
    }

    fn velocity(&self, t: f64) -> Result<V3> {
        diff_vec(|s| Ok(V3((self.point)(s))), t, self.h)
    }

    fn covariant_derivative(&self, t: f64, field: &dyn Fn(f64) -> Result<V3>) -> Result<V3> {
        diff_vec(field, t, self.h)
    }

    fn complement(&self, _t: f64, a: &V3, b: &V3) -> Result<V3> {
        Ok(V3(wedge3(a.0, b.0)))
    }

    fn coord_norm(&self, v: &V3) -> f64 {
        v.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{ExprCurve, FnCurve};
    use crate::surface::{make_surface, SurfaceKind};

    #[test]
    fn line_is_geodesic() {
        let flat = make_surface(SurfaceKind::FlatLorentz).unwrap();
        let line = ExprCurve::parse("t", "0").unwrap();
        let f = frenet2_at(&flat, &line, 0.3).unwrap();
        assert!(f.geodesic);
        assert_eq!(f.kappa, 0.0);
    }

    #[test]
    fn pseudo_circle() {
        let flat = make_surface(SurfaceKind::FlatLorentz).unwrap();
        let c = ExprCurve::parse("cosh(t)", "sinh(t)").unwrap();
        for s in [-0.7, 0.0, 0.4, 1.1] {
            let f = frenet2_at(&flat, &c, s).unwrap();
            assert!((f.kappa - 1.0).abs() < 1e-9);
            // T = (sinh s, cosh s) is timelike and T′ = γ is spacelike
            assert_eq!((f.eps1, f.eps2), (-1.0, 1.0));
            let r = frenet2_residuals(&flat, &c, s).unwrap();
            assert!(r[0] < 1e-9 && r[1] < 1e-7, "{r:?}");
        }
    }

    #[test]
    fn de_sitter_equator_is_geodesic() {
        let ds = make_surface(SurfaceKind::DeSitter { r: 1.0 }).unwrap();
        let eq = ExprCurve::parse("t", "0").unwrap();
        assert!(frenet2_at(&ds, &eq, 0.5).unwrap().geodesic);
    }

    #[test]
    fn reparametrization_keeps_curvature() {
        let ds = make_surface(SurfaceKind::DeSitter { r: 1.0 }).unwrap();
        let c = ExprCurve::parse("t", "0.4 + 0.1*t^2").unwrap();
        let c2 = FnCurve::with_velocity(|s| [2.0 * s + 1.0, 0.4 + 0.1 * (2.0 * s + 1.0).powi(2)], |s| {
            [2.0, 0.4 * (2.0 * s + 1.0)]
        });
        let k1 = frenet2_at(&ds, &c, 0.6).unwrap().kappa;
        let k2 = frenet2_at(&ds, &c2, -0.2).unwrap().kappa;
        assert!((k1 - k2).abs() < 1e-7);
    }

    #[test]
    fn spacelike_circle_in_minkowski_space() {
        let c = AmbientCurve::new(|s| [s.cos(), s.sin(), 0.0]);
        let f = frenet3_at(&c, 0.3).unwrap();
        assert!((f.kappa - 1.0).abs() < 1e-9);
        assert!(f.tau.abs() < 1e-7);
        assert!(f.residuals.iter().all(|r| *r < 1e-6), "{:?}", f.residuals);
        assert_eq!(f.eps3, -f.eps1 * f.eps2);
    }

    #[test]
    fn helix_frame_identities() {
        let c = AmbientCurve::new(|s| [2.0 * s.cos(), 2.0 * s.sin(), s]);
        let f = frenet3_at(&c, 0.9).unwrap();
        assert!(f.tau.abs() > 0.1);
        assert!(f.residuals.iter().all(|r| *r < 1e-6), "{:?}", f.residuals);
        let w = wedge3(f.tangent.0, f.normal.0);
        for i in 0..3 {
            assert!((w[i] - f.eps1 * f.eps2 * f.binormal.0[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn straight_line_has_no_normal() {
        let c = AmbientCurve::new(|s| [s, 0.5 * s, 0.2 * s]);
        assert!(matches!(frame3_at(&c, 0.0), Err(GeomError::GeodesicLift { .. })));
    }
}
