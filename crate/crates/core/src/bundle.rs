//! The unit tangent bundle `T₁M` of a surface chart with its Sasaki metric,
//! Levi-Civita connection and contact metric structure, and lifts of curves.
//!
//! A tangent vector of `T₁M` at `(x, u)` is stored as a horizontal part `h`
//! and a tangential part `t ⟂ u`, both in chart components at `x`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curve::BaseCurve;
use crate::error::{GeomError, Result};
use crate::expr::Expression;
use crate::frenet::{FrameCurve, H_PARAM};
use crate::lorentz::{angle_law_value, AngleLaw};
use crate::numeric::{cross3, inverse3, mat3_vec, rk4, scale2, sub2, Chebyshev, CumulativeIntegral, Vec2};
use crate::surface::{inner_with, orthogonal_of, SurfaceChart, SurfacePoint, SurfaceSignature};

/// Tolerance on `|g(u,u) − ε_u|` for bundle points.
pub const UNIT_TOL: f64 = 1e-8;

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BundlePoint {
    pub x: SurfacePoint,
    pub u: Vec2,
    pub eps_u: f64,
}

impl BundlePoint {
    pub fn new(chart: &SurfaceChart, x: Vec2, u: Vec2) -> Result<Self> {
        let q = chart.inner(x, u, u)?;
        if (q.abs() - 1.0).abs() > UNIT_TOL {
            return Err(GeomError::FiberNotUnit { t: f64::NAN, norm_sq: q });
        }
        Ok(Self { x: SurfacePoint { coords: x }, u, eps_u: sign(q) })
    }

    /// Normalizes `u` first; fails only for null `u`.
    pub fn normalized(chart: &SurfaceChart, x: Vec2, u: Vec2) -> Result<Self> {
        let q = chart.inner(x, u, u)?;
        if q.abs() <= crate::lorentz::NULL_TOL {
            return Err(GeomError::NullVector { norm_sq: q });
        }
        Self::new(chart, x, scale2(1.0 / q.abs().sqrt(), u))
    }

    pub fn coords(&self) -> Vec2 {
        self.x.coords
    }

    /// `V − ε_u g(V,u) u`
    pub fn project(&self, chart: &SurfaceChart, v: Vec2) -> Result<Vec2> {
        let c = self.eps_u * chart.inner(self.coords(), v, self.u)?;
        Ok(sub2(v, scale2(c, self.u)))
    }

    pub fn horizontal(&self, v: Vec2) -> BundleTangent {
        BundleTangent { h: v, t: [0.0; 2] }
    }

    pub fn tangential(&self, chart: &SurfaceChart, v: Vec2) -> Result<BundleTangent> {
        Ok(BundleTangent { h: [0.0; 2], t: self.project(chart, v)? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct BundleTangent {
    pub h: Vec2,
    pub t: Vec2,
}

impl Add for BundleTangent {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { h: [self.h[0] + o.h[0], self.h[1] + o.h[1]], t: [self.t[0] + o.t[0], self.t[1] + o.t[1]] }
    }
}

impl Sub for BundleTangent {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { h: sub2(self.h, o.h), t: sub2(self.t, o.t) }
    }
}

impl Mul<f64> for BundleTangent {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self { h: scale2(s, self.h), t: scale2(s, self.t) }
    }
}

impl Neg for BundleTangent {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl BundleTangent {
    pub fn max_abs(&self) -> f64 {
        self.h.iter().chain(self.t.iter()).fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

/// `g₁ˢ(A,B) = g(A_h,B_h) + g(A_t,B_t) − g(A_t,u) g(B_t,u)`, or `g₁ = ¼g₁ˢ`
/// when `scaled`.
pub fn sasaki_metric(chart: &SurfaceChart, p: &BundlePoint, a: &BundleTangent, b: &BundleTangent, scaled: bool) -> Result<f64> {
    let g = chart.metric(p.coords())?;
    let v = inner_with(&g, a.h, b.h) + inner_with(&g, a.t, b.t)
        - inner_with(&g, a.t, p.u) * inner_with(&g, b.t, p.u);
    Ok(if scaled { 0.25 * v } else { v })
}

/// Scaling of the Reeb field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum XiConvention {
    /// `ξ = 2uʰ`, the normalization with `η(ξ) = 1` under `g₁ = ¼g₁ˢ`.
    #[default]
    #[serde(rename = "paper-2xh")]
    TwoXh,
    /// `ξ = ½uʰ`; the contact identities do not hold with this scaling.
    #[serde(rename = "paper-half")]
    Half,
}

impl XiConvention {
    pub fn name(self) -> &'static str {
        match self {
            XiConvention::TwoXh => "paper-2xh",
            XiConvention::Half => "paper-half",
        }
    }

    pub fn factor(self) -> f64 {
        match self {
            XiConvention::TwoXh => 2.0,
            XiConvention::Half => 0.5,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper-2xh" => Some(XiConvention::TwoXh),
            "paper-half" => Some(XiConvention::Half),
            _ => None,
        }
    }
}

/// `(ξ, η, φ)` at a bundle point, either for `g₁` (unprimed) or `g₁ˢ`
/// (primed, `ξ′ = uʰ`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContactData {
    pub point: BundlePoint,
    pub xi: BundleTangent,
    pub primed: bool,
    pub convention: XiConvention,
}

impl ContactData {
    /// `η(A) = ε_u g(A_h, u)` primed, half of that unprimed.
    pub fn eta(&self, chart: &SurfaceChart, a: &BundleTangent) -> Result<f64> {
        let v = self.point.eps_u * chart.inner(self.point.coords(), a.h, self.point.u)?;
        Ok(if self.primed { v } else { 0.5 * v })
    }

    /// `φ(Xʰ) = Xᵗ`, `φ(Xᵗ) = −Xʰ`
    pub fn phi(&self, chart: &SurfaceChart, a: &BundleTangent) -> Result<BundleTangent> {
        Ok(BundleTangent { h: scale2(-1.0, a.t), t: self.point.project(chart, a.h)? })
    }
}

pub fn contact_at(p: &BundlePoint, convention: XiConvention) -> ContactData {
    ContactData { point: *p, xi: p.horizontal(scale2(convention.factor(), p.u)), primed: false, convention }
}

pub fn contact_primed_at(p: &BundlePoint) -> ContactData {
    ContactData { point: *p, xi: p.horizontal(p.u), primed: true, convention: XiConvention::TwoXh }
}

/// How the fiber relates to the causal type of the base tangent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiberCharacter {
    /// `ε_X = ε_T`: `X = cosh φ T + sinh φ N`.
    Tangent,
    /// `ε_X = ε_N`: `X = sinh φ T + cosh φ N`.
    Normal,
}

/// Rotation angle of the fiber relative to the frame `(T, JT)` of the base.
#[derive(Debug, Clone)]
pub enum AngleProfile {
    Constant(f64),
    Linear { a: f64, b: f64 },
    /// Angle making `X` parallel along the base, starting from the given value.
    Parallel(f64),
    Expr(Expression),
}

type FieldFn = Arc<dyn Fn(f64) -> Result<Vec2> + Send + Sync>;

/// A unit vector field `X` along a base curve.
#[derive(Clone)]
pub struct FiberField {
    f: FieldFn,
    eps: f64,
    label: String,
}

impl fmt::Debug for FiberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiberField({}, eps = {})", self.label, self.eps)
    }
}

/// Unit tangent and rotated normal of the base at `t`, with their signs.
pub fn base_frame(chart: &SurfaceChart, gamma: &dyn BaseCurve, t: f64) -> Result<(Vec2, Vec2, f64, f64)> {
    let p = gamma.point(t);
    let e = gamma.velocity(t);
    let g = chart.metric(p)?;
    let q = inner_with(&g, e, e);
    if q.abs() <= crate::lorentz::NULL_TOL {
        return Err(GeomError::NullSegment { t });
    }
    let tan = scale2(1.0 / q.abs().sqrt(), e);
    let n = orthogonal_of(&g, tan);
    Ok((tan, n, sign(q), sign(inner_with(&g, n, n))))
}

/// `ω = ε_N g(∇_E T, N)`, the rotation rate of the base frame in the curve
/// parameter.
pub fn frame_rotation_rate(chart: &SurfaceChart, gamma: &dyn BaseCurve, t: f64, h: f64) -> Result<f64> {
    let tf = |s: f64| base_frame(chart, gamma, s).map(|f| f.0);
    let dt = chart.covariant_derivative(gamma, &tf, t, h)?.comps;
    let (_, n, _, en) = base_frame(chart, gamma, t)?;
    Ok(en * chart.inner(gamma.point(t), dt, n)?)
}

impl FiberField {
    pub fn from_fn(eps: f64, label: &str, f: impl Fn(f64) -> Result<Vec2> + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), eps, label: label.to_string() }
    }

    pub fn value(&self, t: f64) -> Result<Vec2> {
        (self.f)(t)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `X = T = E/‖E‖`.
    pub fn tangent_scaled(chart: &SurfaceChart, gamma: Arc<dyn BaseCurve>, t0: f64) -> Result<Self> {
        let eps = base_frame(chart, gamma.as_ref(), t0)?.2;
        let chart = chart.clone();
        Ok(Self::from_fn(eps, "tangent-scaled", move |t| Ok(base_frame(&chart, gamma.as_ref(), t)?.0)))
    }

    /// `X` obtained by rotating the base frame by the profile's angle. On a
    /// Riemannian base `X = cos φ T + sin φ N` and `character` is ignored.
    pub fn frame_angle(
        chart: &SurfaceChart,
        gamma: Arc<dyn BaseCurve>,
        range: [f64; 2],
        character: FiberCharacter,
        profile: AngleProfile,
    ) -> Result<Self> {
        let (_, _, et, en) = base_frame(chart, gamma.as_ref(), range[0])?;
        let riemannian = chart.signature() == SurfaceSignature::Riemannian;
        let eps = if riemannian {
            1.0
        } else {
            match character {
                FiberCharacter::Tangent => et,
                FiberCharacter::Normal => en,
            }
        };
        let label = match &profile {
            AngleProfile::Constant(_) => "constant-angle",
            AngleProfile::Linear { .. } => "linear-angle",
            AngleProfile::Parallel(_) => "parallel",
            AngleProfile::Expr(_) => "angle-expression",
        };
        let angle: Arc<dyn Fn(f64) -> Result<f64> + Send + Sync> = match profile {
            AngleProfile::Constant(c) => Arc::new(move |_| Ok(c)),
            AngleProfile::Linear { a, b } => Arc::new(move |t| Ok(a * t + b)),
            AngleProfile::Expr(e) => Arc::new(move |t| Ok(e.eval1(t))),
            AngleProfile::Parallel(phi0) => {
                let [t0, t1] = range;
                let pad = 0.05 * (t1 - t0) + 8.0 * H_PARAM;
                let (lo, hi) = (t0 - pad, t1 + pad);
                let cells = (((hi - lo) * 64.0).ceil() as usize).clamp(16, 8192);
                let c2 = chart.clone();
                let g2 = gamma.clone();
                let rate = move |t: f64| frame_rotation_rate(&c2, g2.as_ref(), t, H_PARAM);
                let table = CumulativeIntegral::build(&rate, lo, hi, cells)?;
                let base = table.value(&rate, t0)?;
                Arc::new(move |t| Ok(phi0 - (table.value(&rate, t)? - base)))
            }
        };
        let chart = chart.clone();
        Ok(Self::from_fn(eps, label, move |t| {
            let (tan, n, _, _) = base_frame(&chart, gamma.as_ref(), t)?;
            let phi = angle(t)?;
            let (a, b) = if riemannian {
                (phi.cos(), phi.sin())
            } else {
                match character {
                    FiberCharacter::Tangent => (phi.cosh(), phi.sinh()),
                    FiberCharacter::Normal => (phi.sinh(), phi.cosh()),
                }
            };
            Ok([a * tan[0] + b * n[0], a * tan[1] + b * n[1]])
        }))
    }

    /// Solves for the frame angle `φ(t)` that makes `g₁(T̃, ξ) = L(θ(s))`
    /// along the lift, using `(φ′ + ω)² = ε_Y e²(ε_T̃ a(φ)²/L² − ε_T)` and
    /// `ds/dt = e|a(φ)|/(2|L|)`; the solution is stored as a Chebyshev
    /// interpolant slightly wider than `range`.
    pub fn prescribed_angle(
        chart: &SurfaceChart,
        gamma: Arc<dyn BaseCurve>,
        range: [f64; 2],
        spec: PrescribedAngle,
    ) -> Result<Self> {
        let riemannian = chart.signature() == SurfaceSignature::Riemannian;
        let (_, _, et0, en0) = base_frame(chart, gamma.as_ref(), range[0])?;
        let eps_x = frame_combination(riemannian, spec.character, 0.0, et0, en0)[6];
        let eps_lift = match spec.law {
            AngleLaw::SinhMixed => -eps_x,
            _ => eps_x,
        };
        let branch = if spec.branch < 0.0 { -1.0 } else { 1.0 };
        let rhs = {
            let chart = chart.clone();
            let gamma = gamma.clone();
            move |t: f64, y: [f64; 2]| -> Result<[f64; 2]> {
                let (_, _, et, en) = base_frame(&chart, gamma.as_ref(), t)?;
                let e = crate::curve::speed(&chart, gamma.as_ref(), t)?;
                let omega = frame_rotation_rate(&chart, gamma.as_ref(), t, H_PARAM)?;
                let [a, _, _, _, eps_t, eps_y, _] = frame_combination(riemannian, spec.character, y[0], et, en);
                let l = angle_law_value(spec.law, spec.theta.at(y[1]));
                if l.abs() < 1e-12 || (eps_t * a) * l < 0.0 {
                    return Err(GeomError::InvalidParams(format!(
                        "prescribed angle is unreachable at t = {t}: g(E,X) and L have opposite signs"
                    )));
                }
                let rad = eps_y * (eps_lift * a * a / (l * l) - eps_t);
                if rad < 0.0 {
                    return Err(GeomError::InvalidParams(format!(
                        "prescribed angle is unreachable at t = {t} (radicand {rad:e})"
                    )));
                }
                Ok([-omega + branch * e * rad.sqrt(), 0.5 * e * a.abs() / l.abs()])
            }
        };
        let [t0, t1] = range;
        let pad = 0.02 * (t1 - t0) + 16.0 * H_PARAM;
        let (lo, hi) = (t0 - pad, t1 + pad);
        let nodes = Chebyshev::nodes(lo, hi, 72);
        let hmax = (hi - lo) / 8192.0;
        let mut phi = vec![0.0; nodes.len()];
        let split = nodes.partition_point(|x| *x < t0);
        let mut state = (t0, [spec.phi0, 0.0]);
        for k in split..nodes.len() {
            state = (nodes[k], rk4(&rhs, state.0, state.1, nodes[k], hmax)?);
            phi[k] = state.1[0];
        }
        state = (t0, [spec.phi0, 0.0]);
        for k in (0..split).rev() {
            state = (nodes[k], rk4(&rhs, state.0, state.1, nodes[k], hmax)?);
            phi[k] = state.1[0];
        }
        let cheb = Chebyshev::fit(lo, hi, &phi);
        let chart = chart.clone();
        Ok(Self::from_fn(eps_x, "prescribed-angle", move |t| {
            let (tan, n, et, en) = base_frame(&chart, gamma.as_ref(), t)?;
            let [a, b, ..] = frame_combination(riemannian, spec.character, cheb.eval(t), et, en);
            Ok([a * tan[0] + b * n[0], a * tan[1] + b * n[1]])
        }))
    }

    /// `X = (x1(t), x2(t))` in chart components; must be unit within `tol`
    /// on the sampled range.
    pub fn components(
        chart: &SurfaceChart,
        gamma: Arc<dyn BaseCurve>,
        range: [f64; 2],
        x1: Expression,
        x2: Expression,
        tol: f64,
    ) -> Result<Self> {
        let f = move |t: f64| Ok([x1.eval1(t), x2.eval1(t)]);
        let mut eps = 0.0;
        for k in 0..=256 {
            let t = range[0] + (range[1] - range[0]) * k as f64 / 256.0;
            let x = f(t)?;
            let q = chart.inner(gamma.point(t), x, x)?;
            if (q.abs() - 1.0).abs() > tol || (eps != 0.0 && sign(q) != eps) {
                return Err(GeomError::FiberNotUnit { t, norm_sq: q });
            }
            eps = sign(q);
        }
        Ok(Self::from_fn(eps, "components", f))
    }
}

/// Lorentzian angle between `T̃` and `ξ` as a function of the `g₁`-arclength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AngleTarget {
    Constant(f64),
    Linear { a: f64, b: f64 },
}

impl AngleTarget {
    pub fn at(&self, s: f64) -> f64 {
        match *self {
            AngleTarget::Constant(c) => c,
            AngleTarget::Linear { a, b } => a * s + b,
        }
    }
}

/// Fiber whose lift meets `ξ` at a prescribed angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrescribedAngle {
    pub law: AngleLaw,
    pub theta: AngleTarget,
    pub character: FiberCharacter,
    /// Frame angle of `X` at the start of the range.
    pub phi0: f64,
    /// Sign of `φ′ + ω`.
    pub branch: f64,
}

/// `X = a(φ)T + b(φ)N` with `∂X/∂φ = Y`: returns `(a, b, ∂a, ∂b, ε_T, ε_Y, ε_X)`.
fn frame_combination(riemannian: bool, character: FiberCharacter, phi: f64, et: f64, en: f64) -> [f64; 7] {
    if riemannian {
        return [phi.cos(), phi.sin(), -phi.sin(), phi.cos(), 1.0, 1.0, 1.0];
    }
    match character {
        FiberCharacter::Tangent => [phi.cosh(), phi.sinh(), phi.sinh(), phi.cosh(), et, en, et],
        FiberCharacter::Normal => [phi.sinh(), phi.cosh(), phi.cosh(), phi.sinh(), et, et, en],
    }
}

/// Lift `γ̃(t) = (γ(t), X(t))` of a base curve into `T₁M`.
#[derive(Clone)]
pub struct LiftedCurve {
    chart: SurfaceChart,
    gamma: Arc<dyn BaseCurve>,
    fiber: FiberField,
    range: [f64; 2],
    h: f64,
}

impl fmt::Debug for LiftedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LiftedCurve")
            .field("chart", &self.chart.name())
            .field("fiber", &self.fiber)
            .field("range", &self.range)
            .finish()
    }
}

/// Lifts `gamma` with fiber `fiber`, checking that `X` is unit and that the
/// lifted tangent has a fixed, non-null causal character on `range`.
pub fn lift_curve(
    chart: &SurfaceChart,
    gamma: Arc<dyn BaseCurve>,
    range: [f64; 2],
    fiber: FiberField,
    tol: f64,
) -> Result<LiftedCurve> {
    crate::curve::check_non_null(chart, gamma.as_ref(), range, tol)?;
    let lifted = LiftedCurve { chart: chart.clone(), gamma, fiber, range, h: H_PARAM };
    let mut s0 = 0.0;
    for k in 0..=256 {
        let t = range[0] + (range[1] - range[0]) * k as f64 / 256.0;
        let x = lifted.fiber.value(t)?;
        let q = chart.inner(lifted.gamma.point(t), x, x)?;
        if (q - lifted.fiber.eps()).abs() > UNIT_TOL.max(tol) {
            return Err(GeomError::FiberNotUnit { t, norm_sq: q });
        }
        let tt = lifted.tangent(t)?;
        let n = lifted.g1(t, &tt, &tt)?;
        if n.abs() <= tol || (s0 != 0.0 && sign(n) != s0) {
            return Err(GeomError::NullLift { t });
        }
        s0 = sign(n);
    }
    Ok(lifted)
}

impl LiftedCurve {
    pub fn chart(&self) -> &SurfaceChart {
        &self.chart
    }

    pub fn gamma(&self) -> &dyn BaseCurve {
        self.gamma.as_ref()
    }

    pub fn gamma_arc(&self) -> Arc<dyn BaseCurve> {
        self.gamma.clone()
    }

    pub fn fiber(&self) -> &FiberField {
        &self.fiber
    }

    pub fn range(&self) -> [f64; 2] {
        self.range
    }

    pub fn eps_x(&self) -> f64 {
        self.fiber.eps()
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn point(&self, t: f64) -> Result<BundlePoint> {
        let x = self.gamma.point(t);
        let u = self.fiber.value(t)?;
        let q = self.chart.inner(x, u, u)?;
        Ok(BundlePoint { x: SurfacePoint { coords: x }, u, eps_u: sign(q) })
    }

    /// `E = γ′(t)`
    pub fn e(&self, t: f64) -> Vec2 {
        self.gamma.velocity(t)
    }

    /// `r = ‖E‖`
    pub fn base_speed(&self, t: f64) -> Result<f64> {
        crate::curve::speed(&self.chart, self.gamma.as_ref(), t)
    }

    /// `∇_E X`
    pub fn nabla_e_x(&self, t: f64) -> Result<Vec2> {
        let f = |s: f64| self.fiber.value(s);
        Ok(self.chart.covariant_derivative(self.gamma.as_ref(), &f, t, self.h)?.comps)
    }

    /// `T̃ = Eʰ + (∇_E X)ᵗ`
    pub fn tangent(&self, t: f64) -> Result<BundleTangent> {
        let p = self.point(t)?;
        let w = self.nabla_e_x(t)?;
        Ok(BundleTangent { h: self.e(t), t: p.project(&self.chart, w)? })
    }

    /// `g₁` at the lifted point.
    pub fn g1(&self, t: f64, a: &BundleTangent, b: &BundleTangent) -> Result<f64> {
        sasaki_metric(&self.chart, &self.point(t)?, a, b, true)
    }

    /// `λ = ‖γ̃′‖_{g₁}`, so that `d/ds = λ⁻¹ d/dt` for the `g₁`-arclength `s`.
    pub fn lambda(&self, t: f64) -> Result<f64> {
        let tt = self.tangent(t)?;
        Ok(self.g1(t, &tt, &tt)?.abs().sqrt())
    }

    pub fn contact(&self, t: f64, convention: XiConvention) -> Result<ContactData> {
        Ok(contact_at(&self.point(t)?, convention))
    }

    /// `∇₁` of a field `F = Aʰ + Bᵗ` along the lift, with respect to the curve
    /// parameter:
    /// `[∇_E A + ½R(u,W)A + ½R(u,B)E]ʰ + [∇_E B − ½R(E,A)u]ᵗ`, `W = ∇_E X`.
    pub fn nabla1(&self, t: f64, field: &dyn Fn(f64) -> Result<BundleTangent>) -> Result<BundleTangent> {
        let p = self.point(t)?;
        let x = p.coords();
        let e = self.e(t);
        let w = self.nabla_e_x(t)?;
        let f = field(t)?;
        let fa = |s: f64| field(s).map(|v| v.h);
        let fb = |s: f64| field(s).map(|v| v.t);
        let da = self.chart.covariant_derivative(self.gamma.as_ref(), &fa, t, self.h)?.comps;
        let db = self.chart.covariant_derivative(self.gamma.as_ref(), &fb, t, self.h)?.comps;
        let r = self.chart.riemann(x)?;
        let r1 = r.apply(p.u, w, f.h);
        let r2 = r.apply(p.u, f.t, e);
        let r3 = r.apply(e, f.h, p.u);
        let h = [da[0] + 0.5 * (r1[0] + r2[0]), da[1] + 0.5 * (r1[1] + r2[1])];
        let tv = p.project(&self.chart, [db[0] - 0.5 * r3[0], db[1] - 0.5 * r3[1]])?;
        Ok(BundleTangent { h, t: tv })
    }

    /// Coordinates `(h¹, h², c)` with `t = c·n_u`, `n_u = J u`.
    fn coords3(&self, p: &BundlePoint, a: &BundleTangent) -> Result<([f64; 3], Vec2, f64)> {
        let g = self.chart.metric(p.coords())?;
        let n = orthogonal_of(&g, p.u);
        let en = sign(inner_with(&g, n, n));
        Ok(([a.h[0], a.h[1], en * inner_with(&g, a.t, n)], n, en))
    }
}

/// `∇₁` along a lift evaluated at `t`; see [`LiftedCurve::nabla1`].
pub fn nabla1_along(lifted: &LiftedCurve, field: &dyn Fn(f64) -> Result<BundleTangent>, t: f64) -> Result<BundleTangent> {
    lifted.nabla1(t, field)
}

impl FrameCurve for LiftedCurve {
    type Vector = BundleTangent;

    fn inner(&self, t: f64, a: &BundleTangent, b: &BundleTangent) -> Result<f64> {
        self.g1(t, a, b)
    }

    fn velocity(&self, t: f64) -> Result<BundleTangent> {
        self.tangent(t)
    }

    fn covariant_derivative(&self, t: f64, field: &dyn Fn(f64) -> Result<BundleTangent>) -> Result<BundleTangent> {
        self.nabla1(t, field)
    }

    fn complement(&self, t: f64, a: &BundleTangent, b: &BundleTangent) -> Result<BundleTangent> {
        let p = self.point(t)?;
        let g = self.chart.metric(p.coords())?;
        let (ca, n, en) = self.coords3(&p, a)?;
        let (cb, _, _) = self.coords3(&p, b)?;
        let gram = [
            [0.25 * g[0][0], 0.25 * g[0][1], 0.0],
            [0.25 * g[1][0], 0.25 * g[1][1], 0.0],
            [0.0, 0.0, 0.25 * en],
        ];
        let inv = inverse3(&gram).ok_or(GeomError::DegenerateMetric {
            u: p.coords()[0],
            v: p.coords()[1],
            det: 0.0,
        })?;
        let w = mat3_vec(&inv, cross3(ca, cb));
        Ok(BundleTangent { h: [w[0], w[1]], t: scale2(w[2], n) })
    }

    fn coord_norm(&self, v: &BundleTangent) -> f64 {
        v.max_abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::ExprCurve;
    use crate::frenet::{frame3_at, frenet3_at};
    use crate::surface::{make_surface, SurfaceKind};

    fn ds1() -> SurfaceChart {
        make_surface(SurfaceKind::DeSitter { r: 1.0 }).unwrap()
    }

    #[test]
    fn pure_lifts_follow_the_sasaki_rules() {
        let c = ds1();
        let p = BundlePoint::normalized(&c, [0.3, 0.2], [1.0, 0.4]).unwrap();
        let a = p.horizontal([0.7, -0.2]);
        let b = p.tangential(&c, [0.1, 0.9]).unwrap();
        assert_eq!(sasaki_metric(&c, &p, &a, &b, false).unwrap(), 0.0);
        let uu = p.tangential(&c, p.u).unwrap();
        assert!(sasaki_metric(&c, &p, &uu, &uu, false).unwrap().abs() < 1e-14);
        let hh = sasaki_metric(&c, &p, &a, &a, false).unwrap();
        assert!((hh - c.inner(p.coords(), a.h, a.h).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn reeb_field_norm_matches_fiber_character() {
        let c = ds1();
        for u in [[1.0, 0.2], [0.1, 1.0]] {
            let p = BundlePoint::normalized(&c, [0.1, -0.4], u).unwrap();
            let cd = contact_at(&p, XiConvention::TwoXh);
            let n = sasaki_metric(&c, &p, &cd.xi, &cd.xi, true).unwrap();
            assert!((n - p.eps_u).abs() < 1e-14);
            assert!((cd.eta(&c, &cd.xi).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn phi_squared_identity() {
        let c = make_surface(SurfaceKind::AntiDeSitter).unwrap();
        let p = BundlePoint::normalized(&c, [0.2, 0.5], [0.3, 1.0]).unwrap();
        let cd = contact_at(&p, XiConvention::TwoXh);
        let a = BundleTangent { h: [0.4, -1.1], t: p.project(&c, [0.8, 0.3]).unwrap() };
        let lhs = cd.phi(&c, &cd.phi(&c, &a).unwrap()).unwrap();
        let rhs = -a + cd.xi * cd.eta(&c, &a).unwrap();
        assert!((lhs - rhs).max_abs() < 1e-12);
    }

    #[test]
    fn spacelike_line_with_boost_fiber_is_null() {
        let flat = make_surface(SurfaceKind::FlatLorentz).unwrap();
        let g: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse("t", "0").unwrap());
        let x = FiberField::from_fn(1.0, "boost", |t: f64| Ok([t.cosh(), t.sinh()]));
        let r = lift_curve(&flat, g, [0.0, 1.0], x, 1e-9);
        assert!(matches!(r, Err(GeomError::NullLift { .. })), "{r:?}");
    }

    #[test]
    fn parallel_fiber_is_parallel() {
        let c = ds1();
        let g: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse("t", "0.3 + 0.2*t").unwrap());
        let x = FiberField::frame_angle(&c, g.clone(), [0.0, 1.0], FiberCharacter::Normal, AngleProfile::Parallel(0.4))
            .unwrap();
        let l = lift_curve(&c, g, [0.0, 1.0], x, 1e-9).unwrap();
        for t in [0.1, 0.5, 0.9] {
            let w = l.nabla_e_x(t).unwrap();
            assert!(w[0].abs().max(w[1].abs()) < 1e-9, "{w:?}");
        }
    }

    #[test]
    fn parallel_lift_of_flat_line_is_geodesic() {
        let flat = make_surface(SurfaceKind::FlatLorentz).unwrap();
        let g: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse("t", "0.5*t").unwrap());
        let x = FiberField::frame_angle(&flat, g.clone(), [0.0, 1.0], FiberCharacter::Tangent, AngleProfile::Parallel(0.2))
            .unwrap();
        let l = lift_curve(&flat, g, [0.0, 1.0], x, 1e-9).unwrap();
        assert!(matches!(frame3_at(&l, 0.5), Err(GeomError::GeodesicLift { .. })));
    }

    #[test]
    fn lifted_frenet_residuals_on_de_sitter() {
        let c = ds1();
        let g: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse("t", "0.4").unwrap());
        let x = FiberField::frame_angle(&c, g.clone(), [0.0, 2.0], FiberCharacter::Tangent, AngleProfile::Linear {
            a: 0.7,
            b: 0.1,
        })
        .unwrap();
        let l = lift_curve(&c, g, [0.0, 2.0], x, 1e-9).unwrap();
        let f = frenet3_at(&l, 1.0).unwrap();
        assert!(f.residuals.iter().all(|r| *r < 1e-5), "{:?}", f.residuals);
        for (a, b, want) in [
            (&f.tangent, &f.tangent, f.eps1),
            (&f.normal, &f.normal, f.eps2),
            (&f.binormal, &f.binormal, f.eps3),
            (&f.tangent, &f.normal, 0.0),
            (&f.normal, &f.binormal, 0.0),
        ] {
            assert!((l.g1(1.0, a, b).unwrap() - want).abs() < 1e-7);
        }
    }
}
