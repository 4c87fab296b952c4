//! Parametrized curves on a surface chart.

use std::fmt;
use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::expr::Expression;
use crate::numeric::{diff, CumulativeIntegral, Vec2};
use crate::surface::SurfaceChart;

/// A smooth curve in chart coordinates with an exact (or accurate) velocity.
pub trait BaseCurve: Send + Sync {
    fn point(&self, t: f64) -> Vec2;
    fn velocity(&self, t: f64) -> Vec2;
}

impl fmt::Debug for dyn BaseCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BaseCurve")
    }
}

/// Curve `t ↦ (u(t), v(t))` given by expressions; velocity by symbolic
/// differentiation.
#[derive(Debug, Clone)]
pub struct ExprCurve {
    u: Expression,
    v: Expression,
    du: Expression,
    dv: Expression,
}

impl ExprCurve {
    pub fn new(u: Expression, v: Expression) -> Result<Self> {
        let du = u
            .derivative("t")
            .ok_or_else(|| GeomError::InvalidParams("curve expression u must be in t".into()))?;
        let dv = v
            .derivative("t")
            .ok_or_else(|| GeomError::InvalidParams("curve expression v must be in t".into()))?;
        Ok(Self { u, v, du, dv })
    }

    pub fn parse(u: &str, v: &str) -> std::result::Result<Self, crate::expr::ExprError> {
        let u = crate::expr::parse_expression(u)?;
        let v = crate::expr::parse_expression(v)?;
        Ok(Self::new(u, v).expect("parsed in t"))
    }
}

impl BaseCurve for ExprCurve {
    fn point(&self, t: f64) -> Vec2 {
        [self.u.eval1(t), self.v.eval1(t)]
    }

    fn velocity(&self, t: f64) -> Vec2 {
        [self.du.eval1(t), self.dv.eval1(t)]
    }
}

type PointFn = Arc<dyn Fn(f64) -> Vec2 + Send + Sync>;

/// Curve from closures. Without an explicit velocity the derivative is taken
/// with a fourth-order stencil.
#[derive(Clone)]
pub struct FnCurve {
    point: PointFn,
    velocity: Option<PointFn>,
}

impl FnCurve {
    pub fn new(point: impl Fn(f64) -> Vec2 + Send + Sync + 'static) -> Self {
        Self { point: Arc::new(point), velocity: None }
    }

    pub fn with_velocity(
        point: impl Fn(f64) -> Vec2 + Send + Sync + 'static,
        velocity: impl Fn(f64) -> Vec2 + Send + Sync + 'static,
    ) -> Self {
        Self { point: Arc::new(point), velocity: Some(Arc::new(velocity)) }
    }
}

impl BaseCurve for FnCurve {
    fn point(&self, t: f64) -> Vec2 {
        (self.point)(t)
    }

    fn velocity(&self, t: f64) -> Vec2 {
        match &self.velocity {
            Some(v) => v(t),
            None => {
                let h = 1e-3;
                [diff(|s| (self.point)(s)[0], t, h), diff(|s| (self.point)(s)[1], t, h)]
            }
        }
    }
}

/// `√|g(γ′, γ′)|`
pub fn speed(chart: &SurfaceChart, curve: &dyn BaseCurve, t: f64) -> Result<f64> {
    Ok(chart.inner(curve.point(t), curve.velocity(t), curve.velocity(t))?.abs().sqrt())
}

/// A curve reparametrized to constant speed by inverting its arclength.
pub struct Reparametrized {
    chart: SurfaceChart,
    inner: Arc<dyn BaseCurve>,
    table: CumulativeIntegral,
    target: f64,
    pad: f64,
    range: [f64; 2],
}

impl Reparametrized {
    /// Parameter interval `[0, length / target]` of the new curve.
    pub fn range(&self) -> [f64; 2] {
        self.range
    }

    pub fn target_speed(&self) -> f64 {
        self.target
    }

    /// Original parameter corresponding to new parameter `s`.
    pub fn original_parameter(&self, s: f64) -> f64 {
        let rate = |t: f64| speed(&self.chart, self.inner.as_ref(), t);
        self.table
            .invert(rate, self.target * s + self.pad)
            .unwrap_or(f64::NAN)
    }
}

impl BaseCurve for Reparametrized {
    fn point(&self, s: f64) -> Vec2 {
        self.inner.point(self.original_parameter(s))
    }

    fn velocity(&self, s: f64) -> Vec2 {
        let t = self.original_parameter(s);
        let v = self.inner.velocity(t);
        let sp = speed(&self.chart, self.inner.as_ref(), t).unwrap_or(f64::NAN);
        let k = self.target / sp;
        [v[0] * k, v[1] * k]
    }
}

/// Reparametrize `curve` on `[t0, t1]` so that `‖γ′‖ = target_speed`.
///
/// The returned curve is parametrized on `[0, ℓ / target_speed]` where `ℓ` is
/// the length of the original arc; it stays evaluable slightly beyond both
/// ends so that stencils near the boundary are well defined.
pub fn reparametrize_to_speed(
    chart: &SurfaceChart,
    curve: Arc<dyn BaseCurve>,
    t_range: [f64; 2],
    target_speed: f64,
    tol: f64,
) -> Result<Reparametrized> {
    if !(target_speed > 0.0) {
        return Err(GeomError::InvalidParams("target speed must be positive".into()));
    }
    let [t0, t1] = t_range;
    if !(t1 > t0) {
        return Err(GeomError::InvalidParams("empty parameter range".into()));
    }
    check_non_null(chart, curve.as_ref(), t_range, tol)?;
    let margin = 0.05 * (t1 - t0);
    let lo = t0 - margin;
    let hi = t1 + margin;
    let rate = |t: f64| speed(chart, curve.as_ref(), t);
    let cells = (((hi - lo) * 64.0).ceil() as usize).clamp(16, 8192);
    let table = CumulativeIntegral::build(rate, lo, hi, cells)?;
    let pad = table.value(rate, t0)?;
    let length = table.value(rate, t1)? - pad;
    Ok(Reparametrized {
        chart: chart.clone(),
        inner: curve,
        table,
        target: target_speed,
        pad,
        range: [0.0, length / target_speed],
    })
}

/// Errors with `NullSegment` when `|g(γ′,γ′)|` drops to `tol` or the causal
/// character flips on `[t0, t1]`.
pub fn check_non_null(chart: &SurfaceChart, curve: &dyn BaseCurve, t_range: [f64; 2], tol: f64) -> Result<()> {
    let n = 512;
    let mut sign = 0.0;
    for k in 0..=n {
        let t = t_range[0] + (t_range[1] - t_range[0]) * k as f64 / n as f64;
        let v = curve.velocity(t);
        let q = chart.inner(curve.point(t), v, v)?;
        if q.abs() <= tol || (sign != 0.0 && q.signum() != sign) {
            return Err(GeomError::NullSegment { t });
        }
        sign = q.signum();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{make_surface, SurfaceKind};

    fn flat() -> SurfaceChart {
        make_surface(SurfaceKind::FlatLorentz).unwrap()
    }

    #[test]
    fn linear_curve_to_unit_speed() {
        let c: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse("2*t", "0").unwrap());
        let r = reparametrize_to_speed(&flat(), c, [0.0, 1.0], 1.0, 1e-9).unwrap();
        assert!((r.range()[1] - 2.0).abs() < 1e-12);
        for s in [0.0, 0.5, 1.3, 2.0] {
            assert!((r.point(s)[0] - s).abs() < 1e-12);
            assert!((r.velocity(s)[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cubic_curve_arclength() {
        let c: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse("t^3+t", "0").unwrap());
        let r = reparametrize_to_speed(&flat(), c, [0.0, 1.0], 1.0, 1e-9).unwrap();
        assert!((r.range()[1] - 2.0).abs() < 1e-6);
        for k in 0..=20 {
            let s = 2.0 * k as f64 / 20.0;
            let sp = speed(&flat(), &r, s).unwrap();
            assert!((sp - 1.0).abs() < 1e-6, "s={s} speed={sp}");
        }
        // endpoint maps back to t = 1
        assert!((r.original_parameter(r.range()[1]) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn null_diagonal_is_rejected() {
        let c: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse("t", "t").unwrap());
        assert!(matches!(
            reparametrize_to_speed(&flat(), c, [0.0, 1.0], 1.0, 1e-9),
            Err(GeomError::NullSegment { .. })
        ));
    }

    #[test]
    fn fn_curve_velocity_by_stencil() {
        let c = FnCurve::new(|t| [t.sin(), t * t]);
        let v = c.velocity(0.4);
        assert!((v[0] - 0.4f64.cos()).abs() < 1e-11);
        assert!((v[1] - 0.8).abs() < 1e-11);
    }
}
