//! Chart-based two-dimensional pseudo-Riemannian surfaces.
//!
//! A [`SurfaceChart`] carries a metric field on a coordinate box together
//! with an optional closed form for its Christoffel symbols. Everything else
//! (Riemann tensor, sectional curvature, covariant derivatives along curves)
//! is derived with fourth-order central differences.
//!
//! Sign conventions: `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z` and
//! `σ = g(R(X,Y)Y, X) / (g(X,X)g(Y,Y) − g(X,Y)²)`, so de Sitter space has
//! `σ = +1/r²`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::expr::Expression;
use crate::numeric::Vec2;

pub type Metric2 = [[f64; 2]; 2];
/// `gamma[i][j][k] = Γ^i_jk`.
pub type Christoffel = [[[f64; 2]; 2]; 2];

type MetricFn = Arc<dyn Fn(Vec2) -> Metric2 + Send + Sync>;
type ChristoffelFn = Arc<dyn Fn(Vec2) -> Christoffel + Send + Sync>;

/// Default step for first derivatives of the metric.
pub const H_METRIC: f64 = 1e-5;
/// Default step for derivatives of the Christoffel symbols.
pub const H_CURVATURE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceSignature {
    /// `(+,-)`
    Lorentzian,
    /// `(+,+)`
    Riemannian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub coords: Vec2,
}

impl SurfacePoint {
    pub fn new(u: f64, v: f64) -> Self {
        Self { coords: [u, v] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentVec {
    pub base: SurfacePoint,
    pub comps: Vec2,
}

/// Which built-in surface to construct.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceKind {
    FlatLorentz,
    DeSitter { r: f64 },
    AntiDeSitter,
    /// Riemannian hyperbolic plane `dv² + cosh²v du²`; only for curvature cross-checks.
    HyperbolicPlane,
    /// Round unit sphere `dv² + cos²v du²`; only for curvature cross-checks.
    Sphere,
    Custom { g11: Expression, g12: Expression, g22: Expression, signature: SurfaceSignature },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub point: SurfacePoint,
    pub sigma: f64,
    /// `g(R(∂₁,∂₂)∂₂, ∂₁)`
    pub r1212: f64,
}

/// Riemann tensor `R^i_jkl` with `R(∂_k, ∂_l)∂_j = R^i_jkl ∂_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Riemann {
    pub up: [[[[f64; 2]; 2]; 2]; 2],
    pub metric: Metric2,
}

impl Riemann {
    /// `R(X,Y)Z`
    pub fn apply(&self, x: Vec2, y: Vec2, z: Vec2) -> Vec2 {
        let mut out = [0.0; 2];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        *o += self.up[i][j][k][l] * z[j] * x[k] * y[l];
                    }
                }
            }
        }
        out
    }

    /// Fully covariant `R_ijkl = g_im R^m_jkl`.
    pub fn lowered(&self) -> [[[[f64; 2]; 2]; 2]; 2] {
        let mut out = [[[[0.0; 2]; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out[i][j][k][l] = (0..2).map(|m| self.metric[i][m] * self.up[m][j][k][l]).sum();
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone)]
pub struct SurfaceChart {
    name: String,
    domain: [[f64; 2]; 2],
    signature: SurfaceSignature,
    metric_fn: MetricFn,
    christoffel_fn: Option<ChristoffelFn>,
    h_metric: f64,
    h_curvature: f64,
}

impl fmt::Debug for SurfaceChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceChart")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("signature", &self.signature)
            .field("closed_form_christoffel", &self.christoffel_fn.is_some())
            .finish()
    }
}

pub fn make_surface(kind: SurfaceKind) -> Result<SurfaceChart> {
    const WIDE: [f64; 2] = [-1e3, 1e3];
    match kind {
        SurfaceKind::FlatLorentz => Ok(SurfaceChart::from_parts(
            "flat-lorentz",
            [WIDE, WIDE],
            SurfaceSignature::Lorentzian,
            Arc::new(|_| [[1.0, 0.0], [0.0, -1.0]]),
            Some(Arc::new(|_| [[[0.0; 2]; 2]; 2])),
        )),
        SurfaceKind::DeSitter { r } => {
            if !(r > 0.0) || !r.is_finite() {
                return Err(GeomError::InvalidParams(format!("de Sitter radius must be positive, got {r}")));
            }
            let r2 = r * r;
            Ok(SurfaceChart::from_parts(
                &format!("de-sitter({r})"),
                [WIDE, [-20.0, 20.0]],
                SurfaceSignature::Lorentzian,
                Arc::new(move |p: Vec2| {
                    let c = p[1].cosh();
                    [[r2 * c * c, 0.0], [0.0, -r2]]
                }),
                Some(Arc::new(|p: Vec2| {
                    let (s, c) = (p[1].sinh(), p[1].cosh());
                    let mut g = [[[0.0; 2]; 2]; 2];
                    g[0][0][1] = s / c;
                    g[0][1][0] = s / c;
                    g[1][0][0] = s * c;
                    g
                })),
            ))
        }
        SurfaceKind::AntiDeSitter => Ok(SurfaceChart::from_parts(
            "anti-de-sitter",
            [[-20.0, 20.0], WIDE],
            SurfaceSignature::Lorentzian,
            Arc::new(|p: Vec2| {
                let c = p[0].cosh();
                [[1.0, 0.0], [0.0, -c * c]]
            }),
            Some(Arc::new(|p: Vec2| {
                let (s, c) = (p[0].sinh(), p[0].cosh());
                let mut g = [[[0.0; 2]; 2]; 2];
                g[1][0][1] = s / c;
                g[1][1][0] = s / c;
                g[0][1][1] = s * c;
                g
            })),
        )),
        SurfaceKind::HyperbolicPlane => Ok(SurfaceChart::from_parts(
            "hyperbolic-plane",
            [WIDE, [-20.0, 20.0]],
            SurfaceSignature::Riemannian,
            Arc::new(|p: Vec2| {
                let c = p[1].cosh();
                [[c * c, 0.0], [0.0, 1.0]]
            }),
            None,
        )),
        SurfaceKind::Sphere => Ok(SurfaceChart::from_parts(
            "sphere",
            [WIDE, [-1.5, 1.5]],
            SurfaceSignature::Riemannian,
            Arc::new(|p: Vec2| {
                let c = p[1].cos();
                [[c * c, 0.0], [0.0, 1.0]]
            }),
            None,
        )),
        SurfaceKind::Custom { g11, g12, g22, signature } => {
            for e in [&g11, &g12, &g22] {
                if e.vars().len() != 2 {
                    return Err(GeomError::InvalidParams(
                        "custom metric expressions must be in the variables u, v".into(),
                    ));
                }
            }
            let chart = SurfaceChart::from_parts(
                "custom",
                [[-1e3, 1e3], [-1e3, 1e3]],
                signature,
                Arc::new(move |p: Vec2| {
                    let a = g11.eval(&p);
                    let b = g12.eval(&p);
                    [[a, b], [b, g22.eval(&p)]]
                }),
                None,
            );
            Ok(chart)
        }
    }
}

impl SurfaceChart {
    pub fn from_parts(
        name: &str,
        domain: [[f64; 2]; 2],
        signature: SurfaceSignature,
        metric_fn: MetricFn,
        christoffel_fn: Option<ChristoffelFn>,
    ) -> Self {
        Self {
            name: name.to_string(),
            domain,
            signature,
            metric_fn,
            christoffel_fn,
            h_metric: H_METRIC,
            h_curvature: H_CURVATURE,
        }
    }

    /// A chart given only by a metric closure; Christoffels by finite differences.
    pub fn custom(
        name: &str,
        domain: [[f64; 2]; 2],
        signature: SurfaceSignature,
        metric: impl Fn(Vec2) -> Metric2 + Send + Sync + 'static,
    ) -> Self {
        Self::from_parts(name, domain, signature, Arc::new(metric), None)
    }

    pub fn with_domain(mut self, domain: [[f64; 2]; 2]) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_steps(mut self, h_metric: f64, h_curvature: f64) -> Self {
        self.h_metric = h_metric;
        self.h_curvature = h_curvature;
        self
    }

    /// Same chart with the closed-form Christoffels dropped.
    pub fn finite_difference_only(mut self) -> Self {
        self.christoffel_fn = None;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> SurfaceSignature {
        self.signature
    }

    pub fn domain(&self) -> [[f64; 2]; 2] {
        self.domain
    }

    pub fn has_closed_form_christoffel(&self) -> bool {
        self.christoffel_fn.is_some()
    }

    fn margin(&self) -> f64 {
        2.0 * (self.h_metric + self.h_curvature)
    }

    pub fn check_domain(&self, p: Vec2) -> Result<()> {
        let m = self.margin();
        let inside = p.iter().all(|x| x.is_finite())
            && (0..2).all(|i| p[i] >= self.domain[i][0] + m && p[i] <= self.domain[i][1] - m);
        if inside {
            Ok(())
        } else {
            Err(GeomError::OutOfDomain { u: p[0], v: p[1] })
        }
    }

    /// Raw metric components without validation.
    pub fn metric_raw(&self, p: Vec2) -> Metric2 {
        (self.metric_fn)(p)
    }

    /// Metric components at `p`; errors when degenerate or outside the domain.
    pub fn metric(&self, p: Vec2) -> Result<Metric2> {
        self.check_domain(p)?;
        let g = (self.metric_fn)(p);
        let det = det2(&g);
        if !(det.abs() > 1e-10) {
            return Err(GeomError::DegenerateMetric { u: p[0], v: p[1], det });
        }
        Ok(g)
    }

    pub fn inverse_metric(&self, p: Vec2) -> Result<Metric2> {
        let g = self.metric(p)?;
        let det = det2(&g);
        Ok([[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]])
    }

    pub fn inner(&self, p: Vec2, a: Vec2, b: Vec2) -> Result<f64> {
        let g = self.metric(p)?;
        Ok(inner_with(&g, a, b))
    }

    /// Checks symmetry, non-degeneracy and the declared signature at `p`.
    pub fn validate_at(&self, p: Vec2) -> Result<()> {
        let g = self.metric(p)?;
        if (g[0][1] - g[1][0]).abs() > 1e-12 * (1.0 + g[0][1].abs()) {
            return Err(GeomError::InvalidParams(format!("metric not symmetric at {p:?}")));
        }
        let det = det2(&g);
        let ok = match self.signature {
            SurfaceSignature::Lorentzian => det < 0.0,
            SurfaceSignature::Riemannian => det > 0.0 && g[0][0] > 0.0,
        };
        if !ok {
            return Err(GeomError::InvalidParams(format!(
                "metric at {p:?} does not have the declared {:?} signature",
                self.signature
            )));
        }
        Ok(())
    }

    /// Validate on a coarse lattice of the domain intersected with `window`.
    pub fn validate_window(&self, window: [[f64; 2]; 2]) -> Result<()> {
        for i in 0..=4 {
            for j in 0..=4 {
                let u = window[0][0] + (window[0][1] - window[0][0]) * i as f64 / 4.0;
                let v = window[1][0] + (window[1][1] - window[1][0]) * j as f64 / 4.0;
                self.validate_at([u, v])?;
            }
        }
        Ok(())
    }

    fn metric_partials(&self, p: Vec2) -> Result<[Metric2; 2]> {
        let h = self.h_metric;
        let mut out = [[[0.0; 2]; 2]; 2];
        for (dir, slot) in out.iter_mut().enumerate() {
            let at = |s: f64| -> Result<Metric2> {
                let mut q = p;
                q[dir] += s;
                Ok((self.metric_fn)(q))
            };
            let (m2, m1, p1, p2) = (at(-2.0 * h)?, at(-h)?, at(h)?, at(2.0 * h)?);
            for i in 0..2 {
                for j in 0..2 {
                    slot[i][j] = (m2[i][j] - 8.0 * m1[i][j] + 8.0 * p1[i][j] - p2[i][j]) / (12.0 * h);
                }
            }
        }
        Ok(out)
    }

    /// Christoffel symbols by central differences of the metric, ignoring
    /// any closed form.
    pub fn christoffel_fd(&self, p: Vec2) -> Result<Christoffel> {
        let ginv = self.inverse_metric(p)?;
        let dg = self.metric_partials(p)?;
        let mut gam = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let mut acc = 0.0;
                    for l in 0..2 {
                        acc += ginv[i][l] * (dg[j][l][k] + dg[k][j][l] - dg[l][j][k]);
                    }
                    gam[i][j][k] = 0.5 * acc;
                }
            }
        }
        Ok(gam)
    }

    /// `Γ^i_jk` at `p`, closed form when the chart provides one.
    pub fn christoffel_at(&self, p: SurfacePoint) -> Result<Christoffel> {
        self.christoffel(p.coords)
    }

    pub fn christoffel(&self, p: Vec2) -> Result<Christoffel> {
        match &self.christoffel_fn {
            Some(f) => {
                self.metric(p)?;
                Ok(f(p))
            }
            None => self.christoffel_fd(p),
        }
    }

    /// `Γ(a, b)^i = Γ^i_jk a^j b^k`
    pub fn connection_term(&self, p: Vec2, a: Vec2, b: Vec2) -> Result<Vec2> {
        let gam = self.christoffel(p)?;
        Ok(contract_christoffel(&gam, a, b))
    }

    pub fn riemann(&self, p: Vec2) -> Result<Riemann> {
        let h = self.h_curvature;
        let gam = self.christoffel(p)?;
        // dgam[d][i][j][k] = ∂_d Γ^i_jk
        let mut dgam = [[[[0.0; 2]; 2]; 2]; 2];
        for (dir, slot) in dgam.iter_mut().enumerate() {
            let at = |s: f64| -> Result<Christoffel> {
                let mut q = p;
                q[dir] += s;
                self.christoffel(q)
            };
            let (m2, m1, p1, p2) = (at(-2.0 * h)?, at(-h)?, at(h)?, at(2.0 * h)?);
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        slot[i][j][k] =
                            (m2[i][j][k] - 8.0 * m1[i][j][k] + 8.0 * p1[i][j][k] - p2[i][j][k]) / (12.0 * h);
                    }
                }
            }
        }
        let mut up = [[[[0.0; 2]; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let mut r = dgam[k][i][l][j] - dgam[l][i][k][j];
                        for m in 0..2 {
                            r += gam[i][k][m] * gam[m][l][j] - gam[i][l][m] * gam[m][k][j];
                        }
                        up[i][j][k][l] = r;
                    }
                }
            }
        }
        Ok(Riemann { up, metric: self.metric(p)? })
    }

    pub fn curvature_at(&self, p: SurfacePoint) -> Result<CurvatureReport> {
        let riem = self.riemann(p.coords)?;
        let g = riem.metric;
        let low = riem.lowered();
        // g(R(∂1,∂2)∂2, ∂1) = R_{1 2 1 2} in the (i, j, k, l) = (out, Z, X, Y) layout
        let r1212 = low[0][1][0][1];
        let sigma = r1212 / det2(&g);
        Ok(CurvatureReport { point: p, sigma, r1212 })
    }

    /// Sectional curvature at chart coordinates `p`.
    pub fn sigma(&self, p: Vec2) -> Result<f64> {
        Ok(self.curvature_at(SurfacePoint { coords: p })?.sigma)
    }

    /// `(∇_E V)^i = dV^i/dt + Γ^i_jk E^j V^k` along `gamma` at parameter `t`.
    pub fn covariant_derivative(
        &self,
        gamma: &dyn crate::curve::BaseCurve,
        field: &dyn Fn(f64) -> Result<Vec2>,
        t: f64,
        h: f64,
    ) -> Result<TangentVec> {
        let p = gamma.point(t);
        let e = gamma.velocity(t);
        let dv = crate::numeric::diff2(field, t, h)?;
        let v = field(t)?;
        let c = self.connection_term(p, e, v)?;
        Ok(TangentVec { base: SurfacePoint { coords: p }, comps: [dv[0] + c[0], dv[1] + c[1]] })
    }
}

pub fn det2(g: &Metric2) -> f64 {
    g[0][0] * g[1][1] - g[0][1] * g[1][0]
}

pub fn inner_with(g: &Metric2, a: Vec2, b: Vec2) -> f64 {
    g[0][0] * a[0] * b[0] + g[0][1] * (a[0] * b[1] + a[1] * b[0]) + g[1][1] * a[1] * b[1]
}

pub fn contract_christoffel(gam: &Christoffel, a: Vec2, b: Vec2) -> Vec2 {
    let mut out = [0.0; 2];
    for (i, o) in out.iter_mut().enumerate() {
        for j in 0..2 {
            for k in 0..2 {
                *o += gam[i][j][k] * a[j] * b[k];
            }
        }
    }
    out
}

/// A unit vector orthogonal to `a` (rotation by the area form), so that
/// `(a, J a)` is an oriented orthonormal pair when `a` is unit.
pub fn orthogonal_of(g: &Metric2, a: Vec2) -> Vec2 {
    let lower = [g[0][0] * a[0] + g[0][1] * a[1], g[1][0] * a[0] + g[1][1] * a[1]];
    let n = [-lower[1], lower[0]];
    let q = inner_with(g, n, n).abs().sqrt();
    if q == 0.0 {
        return n;
    }
    [n[0] / q, n[1] / q]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds1() -> SurfaceChart {
        make_surface(SurfaceKind::DeSitter { r: 1.0 }).unwrap()
    }

    #[test]
    fn builtin_metrics_at_reference_points() {
        let flat = make_surface(SurfaceKind::FlatLorentz).unwrap();
        assert_eq!(flat.metric([3.0, -7.0]).unwrap(), [[1.0, 0.0], [0.0, -1.0]]);
        assert_eq!(ds1().metric([0.4, 0.0]).unwrap(), [[1.0, 0.0], [0.0, -1.0]]);
        let ads = make_surface(SurfaceKind::AntiDeSitter).unwrap();
        assert_eq!(ads.metric([0.0, 2.0]).unwrap(), [[1.0, 0.0], [0.0, -1.0]]);
        assert!(make_surface(SurfaceKind::DeSitter { r: 0.0 }).is_err());
        assert!(make_surface(SurfaceKind::DeSitter { r: -1.0 }).is_err());
    }

    #[test]
    fn de_sitter_christoffels() {
        let c0 = ds1().christoffel([0.2, 0.0]).unwrap();
        assert!(c0.iter().flatten().flatten().all(|x| x.abs() < 1e-15));
        let c1 = ds1().christoffel([0.2, 1.0]).unwrap();
        assert!((c1[0][0][1] - 0.761_594_155_955_764_9).abs() < 1e-12);
        let fd = ds1().christoffel_fd([0.2, 1.0]).unwrap();
        assert!((fd[0][0][1] - 1f64.tanh()).abs() < 1e-8);
        assert!((fd[1][0][0] - 1f64.sinh() * 1f64.cosh()).abs() < 1e-8);
    }

    #[test]
    fn flat_christoffels_vanish() {
        let flat = make_surface(SurfaceKind::FlatLorentz).unwrap().finite_difference_only();
        let g = flat.christoffel([1.0, 2.0]).unwrap();
        assert!(g.iter().flatten().flatten().all(|x| *x == 0.0));
        assert_eq!(flat.sigma([0.5, 0.5]).unwrap(), 0.0);
    }

    #[test]
    fn constant_curvature_charts() {
        let ads = make_surface(SurfaceKind::AntiDeSitter).unwrap();
        let hyp = make_surface(SurfaceKind::HyperbolicPlane).unwrap();
        let sph = make_surface(SurfaceKind::Sphere).unwrap();
        for p in [[0.3, 0.7], [-1.2, 0.1], [2.0, -0.5]] {
            assert!((ds1().sigma(p).unwrap() - 1.0).abs() < 1e-6);
            assert!((ads.sigma(p).unwrap() + 1.0).abs() < 1e-6);
            assert!((hyp.sigma(p).unwrap() + 1.0).abs() < 1e-6);
            assert!((sph.sigma(p).unwrap() - 1.0).abs() < 1e-6);
        }
        let ds2 = make_surface(SurfaceKind::DeSitter { r: 2.0 }).unwrap();
        assert!((ds2.sigma([0.1, 0.3]).unwrap() - 0.25).abs() < 1e-6);
    }

    #[test]
    fn domain_and_degeneracy_errors() {
        assert!(matches!(ds1().metric([0.0, 25.0]), Err(GeomError::OutOfDomain { .. })));
        let bad = SurfaceChart::custom("bad", [[-1.0, 1.0], [-1.0, 1.0]], SurfaceSignature::Lorentzian, |_| {
            [[1.0, 1.0], [1.0, 1.0]]
        });
        assert!(matches!(bad.metric([0.0, 0.0]), Err(GeomError::DegenerateMetric { .. })));
        let wrong = SurfaceChart::custom("wrong", [[-1.0, 1.0], [-1.0, 1.0]], SurfaceSignature::Lorentzian, |_| {
            [[1.0, 0.0], [0.0, 1.0]]
        });
        assert!(wrong.validate_at([0.0, 0.0]).is_err());
    }

    #[test]
    fn orthogonal_rotation_is_unit_and_orthogonal() {
        let g = ds1().metric([0.0, 0.8]).unwrap();
        let a = [0.3, 0.1];
        let n = orthogonal_of(&g, a);
        assert!(inner_with(&g, a, n).abs() < 1e-15);
        assert!((inner_with(&g, n, n).abs() - 1.0).abs() < 1e-14);
    }
}
