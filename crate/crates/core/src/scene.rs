//! Scene files: a surface, a base curve, a fiber construction and run
//! settings, in TOML.

use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::bundle::{
    lift_curve, AngleProfile, AngleTarget, FiberCharacter, FiberField, LiftedCurve, PrescribedAngle, XiConvention,
};
use crate::curve::{reparametrize_to_speed, BaseCurve, ExprCurve};
use crate::error::GeomError;
use crate::expr::{ExprError, Expression};
use crate::lorentz::AngleLaw;
use crate::slant::{Bracket, SlantOptions};
use crate::surface::{make_surface, SurfaceChart, SurfaceKind, SurfaceSignature};

/// Problems with the scene file itself, as opposed to its geometry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("TOML error: {0}")]
    Toml(String),
    #[error("ParseError in {field} at offset {offset}: {message}")]
    Parse { field: String, offset: usize, message: String },
    #[error("invalid value for {field}: {message}")]
    Invalid { field: String, message: String },
    #[error("missing {0}")]
    Missing(String),
}

impl ConfigError {
    pub fn kind(&self) -> &'static str {
        match self {
            ConfigError::Toml(_) => "TomlError",
            ConfigError::Parse { .. } => "ParseError",
            ConfigError::Invalid { .. } => "InvalidConfig",
            ConfigError::Missing(_) => "MissingKey",
        }
    }

    fn invalid(field: &str, message: impl Into<String>) -> Self {
        ConfigError::Invalid { field: field.to_string(), message: message.into() }
    }

    fn from_expr(field: &str, e: ExprError) -> Self {
        match e {
            ExprError::UnknownFunction { .. } | ExprError::UnknownIdentifier { .. } | ExprError::Parse { .. } => {
                ConfigError::Parse { field: field.to_string(), offset: e.offset(), message: e.to_string() }
            }
        }
    }
}

/// A number or an expression string.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum NumOrExpr {
    Num(f64),
    Expr(String),
}

impl NumOrExpr {
    fn expression(&self, field: &str, vars: &[&str]) -> Result<Expression, ConfigError> {
        match self {
            NumOrExpr::Num(x) => Ok(Expression::constant(*x, vars)),
            NumOrExpr::Expr(s) => Expression::parse(s, vars).map_err(|e| ConfigError::from_expr(field, e)),
        }
    }

    fn number(&self, field: &str) -> Result<f64, ConfigError> {
        let e = self.expression(field, &[])?;
        Ok(e.eval(&[]))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSection {
    pub kind: String,
    pub r: Option<f64>,
    pub g11: Option<NumOrExpr>,
    pub g12: Option<NumOrExpr>,
    pub g22: Option<NumOrExpr>,
    pub signature: Option<String>,
    pub domain_u: Option<[f64; 2]>,
    pub domain_v: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub u: NumOrExpr,
    pub v: NumOrExpr,
    pub t: [f64; 2],
    pub speed: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSection {
    pub kind: String,
    pub angle: Option<NumOrExpr>,
    pub theta: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub character: Option<String>,
    pub law: Option<String>,
    pub branch: Option<f64>,
    pub x1: Option<NumOrExpr>,
    pub x2: Option<NumOrExpr>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub xi_convention: Option<String>,
    pub law: Option<String>,
    pub bracket: Option<String>,
    pub check: Option<String>,
    pub flip_sign_beta: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremSection {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub sigma: Option<f64>,
    /// Number or expression in `a`.
    pub kappa: Option<NumOrExpr>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub surface: Option<SurfaceSection>,
    pub curve: Option<CurveSection>,
    pub fiber: Option<FiberSection>,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub theorem: TheoremSection,
}

pub fn parse_table(text: &str) -> Result<toml::Table, ConfigError> {
    text.parse::<toml::Table>().map_err(|e| ConfigError::Toml(e.to_string().trim().to_string()))
}

pub fn from_table(table: toml::Table) -> Result<SceneConfig, ConfigError> {
    SceneConfig::deserialize(toml::Value::Table(table)).map_err(|e| ConfigError::Toml(e.to_string().trim().to_string()))
}

pub fn parse_config(text: &str) -> Result<SceneConfig, ConfigError> {
    from_table(parse_table(text)?)
}

/// Sets `section.key` (or a bare key present in exactly one section).
pub fn set_param(table: &mut toml::Table, param: &str, value: f64) -> Result<String, ConfigError> {
    let (section, key) = match param.split_once('.') {
        Some((s, k)) => (s.to_string(), k.to_string()),
        None => {
            let hits: Vec<String> = table
                .iter()
                .filter(|(_, v)| v.as_table().is_some_and(|t| t.contains_key(param)))
                .map(|(k, _)| k.clone())
                .collect();
            match hits.len() {
                1 => (hits[0].clone(), param.to_string()),
                0 => return Err(ConfigError::Missing(format!("sweep parameter {param}"))),
                _ => {
                    return Err(ConfigError::invalid(param, format!("ambiguous, found in sections {}", hits.join(", "))))
                }
            }
        }
    };
    let sec = table
        .entry(section.clone())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()))
        .as_table_mut()
        .ok_or_else(|| ConfigError::invalid(&section, "not a table"))?;
    sec.insert(key.clone(), toml::Value::Float(value));
    Ok(format!("{section}.{key}"))
}

pub fn parse_law(field: &str, s: &str) -> Result<AngleLaw, ConfigError> {
    match s {
        "cos" | "cos-span" => Ok(AngleLaw::CosSpan),
        "cosh" | "cosh-span" => Ok(AngleLaw::CoshSpan),
        "sinh" | "sinh-mixed" => Ok(AngleLaw::SinhMixed),
        _ => Err(ConfigError::invalid(field, format!("unknown angle law {s:?} (cos, cosh, sinh)"))),
    }
}

fn parse_character(s: Option<&str>) -> Result<FiberCharacter, ConfigError> {
    match s.unwrap_or("tangent") {
        "tangent" => Ok(FiberCharacter::Tangent),
        "normal" => Ok(FiberCharacter::Normal),
        other => Err(ConfigError::invalid("fiber.character", format!("unknown character {other:?} (tangent, normal)"))),
    }
}

/// Settings after merging the `[run]` section with command-line overrides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub samples: usize,
    pub options: SlantOptions,
}

pub const DEFAULT_SAMPLES: usize = 512;
pub const DEFAULT_TOL: f64 = 1e-6;

impl SceneConfig {
    pub fn settings(
        &self,
        samples: Option<usize>,
        tol: Option<f64>,
        convention: Option<XiConvention>,
    ) -> Result<RunSettings, ConfigError> {
        let samples = samples.or(self.run.samples).unwrap_or(DEFAULT_SAMPLES);
        if samples < 16 {
            return Err(ConfigError::invalid("run.samples", "at least 16 samples are required"));
        }
        let tol = tol.or(self.run.tol).unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0) {
            return Err(ConfigError::invalid("run.tol", "tolerance must be positive"));
        }
        let convention = match (convention, &self.run.xi_convention) {
            (Some(c), _) => c,
            (None, Some(s)) => XiConvention::parse(s)
                .ok_or_else(|| ConfigError::invalid("run.xi_convention", format!("unknown convention {s:?}")))?,
            (None, None) => XiConvention::TwoXh,
        };
        let law = self.run.law.as_deref().map(|s| parse_law("run.law", s)).transpose()?;
        let bracket = match self.run.bracket.as_deref() {
            None | Some("l-over-r") => Bracket::LOverR,
            Some("theta-l") => Bracket::ThetaL,
            Some(o) => return Err(ConfigError::invalid("run.bracket", format!("unknown bracket {o:?}"))),
        };
        Ok(RunSettings {
            samples,
            options: SlantOptions {
                convention,
                law,
                bracket,
                tol,
                flip_sign_beta: self.run.flip_sign_beta.unwrap_or(false),
            },
        })
    }

    pub fn chart(&self) -> Result<SurfaceChart, SceneError> {
        let s = self.surface.as_ref().ok_or_else(|| ConfigError::Missing("[surface] section".into()))?;
        let kind = match s.kind.as_str() {
            "flat" | "flat-lorentz" => SurfaceKind::FlatLorentz,
            "de-sitter" => SurfaceKind::DeSitter { r: s.r.unwrap_or(1.0) },
            "anti-de-sitter" => SurfaceKind::AntiDeSitter,
            "hyperbolic-plane" => SurfaceKind::HyperbolicPlane,
            "sphere" => SurfaceKind::Sphere,
            "custom" => {
                let uv = ["u", "v"];
                let get = |name: &str, v: &Option<NumOrExpr>| -> Result<Expression, ConfigError> {
                    let field = format!("surface.{name}");
                    v.as_ref().ok_or_else(|| ConfigError::Missing(field.clone()))?.expression(&field, &uv)
                };
                let signature = match s.signature.as_deref().unwrap_or("lorentzian") {
                    "lorentzian" => SurfaceSignature::Lorentzian,
                    "riemannian" => SurfaceSignature::Riemannian,
                    o => return Err(ConfigError::invalid("surface.signature", format!("unknown signature {o:?}")).into()),
                };
                SurfaceKind::Custom {
                    g11: get("g11", &s.g11)?,
                    g12: match &s.g12 {
                        Some(v) => v.expression("surface.g12", &uv)?,
                        None => Expression::constant(0.0, &uv),
                    },
                    g22: get("g22", &s.g22)?,
                    signature,
                }
            }
            o => return Err(ConfigError::invalid("surface.kind", format!("unknown surface {o:?}")).into()),
        };
        let mut chart = make_surface(kind)?;
        if s.domain_u.is_some() || s.domain_v.is_some() {
            let d = chart.domain();
            chart = chart.with_domain([s.domain_u.unwrap_or(d[0]), s.domain_v.unwrap_or(d[1])]);
        }
        Ok(chart)
    }

    /// Base curve and its parameter range, reparametrized to `[curve] speed`
    /// (or to `default_speed` when given and the key is absent).
    pub fn curve(
        &self,
        chart: &SurfaceChart,
        default_speed: Option<f64>,
    ) -> Result<(Arc<dyn BaseCurve>, [f64; 2]), SceneError> {
        let c = self.curve.as_ref().ok_or_else(|| ConfigError::Missing("[curve] section".into()))?;
        let t = ["t"];
        let u = c.u.expression("curve.u", &t)?;
        let v = c.v.expression("curve.v", &t)?;
        if !(c.t[1] > c.t[0]) {
            return Err(ConfigError::invalid("curve.t", "range must be increasing").into());
        }
        let base: Arc<dyn BaseCurve> = Arc::new(ExprCurve::new(u, v)?);
        match c.speed.or(default_speed) {
            Some(sp) => {
                let r = reparametrize_to_speed(chart, base, c.t, sp, 1e-9)?;
                let range = r.range();
                Ok((Arc::new(r), range))
            }
            None => Ok((base, c.t)),
        }
    }

    pub fn fiber(
        &self,
        chart: &SurfaceChart,
        gamma: Arc<dyn BaseCurve>,
        range: [f64; 2],
        tol: f64,
    ) -> Result<FiberField, SceneError> {
        let f = self.fiber.as_ref().ok_or_else(|| ConfigError::Missing("[fiber] section".into()))?;
        let character = parse_character(f.character.as_deref())?;
        let angle0 = match &f.angle {
            Some(a) => a.number("fiber.angle")?,
            None => 0.0,
        };
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| ConfigError::Missing(format!("fiber.{name}")));
        let law = || -> Result<AngleLaw, ConfigError> {
            match &f.law {
                Some(s) => parse_law("fiber.law", s),
                None => Ok(AngleLaw::CoshSpan),
            }
        };
        let fiber = match f.kind.as_str() {
            "tangent-scaled" => FiberField::tangent_scaled(chart, gamma, range[0])?,
            "parallel" => FiberField::frame_angle(chart, gamma, range, character, AngleProfile::Parallel(angle0))?,
            "frame-angle" => {
                let profile = match &f.angle {
                    Some(NumOrExpr::Expr(s)) => AngleProfile::Expr(
                        Expression::parse(s, &["t"]).map_err(|e| ConfigError::from_expr("fiber.angle", e))?,
                    ),
                    _ => AngleProfile::Constant(angle0),
                };
                FiberField::frame_angle(chart, gamma, range, character, profile)?
            }
            "constant-angle" | "linear-angle" => {
                let theta = if f.kind == "constant-angle" {
                    AngleTarget::Constant(need(f.theta, "theta")?)
                } else {
                    AngleTarget::Linear { a: need(f.a, "a")?, b: need(f.b, "b")? }
                };
                let spec = PrescribedAngle { law: law()?, theta, character, phi0: angle0, branch: f.branch.unwrap_or(1.0) };
                FiberField::prescribed_angle(chart, gamma, range, spec)?
            }
            "components" => {
                let t = ["t"];
                let x1 = f.x1.as_ref().ok_or_else(|| ConfigError::Missing("fiber.x1".into()))?;
                let x2 = f.x2.as_ref().ok_or_else(|| ConfigError::Missing("fiber.x2".into()))?;
                FiberField::components(
                    chart,
                    gamma,
                    range,
                    x1.expression("fiber.x1", &t)?,
                    x2.expression("fiber.x2", &t)?,
                    tol.max(1e-8),
                )?
            }
            o => return Err(ConfigError::invalid("fiber.kind", format!("unknown fiber {o:?}")).into()),
        };
        Ok(fiber)
    }

    pub fn lift(&self, default_speed: Option<f64>, tol: f64) -> Result<LiftedCurve, SceneError> {
        let chart = self.chart()?;
        let (gamma, range) = self.curve(&chart, default_speed)?;
        let fiber = self.fiber(&chart, gamma.clone(), range, tol)?;
        Ok(lift_curve(&chart, gamma, range, fiber, 1e-9)?)
    }

    /// `[theorem] kappa` evaluated at `a`.
    pub fn theorem_kappa(&self, a: f64) -> Result<Option<f64>, ConfigError> {
        match &self.theorem.kappa {
            None => Ok(None),
            Some(k) => {
                let e = k.expression("theorem.kappa", &["a"])?;
                Ok(Some(e.eval(&[a])))
            }
        }
    }
}

/// Failure while turning a config into geometry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

#[cfg(test)]
mod tests {
    use super::*;

    const DS: &str = r#"
[surface]
kind = "de-sitter"
r = 1.0

[curve]
u = "t"
v = "0.5"
t = [0.0, 1.0]

[fiber]
kind = "constant-angle"
theta = 1.2
angle = 0.2
"#;

    #[test]
    fn parses_and_lifts() {
        let c = parse_config(DS).unwrap();
        let l = c.lift(None, 1e-6).unwrap();
        assert_eq!(l.eps_x(), 1.0);
    }

    #[test]
    fn expression_errors_carry_offsets() {
        let bad = DS.replace("\"0.5\"", "\"cosh(\"");
        let c = parse_config(&bad).unwrap();
        match c.lift(None, 1e-6) {
            Err(SceneError::Config(ConfigError::Parse { field, offset, .. })) => {
                assert_eq!(field, "curve.v");
                assert_eq!(offset, 5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bare_sweep_key() {
        let mut t = parse_table("[theorem]\na = 1.0\n[run]\nsamples = 32\n").unwrap();
        assert_eq!(set_param(&mut t, "a", 2.0).unwrap(), "theorem.a");
        assert_eq!(from_table(t).unwrap().theorem.a, Some(2.0));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(parse_config("[run]\nsampels = 3\n"), Err(ConfigError::Toml(_))));
    }
}
