//! Runs a scene (`classify`, `verify <name>`, `sweep <param> <range>`) and
//! renders the result as JSON or CSV.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bundle::XiConvention;
use crate::error::GeomError;
use crate::scene::{self, ConfigError, RunSettings, SceneConfig, SceneError};
use crate::slant::theorems::{
    check_prop3, check_prop5, check_thm12, check_thm4, check_thm6_legendre, check_thm6_slant, check_thm8,
    check_thm8_values, example11_audit, Example11Audit, TheoremCheck,
};
use crate::slant::{classify, Deviation, SlantReport, SlantSample};

pub const SCHEMA: u32 = 1;
pub const CHECK_NAMES: [&str; 7] = ["prop3", "thm4", "prop5", "thm6-legendre", "thm6-slant", "thm8", "thm12"];

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Inclusive `start:stop:step` range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepRange {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        let bad = |m: &str| ConfigError::Invalid { field: "sweep range".into(), message: format!("{s:?}: {m}") };
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad("not a number"));
        let r = SweepRange { start: num(parts[0])?, stop: num(parts[1])?, step: num(parts[2])? };
        if !(r.step > 0.0) || !(r.stop >= r.start) || !r.start.is_finite() || !r.stop.is_finite() {
            return Err(bad("need start <= stop and step > 0"));
        }
        if (r.stop - r.start) / r.step > 1e6 {
            return Err(bad("too many rows"));
        }
        Ok(r)
    }

    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Classify,
    Verify(String),
    Sweep { param: String, range: SweepRange },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Verify(_) => "verify",
            Command::Sweep { .. } => "sweep",
        }
    }
}

/// Command-line values that take precedence over `[run]`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub xi_convention: Option<XiConvention>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<usize>,
}

impl From<&ConfigError> for ErrorRecord {
    fn from(e: &ConfigError) -> Self {
        let (field, offset) = match e {
            ConfigError::Parse { field, offset, .. } => (Some(field.clone()), Some(*offset)),
            ConfigError::Invalid { field, .. } => (Some(field.clone()), None),
            _ => (None, None),
        };
        Self { kind: e.kind().to_string(), message: e.to_string(), t: None, field, offset }
    }
}

impl From<&GeomError> for ErrorRecord {
    fn from(e: &GeomError) -> Self {
        let t = match e {
            GeomError::NullSegment { t }
            | GeomError::NullNormal { t }
            | GeomError::GeodesicLift { t, .. }
            | GeomError::NullFrameVector { t }
            | GeomError::FiberNotUnit { t, .. }
            | GeomError::NullLift { t }
            | GeomError::NullDerivative { t } => Some(*t),
            _ => None,
        };
        Self { kind: e.kind().to_string(), message: e.to_string(), t, field: None, offset: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conventions {
    pub xi_convention: String,
    pub law: Option<String>,
    pub bracket: String,
    pub samples: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub metric: Option<f64>,
    pub holds: Option<bool>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub param: String,
    pub metric: String,
    pub range: SweepRange,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommandEcho {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Status {
    pub ok: bool,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub version: String,
    pub command: CommandEcho,
    pub config_sha256: String,
    pub conventions: Option<Conventions>,
    pub report: Option<SlantReport>,
    pub checks: Vec<TheoremCheck>,
    pub deviations: Vec<Deviation>,
    pub errors: Vec<ErrorRecord>,
    pub example11: Option<Example11Audit>,
    pub sweep: Option<SweepTable>,
    pub status: Status,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Outcome of one classification and optional check on a parsed config.
#[derive(Debug, Clone, Default)]
struct Evaluation {
    report: Option<SlantReport>,
    check: Option<TheoremCheck>,
    example11: Option<Example11Audit>,
    errors: Vec<ErrorRecord>,
    config_error: bool,
}

impl Evaluation {
    fn fail_scene(mut self, e: &SceneError) -> Self {
        match e {
            SceneError::Config(c) => {
                self.config_error = true;
                self.errors.push(c.into());
            }
            SceneError::Geometry(g) => self.errors.push(g.into()),
        }
        self
    }
}

fn arithmetic_thm8(cfg: &SceneConfig) -> Result<Option<(f64, f64, f64)>, ConfigError> {
    let th = &cfg.theorem;
    match (th.sigma, th.a) {
        (Some(sigma), Some(a)) => match cfg.theorem_kappa(a)? {
            Some(kappa) => Ok(Some((sigma, a, kappa))),
            None => Err(ConfigError::Missing("theorem.kappa".into())),
        },
        _ => Ok(None),
    }
}

fn evaluate(cfg: &SceneConfig, settings: &RunSettings, check: Option<&str>) -> Evaluation {
    let mut ev = Evaluation::default();
    let tol = settings.options.tol;
    if let Some(name) = check {
        if !CHECK_NAMES.contains(&name) {
            return ev.fail_scene(&SceneError::Config(ConfigError::Invalid {
                field: "check".into(),
                message: format!("unknown check {name:?} (one of {})", CHECK_NAMES.join(", ")),
            }));
        }
        if name == "thm8" {
            match arithmetic_thm8(cfg) {
                Err(e) => return ev.fail_scene(&e.into()),
                Ok(Some((sigma, a, kappa))) if cfg.curve.is_none() => {
                    ev.check = Some(check_thm8_values(sigma, a, kappa, tol));
                    ev.example11 = Some(example11_audit(a));
                    return ev;
                }
                Ok(_) => {}
            }
        }
    }
    let lifted = match cfg.lift(None, tol) {
        Ok(l) => l,
        Err(e) => return ev.fail_scene(&e),
    };
    let report = match classify(&lifted, settings.samples, &settings.options) {
        Ok(r) => r,
        Err(e) => {
            ev.errors.push((&e).into());
            return ev;
        }
    };
    for e in &report.errors {
        ev.errors.push(ErrorRecord {
            kind: e.kind.clone(),
            message: e.message.clone(),
            t: Some(e.t),
            field: None,
            offset: None,
        });
    }
    if let Some(name) = check {
        let a = cfg.theorem.a;
        let result = match name {
            "prop3" => Ok(check_prop3(&report, tol)),
            "thm4" => Ok(check_thm4(&report, tol)),
            "prop5" => Ok(check_prop5(&report, tol)),
            "thm6-legendre" => check_thm6_legendre(&report, tol),
            "thm6-slant" => check_thm6_slant(&report, tol),
            "thm8" => Ok(check_thm8(&report, a, tol)),
            _ => Ok(check_thm12(&report, a, tol)),
        };
        match result {
            Ok(c) => {
                if name == "thm8" {
                    let a = a.or_else(|| crate::slant::theorems::fitted_angle_slope(&report));
                    ev.example11 = a.map(example11_audit);
                }
                ev.check = Some(c);
            }
            Err(e) => ev.errors.push((&e).into()),
        }
    }
    ev.report = Some(report);
    ev
}

fn conventions(s: &RunSettings) -> Conventions {
    Conventions {
        xi_convention: s.options.convention.name().to_string(),
        law: s.options.law.map(|l| l.name().to_string()),
        bracket: s.options.bracket.name().to_string(),
        samples: s.samples,
        tol: s.options.tol,
    }
}

fn exit_code(config_error: bool, errors: &[ErrorRecord], checks_hold: bool) -> i32 {
    if config_error {
        EXIT_CONFIG
    } else if !errors.is_empty() {
        EXIT_NUMERICAL
    } else if !checks_hold {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}

fn sweep_metric_name(cfg: &SceneConfig) -> String {
    match &cfg.run.check {
        Some(c) => format!("{c} residual"),
        None => "max |g1(N~,xi)|".to_string(),
    }
}

fn sweep_row(table: &toml::Table, param: &str, value: f64, overrides: &Overrides) -> SweepRow {
    let fail = |e: String| SweepRow { value, metric: None, holds: None, error: Some(e) };
    let mut t = table.clone();
    if let Err(e) = scene::set_param(&mut t, param, value) {
        return fail(e.kind().to_string());
    }
    let cfg = match scene::from_table(t) {
        Ok(c) => c,
        Err(e) => return fail(e.kind().to_string()),
    };
    let settings = match cfg.settings(overrides.samples, overrides.tol, overrides.xi_convention) {
        Ok(s) => s,
        Err(e) => return fail(e.kind().to_string()),
    };
    let ev = evaluate(&cfg, &settings, cfg.run.check.as_deref());
    let error = ev.errors.first().map(|e| e.kind.clone());
    let (metric, holds) = match (&ev.check, &ev.report) {
        (Some(c), _) => (Some(c.residual), Some(c.holds)),
        (None, Some(r)) => {
            let m = r
                .samples
                .iter()
                .filter_map(|s| s.n_xi_oracle)
                .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v.abs(), |a| a.max(v.abs()))));
            (m, m.map(|m| m < settings.options.tol))
        }
        _ => (None, None),
    };
    SweepRow { value, metric, holds, error }
}

/// Runs `command` on the raw config bytes.
pub fn run(command: &Command, raw: &[u8], overrides: &Overrides) -> RunReport {
    let mut out = RunReport {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: CommandEcho {
            name: command.name().to_string(),
            check: match command {
                Command::Verify(n) => Some(n.clone()),
                _ => None,
            },
            param: match command {
                Command::Sweep { param, .. } => Some(param.clone()),
                _ => None,
            },
        },
        config_sha256: sha256_hex(raw),
        conventions: None,
        report: None,
        checks: Vec::new(),
        deviations: Vec::new(),
        errors: Vec::new(),
        example11: None,
        sweep: None,
        status: Status { ok: false, exit_code: EXIT_CONFIG },
    };
    let config_fail = |mut out: RunReport, e: &ConfigError| {
        out.errors.push(e.into());
        out.status = Status { ok: false, exit_code: EXIT_CONFIG };
        out
    };
    let text = match std::str::from_utf8(raw) {
        Ok(t) => t,
        Err(_) => return config_fail(out, &ConfigError::Toml("config is not valid UTF-8".into())),
    };
    let table = match scene::parse_table(text) {
        Ok(t) => t,
        Err(e) => return config_fail(out, &e),
    };
    let cfg = match scene::from_table(table.clone()) {
        Ok(c) => c,
        Err(e) => return config_fail(out, &e),
    };
    let settings = match cfg.settings(overrides.samples, overrides.tol, overrides.xi_convention) {
        Ok(s) => s,
        Err(e) => return config_fail(out, &e),
    };
    out.conventions = Some(conventions(&settings));

    match command {
        Command::Classify | Command::Verify(_) => {
            let check = match command {
                Command::Verify(n) => Some(n.as_str()),
                _ => None,
            };
            let ev = evaluate(&cfg, &settings, check);
            if let Some(r) = &ev.report {
                out.deviations = r.deviations.clone();
            }
            let holds = ev.check.as_ref().is_none_or(|c| c.holds);
            let missing_check = check.is_some() && ev.check.is_none();
            out.report = ev.report;
            out.checks = ev.check.into_iter().collect();
            out.example11 = ev.example11;
            out.errors = ev.errors;
            let code = exit_code(ev.config_error, &out.errors, holds && !missing_check);
            out.status = Status { ok: code == EXIT_OK, exit_code: code };
        }
        Command::Sweep { param, range } => {
            // Resolve the parameter once so that a bad name is a config error.
            let mut probe = table.clone();
            let resolved = match scene::set_param(&mut probe, param, range.start) {
                Ok(r) => r,
                Err(e) => return config_fail(out, &e),
            };
            let rows: Vec<SweepRow> =
                range.values().par_iter().map(|&v| sweep_row(&table, &resolved, v, overrides)).collect();
            let failed = rows.iter().any(|r| r.error.is_some());
            let holds = rows.iter().all(|r| r.holds == Some(true));
            let code = if failed {
                EXIT_NUMERICAL
            } else if holds {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            };
            out.sweep = Some(SweepTable { param: resolved, metric: sweep_metric_name(&cfg), range: *range, rows });
            out.status = Status { ok: code == EXIT_OK, exit_code: code };
        }
    }
    out
}

fn num(x: Option<f64>) -> String {
    x.filter(|v| v.is_finite()).map(|v| format!("{v:?}")).unwrap_or_default()
}

const SAMPLE_COLUMNS: [&str; 21] = [
    "t",
    "s",
    "lambda",
    "r",
    "L",
    "theta",
    "theta_prime",
    "sigma",
    "kappa",
    "eps1",
    "eps2",
    "kappa_tilde",
    "kappa_tilde_integral",
    "n_xi_oracle",
    "n_xi_closed",
    "n_xi_reduced",
    "beta",
    "sign_beta",
    "fiber_constraint",
    "orthogonality",
    "error",
];

fn sample_row(s: &SlantSample) -> Vec<String> {
    let mut row: Vec<String> = [
        Some(s.t),
        Some(s.s),
        Some(s.lambda),
        Some(s.r),
        Some(s.l),
        s.theta,
        s.theta_prime,
        s.sigma,
        s.kappa,
        s.eps1,
        s.eps2,
        s.kappa_tilde,
        s.kappa_tilde_integral,
        s.n_xi_oracle,
        s.n_xi_closed,
        s.n_xi_reduced,
        s.beta,
        s.sign_beta,
        s.fiber_constraint,
        s.orthogonality,
    ]
    .into_iter()
    .map(num)
    .collect();
    row.push(s.errors.iter().map(|e| e.kind.as_str()).collect::<Vec<_>>().join(";"));
    row
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Classify: one row per sample. Verify: one row per check. Sweep: one
    /// row per parameter value. Reports that stopped early list their errors.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut line = |cells: Vec<String>| {
            out.push_str(&cells.join(","));
            out.push('\n');
        };
        if let Some(sw) = &self.sweep {
            line(vec![sw.param.clone(), "metric".into(), "holds".into(), "error".into()]);
            for r in &sw.rows {
                line(vec![
                    format!("{:?}", r.value),
                    num(r.metric),
                    r.holds.map(|h| h.to_string()).unwrap_or_default(),
                    r.error.clone().unwrap_or_default(),
                ]);
            }
        } else if self.command.name == "verify" && !self.checks.is_empty() {
            line(vec!["name".into(), "holds".into(), "residual".into(), "tolerance".into()]);
            for c in &self.checks {
                line(vec![c.name.clone(), c.holds.to_string(), num(Some(c.residual)), num(Some(c.tolerance))]);
            }
        } else if let Some(r) = &self.report {
            line(SAMPLE_COLUMNS.iter().map(|c| c.to_string()).collect());
            for s in &r.samples {
                line(sample_row(s));
            }
        } else {
            line(vec!["kind".into(), "t".into(), "message".into()]);
            for e in &self.errors {
                line(vec![e.kind.clone(), num(e.t), csv_quote(&e.message)]);
            }
        }
        out
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const THM8_FLAT: &str = r#"
[run]
check = "thm8"

[theorem]
sigma = 0.0
a = 1.0
kappa = "15*a/64"
"#;

    #[test]
    fn sweep_range_is_inclusive() {
        let r = SweepRange::parse("0.5:2.0:0.25").unwrap();
        assert_eq!(r.values().len(), 7);
        assert!(SweepRange::parse("1:0:1").is_err());
    }

    #[test]
    fn thm8_sweep_has_zero_residuals() {
        let cmd = Command::Sweep { param: "a".into(), range: SweepRange::parse("0.5:2.0:0.25").unwrap() };
        let rep = run(&cmd, THM8_FLAT.as_bytes(), &Overrides::default());
        assert_eq!(rep.exit_code(), 0, "{}", rep.to_json());
        let csv = rep.to_csv();
        assert_eq!(csv.lines().count(), 8);
        assert!(csv.starts_with("theorem.a,metric,holds,error\n"));
        for row in &rep.sweep.unwrap().rows {
            assert!(row.metric.unwrap() < 1e-9);
        }
    }

    #[test]
    fn example11_is_flagged() {
        let rep = run(&Command::Verify("thm8".into()), THM8_FLAT.as_bytes(), &Overrides::default());
        let ex = rep.example11.unwrap();
        assert!(ex.flagged);
        assert_eq!(ex.consistent_with, "sigma = 0");
    }

    #[test]
    fn bad_expression_is_a_config_error() {
        let bad = THM8_FLAT.replace("15*a/64", "cosh(");
        let rep = run(&Command::Verify("thm8".into()), bad.as_bytes(), &Overrides::default());
        assert_eq!(rep.exit_code(), EXIT_CONFIG);
        assert_eq!(rep.errors[0].kind, "ParseError");
        assert_eq!(rep.errors[0].offset, Some(5));
    }
}
