//! Predicates of the classification theorems, evaluated on sampled reports.

use serde::Serialize;

use super::{constancy, SlantReport, SlantSample, Verdict};
use crate::error::{GeomError, Result};
use crate::lorentz::{angle_law_value, AngleLaw};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub name: String,
    pub holds: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
    pub oracle_verdict: Option<Verdict>,
}

impl TheoremCheck {
    fn new(name: &str, residual: f64, tolerance: f64) -> Self {
        let residual = if residual.is_finite() { residual } else { f64::MAX };
        Self {
            name: name.to_string(),
            holds: residual < tolerance,
            residual,
            tolerance,
            witnesses: Vec::new(),
            notes: Vec::new(),
            oracle_verdict: None,
        }
    }

    fn witness(mut self, name: &str, value: f64) -> Self {
        if value.is_finite() {
            self.witnesses.push(Witness { name: name.to_string(), value });
        } else {
            self.notes.push(format!("{name} is not finite"));
        }
        self
    }

    fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    /// Marks the check as not holding because a hypothesis fails.
    fn unmet(mut self, text: impl Into<String>) -> Self {
        self.holds = false;
        self.notes.push(text.into());
        self
    }

    fn with_oracle(mut self, report: &SlantReport) -> Self {
        self.oracle_verdict = report.normal_verdict;
        self
    }
}

/// `σ̄ = 64(1−σ)/(15−16σ)`
pub fn sigma_bar(sigma: f64) -> Result<f64> {
    let den = 15.0 - 16.0 * sigma;
    if den.abs() < 1e-12 {
        return Err(GeomError::SingularSigma { sigma });
    }
    Ok(64.0 * (1.0 - sigma) / den + 0.0)
}

/// `(1−σ)(a ± 4κ) − a/16`
pub fn thm8_residual(sigma: f64, a: f64, kappa: f64, plus: bool) -> f64 {
    let k = if plus { 4.0 * kappa } else { -4.0 * kappa };
    (1.0 - sigma) * (a + k) - a / 16.0
}

fn branch_name(plus: bool) -> &'static str {
    if plus {
        "plus"
    } else {
        "minus"
    }
}

fn column(samples: &[SlantSample], name: &str, f: impl Fn(&SlantSample) -> Option<f64>) -> std::result::Result<Vec<f64>, String> {
    samples
        .iter()
        .map(|s| f(s).ok_or_else(|| format!("{name} unavailable at t = {}", s.t)))
        .collect()
}

fn max_abs(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(0.0f64, |m, x| m.max(x.abs()))
}

fn missing(name: &str, err: String) -> TheoremCheck {
    TheoremCheck::new(name, f64::MAX, 0.0).unmet(err)
}

fn is_de_sitter_unit(sigma: &[f64]) -> bool {
    max_abs(sigma.iter().map(|s| s - 1.0)) < 1e-6
}

/// Legendre and slant non-geodesic lifts over the unit de Sitter plane are
/// Ñ-Legendre.
pub fn check_prop3(report: &SlantReport, tol: f64) -> TheoremCheck {
    let name = "prop3";
    let sig = match column(&report.samples, "sigma", |s| s.sigma) {
        Ok(v) => v,
        Err(e) => return missing(name, e),
    };
    let oracle = match column(&report.samples, "g1(N,xi)", |s| s.n_xi_oracle) {
        Ok(v) => v,
        Err(e) => return missing(name, e).with_oracle(report),
    };
    let residual = max_abs(oracle.iter().copied());
    let mut c = TheoremCheck::new(name, residual, tol)
        .with_oracle(report)
        .witness("max_abs_n_xi", residual)
        .witness("max_abs_sigma_minus_1", max_abs(sig.iter().map(|s| s - 1.0)));
    if !is_de_sitter_unit(&sig) {
        c = c.unmet("base curvature is not identically 1");
    }
    match report.tangent_verdict {
        Verdict::Legendre | Verdict::Slant { .. } => c,
        _ => c.unmet("lift is neither Legendre nor slant"),
    }
}

/// Least-squares line `y ≈ c x + k`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let c = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (c, my - c * mx)
}

/// `L(θ) = c∫κ̃ ds` up to the integration constant.
pub fn check_thm4(report: &SlantReport, tol: f64) -> TheoremCheck {
    let name = "thm4";
    let k = match column(&report.samples, "integral of kappa~", |s| s.kappa_tilde_integral) {
        Ok(v) => v,
        Err(e) => return missing(name, e).with_oracle(report),
    };
    let l: Vec<f64> = report.samples.iter().map(|s| s.l).collect();
    let (c, k0) = fit_line(&k, &l);
    let residual = max_abs(k.iter().zip(&l).map(|(x, y)| y - c * x - k0));
    let mut chk = TheoremCheck::new(name, residual, tol)
        .with_oracle(report)
        .witness("c", c)
        .witness("offset", k0)
        .note(format!("law {}", report.law.name()));
    if c.abs() <= tol {
        chk = chk.unmet("fitted constant c vanishes");
    }
    if let Ok(sig) = column(&report.samples, "sigma", |s| s.sigma) {
        if !is_de_sitter_unit(&sig) {
            chk = chk.note("base curvature is not identically 1; the theorem assumes the unit de Sitter plane");
        }
    }
    if !matches!(report.tangent_verdict, Verdict::None) {
        chk = chk.note("lift is slant or Legendre; the theorem concerns non-slant lifts");
    }
    chk
}

/// For slant lifts off de Sitter: `(1−σ)κ/κ̃` nonzero constant ⇔ Ñ-slant.
pub fn check_prop5(report: &SlantReport, tol: f64) -> TheoremCheck {
    let name = "prop5";
    let cols = (|| -> std::result::Result<_, String> {
        Ok((
            column(&report.samples, "sigma", |s| s.sigma)?,
            column(&report.samples, "kappa", |s| s.kappa)?,
            column(&report.samples, "kappa~", |s| s.kappa_tilde)?,
        ))
    })();
    let (sig, kap, kt) = match cols {
        Ok(v) => v,
        Err(e) => return missing(name, e).with_oracle(report),
    };
    let ratio: Vec<f64> = sig.iter().zip(&kap).zip(&kt).map(|((s, k), q)| (1.0 - s) * k / q).collect();
    let (mean, dev) = constancy(&ratio);
    let ratio_const = dev < tol * mean.abs().max(1.0) && mean.abs() > tol;
    let n_slant = matches!(report.normal_verdict, Some(Verdict::NSlant { .. }));
    let residual = if ratio_const == n_slant { 0.0 } else { 1.0 };
    let mut c = TheoremCheck::new(name, residual, tol)
        .with_oracle(report)
        .witness("ratio_mean", mean)
        .witness("ratio_max_deviation", dev)
        .witness("ratio_constant", f64::from(u8::from(ratio_const)))
        .witness("n_slant", f64::from(u8::from(n_slant)));
    if let Some(f) = &report.normal_fit {
        c = c.witness("n_xi_max_deviation", f.max_deviation);
    }
    if is_de_sitter_unit(&sig) {
        c = c.unmet("base is the unit de Sitter plane, excluded by the hypothesis");
    }
    if !matches!(report.tangent_verdict, Verdict::Slant { .. }) {
        c = c.unmet("lift is not slant");
    }
    if max_abs(sig.iter().map(|s| s - sig[0])) < 1e-6 {
        c = c.note("constant curvature base: the condition reduces to kappa/kappa~ constant");
    }
    c
}

fn sigma_bars(sig: &[f64]) -> Result<Vec<f64>> {
    sig.iter().map(|s| sigma_bar(*s)).collect()
}

/// `θ′ = κσ̄`, either sign of the curvature branch.
pub fn check_thm6_legendre(report: &SlantReport, tol: f64) -> Result<TheoremCheck> {
    let name = "thm6-legendre";
    let cols = (|| -> std::result::Result<_, String> {
        Ok((
            column(&report.samples, "sigma", |s| s.sigma)?,
            column(&report.samples, "kappa", |s| s.kappa)?,
            column(&report.samples, "theta'", |s| s.theta_prime)?,
        ))
    })();
    let (sig, kap, tp) = match cols {
        Ok(v) => v,
        Err(e) => return Ok(missing(name, e).with_oracle(report)),
    };
    let sb = sigma_bars(&sig)?;
    let res = |plus: bool| {
        let sg = if plus { 1.0 } else { -1.0 };
        max_abs(tp.iter().zip(&kap).zip(&sb).map(|((d, k), s)| d - sg * k * s))
    };
    let (rp, rm) = (res(true), res(false));
    let plus = rp <= rm;
    Ok(TheoremCheck::new(name, rp.min(rm), tol)
        .with_oracle(report)
        .witness("residual_plus", rp)
        .witness("residual_minus", rm)
        .note(format!("best branch {}", branch_name(plus))))
}

/// `L(θ)′ ± κσ̄L(θ) = cκ̃` with `c` fitted.
pub fn check_thm6_slant(report: &SlantReport, tol: f64) -> Result<TheoremCheck> {
    let name = "thm6-slant";
    let cols = (|| -> std::result::Result<_, String> {
        Ok((
            column(&report.samples, "sigma", |s| s.sigma)?,
            column(&report.samples, "kappa", |s| s.kappa)?,
            column(&report.samples, "kappa~", |s| s.kappa_tilde)?,
            column(&report.samples, "theta", |s| s.theta)?,
            column(&report.samples, "theta'", |s| s.theta_prime)?,
        ))
    })();
    let (sig, kap, kt, th, tp) = match cols {
        Ok(v) => v,
        Err(e) => return Ok(missing(name, e).with_oracle(report)),
    };
    let sb = sigma_bars(&sig)?;
    let law = report.law;
    let fit = |plus: bool| {
        let sg = if plus { 1.0 } else { -1.0 };
        let q: Vec<f64> = (0..th.len())
            .map(|i| (tp[i] * law.derivative(th[i]) + sg * kap[i] * sb[i] * angle_law_value(law, th[i])) / kt[i])
            .collect();
        constancy(&q)
    };
    let (p, m) = (fit(true), fit(false));
    let plus = p.1 <= m.1;
    let (c, dev) = if plus { p } else { m };
    let mut chk = TheoremCheck::new(name, dev, tol)
        .with_oracle(report)
        .witness("c", c)
        .witness("deviation_plus", p.1)
        .witness("deviation_minus", m.1)
        .note(format!("best branch {}", branch_name(plus)));
    if c.abs() <= tol {
        chk = chk.unmet("fitted constant c vanishes");
    }
    Ok(chk)
}

/// Slope of `θ` against arclength.
pub fn fitted_angle_slope(report: &SlantReport) -> Option<f64> {
    let th: Option<Vec<f64>> = report.samples.iter().map(|s| s.theta).collect();
    let s: Vec<f64> = report.samples.iter().map(|s| s.s).collect();
    th.map(|th| fit_line(&s, &th).0)
}

/// `(1−σ)(a ± 4κ) = a/16` at every sample, one branch for the whole curve.
pub fn check_thm8(report: &SlantReport, a: Option<f64>, tol: f64) -> TheoremCheck {
    let name = "thm8";
    let cols = (|| -> std::result::Result<_, String> {
        Ok((column(&report.samples, "sigma", |s| s.sigma)?, column(&report.samples, "kappa", |s| s.kappa)?))
    })();
    let (sig, kap) = match cols {
        Ok(v) => v,
        Err(e) => return missing(name, e).with_oracle(report),
    };
    let (a, source) = match a {
        Some(a) => (a, "configured"),
        None => match fitted_angle_slope(report) {
            Some(a) => (a, "fitted"),
            None => return missing(name, "angle unavailable for the slope fit".into()).with_oracle(report),
        },
    };
    let res = |plus: bool| max_abs(sig.iter().zip(&kap).map(|(s, k)| thm8_residual(*s, a, *k, plus)));
    let (rp, rm) = (res(true), res(false));
    let plus = rp <= rm;
    TheoremCheck::new(name, rp.min(rm), tol)
        .with_oracle(report)
        .witness("a", a)
        .witness("residual_plus", rp)
        .witness("residual_minus", rm)
        .note(format!("slope a {source}; best branch {}", branch_name(plus)))
}

/// The predicate on given numbers, both branches.
pub fn check_thm8_values(sigma: f64, a: f64, kappa: f64, tol: f64) -> TheoremCheck {
    let rp = thm8_residual(sigma, a, kappa, true).abs();
    let rm = thm8_residual(sigma, a, kappa, false).abs();
    let plus = rp <= rm;
    TheoremCheck::new("thm8", rp.min(rm), tol)
        .witness("sigma", sigma)
        .witness("a", a)
        .witness("kappa", kappa)
        .witness("residual_plus", rp)
        .witness("residual_minus", rm)
        .note(format!("best branch {}", branch_name(plus)))
}

/// Denominator and inverse law of the angle formulas, per angle law.
fn inverse_law(law: AngleLaw) -> (&'static str, f64, fn(f64) -> f64) {
    match law {
        AngleLaw::CosSpan => ("arcsin", 1.0, f64::sin),
        AngleLaw::CoshSpan => ("argsinh", -1.0, f64::sinh),
        AngleLaw::SinhMixed => ("argcosh", -1.0, f64::cosh),
    }
}

/// `θ = F⁻¹(cκ̃ / (a ± 16(σ−1)(a ± 4κ)))`, with `F⁻¹ = arcsin` for the
/// spacelike span and the hyperbolic variants otherwise.
pub fn check_thm12(report: &SlantReport, a: Option<f64>, tol: f64) -> TheoremCheck {
    let name = "thm12";
    let cols = (|| -> std::result::Result<_, String> {
        Ok((
            column(&report.samples, "sigma", |s| s.sigma)?,
            column(&report.samples, "kappa", |s| s.kappa)?,
            column(&report.samples, "kappa~", |s| s.kappa_tilde)?,
            column(&report.samples, "theta", |s| s.theta)?,
        ))
    })();
    let (sig, kap, kt, th) = match cols {
        Ok(v) => v,
        Err(e) => return missing(name, e).with_oracle(report),
    };
    let (a, source) = match a {
        Some(a) => (a, "configured"),
        None => match fitted_angle_slope(report) {
            Some(a) => (a, "fitted"),
            None => return missing(name, "angle unavailable for the slope fit".into()).with_oracle(report),
        },
    };
    let (inv, sgn, f) = inverse_law(report.law);
    let fit = |plus: bool| {
        let k4 = if plus { 4.0 } else { -4.0 };
        let q: Vec<f64> = (0..th.len())
            .map(|i| f(th[i]) * (a + sgn * 16.0 * (sig[i] - 1.0) * (a + k4 * kap[i])) / kt[i])
            .collect();
        constancy(&q)
    };
    let (p, m) = (fit(true), fit(false));
    let plus = p.1 <= m.1;
    let (c, dev) = if plus { p } else { m };
    let mut chk = TheoremCheck::new(name, dev, tol)
        .with_oracle(report)
        .witness("a", a)
        .witness("c", c)
        .witness("deviation_plus", p.1)
        .witness("deviation_minus", m.1)
        .note(format!("law {} with {inv}; slope a {source}; best branch {}", report.law.name(), branch_name(plus)));
    if c.abs() <= tol {
        chk = chk.unmet("fitted constant c vanishes");
    }
    chk
}

/// The thm8 predicate at the anti-de Sitter example curvature `κ = 15a/64`,
/// against `σ = 0` and `σ = −1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Example11Audit {
    pub a: f64,
    pub kappa: f64,
    pub residual_flat: f64,
    pub residual_anti_de_sitter: f64,
    /// `κ` solving the predicate for `σ = −1`, one per branch.
    pub kappa_for_anti_de_sitter: [f64; 2],
    pub consistent_with: String,
    pub flagged: bool,
}

pub fn example11_audit(a: f64) -> Example11Audit {
    let kappa = 15.0 * a / 64.0;
    let best = |sigma: f64| {
        thm8_residual(sigma, a, kappa, true)
            .abs()
            .min(thm8_residual(sigma, a, kappa, false).abs())
    };
    let flat = best(0.0);
    let ads = best(-1.0);
    let tol = 1e-12 * a.abs().max(1.0);
    let consistent_with = match (flat < tol, ads < tol) {
        (true, false) => "sigma = 0",
        (false, true) => "sigma = -1",
        (true, true) => "both",
        (false, false) => "neither",
    };
    Example11Audit {
        a,
        kappa,
        residual_flat: flat,
        residual_anti_de_sitter: ads,
        kappa_for_anti_de_sitter: [-31.0 * a / 128.0, 31.0 * a / 128.0],
        consistent_with: consistent_with.to_string(),
        flagged: ads >= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_bar_values() {
        assert_eq!(sigma_bar(1.0).unwrap(), 0.0);
        assert!((sigma_bar(0.0).unwrap() - 64.0 / 15.0).abs() < 1e-12);
        assert!(matches!(sigma_bar(15.0 / 16.0), Err(GeomError::SingularSigma { .. })));
    }

    #[test]
    fn thm8_flat_example() {
        assert_eq!(thm8_residual(0.0, 64.0, 15.0, false), 0.0);
        let c = check_thm8_values(0.0, 64.0, 15.0, 1e-9);
        assert!(c.holds);
    }

    #[test]
    fn example11_is_flagged() {
        let e = example11_audit(2.0);
        assert!(e.residual_flat < 1e-15);
        assert!((e.residual_anti_de_sitter - 2.0 / 16.0).abs() < 1e-12);
        assert!(e.flagged);
        assert_eq!(e.consistent_with, "sigma = 0");
        for k in e.kappa_for_anti_de_sitter {
            let r = thm8_residual(-1.0, 2.0, k, true).abs().min(thm8_residual(-1.0, 2.0, k, false).abs());
            assert!(r < 1e-12);
        }
    }

    #[test]
    fn line_fit() {
        let (c, k) = fit_line(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((c - 2.0).abs() < 1e-15 && (k - 1.0).abs() < 1e-15);
    }
}
