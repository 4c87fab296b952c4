//! Flat Lorentzian linear algebra in two and three dimensions.
//!
//! Inner products are diagonal quadratic forms `Σ sᵢ xᵢ yᵢ` with `sᵢ = ±1`.
//! Causal characters are decided with a symmetric tolerance band around
//! zero, so vectors produced by finite differences classify stably.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Default half-width of the null band used by [`causal_character`].
pub const NULL_TOL: f64 = 1e-9;

/// Diagonal signature of a flat metric, e.g. `(+,+,-)` for Minkowski 3-space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricSignature {
    signs: Vec<i8>,
}

impl MetricSignature {
    pub fn new(signs: &[i8]) -> Result<Self> {
        if !(2..=3).contains(&signs.len()) {
            return Err(GeomError::InvalidParams(format!(
                "signature must have 2 or 3 entries, got {}",
                signs.len()
            )));
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(GeomError::InvalidParams("signature entries must be +1 or -1".into()));
        }
        Ok(Self { signs: signs.to_vec() })
    }

    /// `(+,+,-)`, the ambient Minkowski 3-space.
    pub fn minkowski3() -> Self {
        Self { signs: vec![1, 1, -1] }
    }

    /// `(+,-)`, the flat Lorentz plane.
    pub fn lorentz_plane() -> Self {
        Self { signs: vec![1, -1] }
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Null,
}

impl CausalCharacter {
    /// Classify a squared norm `g(x,x)` against the null band `tol`.
    pub fn of_norm_sq(norm_sq: f64, tol: f64) -> Self {
        if norm_sq > tol {
            CausalCharacter::Spacelike
        } else if norm_sq < -tol {
            CausalCharacter::Timelike
        } else {
            CausalCharacter::Null
        }
    }

    /// `+1` for spacelike, `-1` for timelike, `0` for null.
    pub fn sign(self) -> f64 {
        match self {
            CausalCharacter::Spacelike => 1.0,
            CausalCharacter::Timelike => -1.0,
            CausalCharacter::Null => 0.0,
        }
    }
}

/// Which of the three Lorentzian angle functions relates `g(a,b)` to an angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AngleLaw {
    /// Two spacelike vectors spanning a spacelike plane: `cos θ`.
    CosSpan,
    /// Two vectors spanning a timelike plane with equal characters: `cosh θ`.
    CoshSpan,
    /// Vectors of different causal character: `sinh θ`.
    SinhMixed,
}

impl AngleLaw {
    pub fn name(self) -> &'static str {
        match self {
            AngleLaw::CosSpan => "cos",
            AngleLaw::CoshSpan => "cosh",
            AngleLaw::SinhMixed => "sinh",
        }
    }

    /// Derivative of the law with respect to the angle.
    pub fn derivative(self, theta: f64) -> f64 {
        match self {
            AngleLaw::CosSpan => -theta.sin(),
            AngleLaw::CoshSpan => theta.sinh(),
            AngleLaw::SinhMixed => theta.cosh(),
        }
    }

    /// Pick the law for two unit vectors with squared norms `ea`, `eb`
    /// (each ±1) and inner product `value`.
    pub fn select(ea: f64, eb: f64, value: f64) -> Self {
        if ea * eb < 0.0 {
            return AngleLaw::SinhMixed;
        }
        // Gram determinant of the span decides definite vs indefinite planes.
        let gram = ea * eb - value * value;
        if gram > 0.0 {
            AngleLaw::CosSpan
        } else {
            AngleLaw::CoshSpan
        }
    }
}

fn check_dim(sig: &MetricSignature, got: usize) -> Result<()> {
    if sig.dim() != got {
        return Err(GeomError::DimensionMismatch { expected: sig.dim(), got });
    }
    Ok(())
}

/// `Σ sᵢ xᵢ yᵢ`.
pub fn minkowski_inner(sig: &MetricSignature, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dim(sig, x.len())?;
    check_dim(sig, y.len())?;
    Ok(sig
        .signs
        .iter()
        .zip(x.iter().zip(y))
        .map(|(s, (a, b))| f64::from(*s) * a * b)
        .sum())
}

pub fn causal_character(sig: &MetricSignature, x: &[f64], tol: f64) -> Result<CausalCharacter> {
    if tol <= 0.0 {
        return Err(GeomError::InvalidParams("null tolerance must be positive".into()));
    }
    Ok(CausalCharacter::of_norm_sq(minkowski_inner(sig, x, x)?, tol))
}

/// Minkowski wedge product in `(+,+,-)` space: the cofactor expansion of the
/// array with frame row `(i, j, -k)`.
pub fn wedge3(x: [f64; 3], y: [f64; 3]) -> [f64; 3] {
    [
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        -(x[0] * y[1] - x[1] * y[0]),
    ]
}

/// `√|g(x,x)|` for non-null `x`.
pub fn lorentz_norm(sig: &MetricSignature, x: &[f64]) -> Result<f64> {
    lorentz_norm_tol(sig, x, NULL_TOL)
}

pub fn lorentz_norm_tol(sig: &MetricSignature, x: &[f64], tol: f64) -> Result<f64> {
    let q = minkowski_inner(sig, x, x)?;
    if q.abs() <= tol {
        return Err(GeomError::NullVector { norm_sq: q });
    }
    Ok(q.abs().sqrt())
}

pub fn angle_law_value(law: AngleLaw, theta: f64) -> f64 {
    match law {
        AngleLaw::CosSpan => theta.cos(),
        AngleLaw::CoshSpan => theta.cosh(),
        AngleLaw::SinhMixed => theta.sinh(),
    }
}

/// Inverse of [`angle_law_value`]: principal branch `[0, π]` for `cos`,
/// `θ ≥ 0` for `cosh`.
pub fn recover_angle(law: AngleLaw, value: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    match law {
        AngleLaw::CosSpan => {
            if value.abs() > 1.0 + SLACK || !value.is_finite() {
                return Err(GeomError::OutOfRange { law: law.name(), value });
            }
            Ok(value.clamp(-1.0, 1.0).acos())
        }
        AngleLaw::CoshSpan => {
            if value < 1.0 - SLACK || !value.is_finite() {
                return Err(GeomError::OutOfRange { law: law.name(), value });
            }
            Ok(value.max(1.0).acosh())
        }
        AngleLaw::SinhMixed => {
            if !value.is_finite() {
                return Err(GeomError::OutOfRange { law: law.name(), value });
            }
            Ok(value.asinh())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_products() {
        let m3 = MetricSignature::minkowski3();
        assert_eq!(minkowski_inner(&m3, &[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), -4.0);
        assert_eq!(minkowski_inner(&m3, &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]).unwrap(), 0.0);
        let m2 = MetricSignature::lorentz_plane();
        assert_eq!(minkowski_inner(&m2, &[1.0, 1.0], &[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(
            minkowski_inner(&m2, &[1.0, 1.0, 0.0], &[1.0, 1.0]),
            Err(GeomError::DimensionMismatch { expected: 2, got: 3 })
        );
    }

    #[test]
    fn signature_validation() {
        assert!(MetricSignature::new(&[1, 0]).is_err());
        assert!(MetricSignature::new(&[1]).is_err());
        assert!(MetricSignature::new(&[1, 1, 1, -1]).is_err());
        assert!(MetricSignature::new(&[-1, 1]).is_ok());
    }

    #[test]
    fn characters() {
        let m3 = MetricSignature::minkowski3();
        let c = |x: [f64; 3]| causal_character(&m3, &x, 1e-12).unwrap();
        assert_eq!(c([1.0, 0.0, 0.0]), CausalCharacter::Spacelike);
        assert_eq!(c([0.0, 0.0, 1.0]), CausalCharacter::Timelike);
        assert_eq!(c([1.0, 0.0, 1.0]), CausalCharacter::Null);
        assert!(causal_character(&m3, &[1.0, 0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn wedge_of_basis_vectors() {
        let e1 = [1.0, 0.0, 0.0];
        let e2 = [0.0, 1.0, 0.0];
        let e3 = [0.0, 0.0, 1.0];
        assert_eq!(wedge3(e1, e2), [0.0, 0.0, -1.0]);
        assert_eq!(wedge3(e1, e3), [0.0, -1.0, 0.0]);
        assert_eq!(wedge3(e1, e1), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn norms() {
        let m3 = MetricSignature::minkowski3();
        assert_eq!(lorentz_norm(&m3, &[0.0, 0.0, 2.0]).unwrap(), 2.0);
        assert_eq!(lorentz_norm(&MetricSignature::lorentz_plane(), &[3.0, 0.0]).unwrap(), 3.0);
        assert!(matches!(
            lorentz_norm(&m3, &[1.0, 0.0, 1.0]),
            Err(GeomError::NullVector { .. })
        ));
    }

    #[test]
    fn angle_laws() {
        assert_eq!(angle_law_value(AngleLaw::CosSpan, 0.0), 1.0);
        assert_eq!(angle_law_value(AngleLaw::SinhMixed, 0.0), 0.0);
        assert!(matches!(
            recover_angle(AngleLaw::CoshSpan, 0.5),
            Err(GeomError::OutOfRange { .. })
        ));
        assert!(recover_angle(AngleLaw::CosSpan, 1.5).is_err());
        for &(law, v) in &[
            (AngleLaw::CosSpan, -0.3),
            (AngleLaw::CoshSpan, 2.5),
            (AngleLaw::SinhMixed, -4.0),
        ] {
            let th = recover_angle(law, v).unwrap();
            assert!((angle_law_value(law, th) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn law_selection_follows_causal_configuration() {
        assert_eq!(AngleLaw::select(1.0, 1.0, 0.5), AngleLaw::CosSpan);
        assert_eq!(AngleLaw::select(1.0, 1.0, 1.5), AngleLaw::CoshSpan);
        assert_eq!(AngleLaw::select(1.0, -1.0, 0.2), AngleLaw::SinhMixed);
        assert_eq!(AngleLaw::select(-1.0, -1.0, 1.2), AngleLaw::CoshSpan);
    }
}
