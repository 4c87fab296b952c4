use std::sync::Arc;

use sasaki_slant::bundle::{lift_curve, AngleProfile, AngleTarget, FiberCharacter, FiberField, PrescribedAngle};
use sasaki_slant::curve::{BaseCurve, ExprCurve};
use sasaki_slant::lorentz::AngleLaw;
use sasaki_slant::slant::theorems::{
    check_prop3, check_prop5, check_thm12, check_thm4, check_thm6_legendre, check_thm8, check_thm8_values, example11_audit, sigma_bar,
};
use sasaki_slant::slant::{classify, SlantOptions};
use sasaki_slant::surface::{make_surface, SurfaceKind};

fn main() -> sasaki_slant::Result<()> {
    let ds = make_surface(SurfaceKind::DeSitter { r: 1.0 })?;
    let opts = SlantOptions::default();

    let latitude: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse("t", "0.5").unwrap());
    let spec = PrescribedAngle {
        law: AngleLaw::CoshSpan,
        theta: AngleTarget::Constant(0.9),
        character: FiberCharacter::Tangent,
        phi0: 0.2,
        branch: 1.0,
    };
    let x = FiberField::prescribed_angle(&ds, latitude.clone(), [0.0, 1.0], spec)?;
    let slant = classify(&lift_curve(&ds, latitude, [0.0, 1.0], x, 1e-9)?, 64, &opts)?;

    let timelike: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse("0.3*t", "t+0.2*t^2").unwrap());
    let x = FiberField::frame_angle(&ds, timelike.clone(), [0.0, 1.0], FiberCharacter::Normal, AngleProfile::Constant(0.0))?;
    let legendre = classify(&lift_curve(&ds, timelike, [0.0, 1.0], x, 1e-9)?, 64, &opts)?;

    for check in [
        check_prop3(&slant, 1e-5),
        check_prop3(&legendre, 1e-5),
        check_thm4(&slant, 1e-5),
        check_prop5(&slant, 1e-5),
        check_thm6_legendre(&legendre, 1e-5)?,
    ] {
        println!("{:<14} holds = {:<5} residual {:.2e}  {:?}", check.name, check.holds, check.residual, check.notes);
    }

    // on a round sphere g1(T̃,ξ) follows the cos law; an arbitrary linear-angle
    // lift need not satisfy either curvature predicate
    let sphere = make_surface(SurfaceKind::Sphere)?;
    let circle: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse("t", "0.4").unwrap());
    let spec = PrescribedAngle {
        law: AngleLaw::CosSpan,
        theta: AngleTarget::Linear { a: 0.5, b: 0.8 },
        character: FiberCharacter::Tangent,
        phi0: 0.3,
        branch: 1.0,
    };
    let x = FiberField::prescribed_angle(&sphere, circle.clone(), [0.0, 1.0], spec)?;
    let linear = classify(&lift_curve(&sphere, circle, [0.0, 1.0], x, 1e-9)?, 64, &opts)?;
    println!("sphere lift: law {}, {:?}", linear.law.name(), linear.tangent_verdict);
    for check in [check_thm8(&linear, Some(0.5), 1e-5), check_thm12(&linear, Some(0.5), 1e-5)] {
        println!("{:<14} holds = {:<5} residual {:.2e}  {:?}", check.name, check.holds, check.residual, check.notes);
    }

    println!("σ̄(0) = {}, σ̄(1) = {}", sigma_bar(0.0)?, sigma_bar(1.0)?);
    match sigma_bar(15.0 / 16.0) {
        Err(e) => println!("σ̄(15/16): {e}"),
        Ok(v) => println!("σ̄(15/16) = {v}"),
    }
    let c = check_thm8_values(0.0, 64.0, 15.0, 1e-12);
    println!("curvature predicate at σ = 0, a = 64, κ = 15: residual {}, {:?}", c.residual, c.witnesses);
    let audit = example11_audit(1.0);
    println!(
        "κ = 15a/64 against σ = 0: {}, against σ = −1: {} (consistent with {}, flagged {})",
        audit.residual_flat, audit.residual_anti_de_sitter, audit.consistent_with, audit.flagged
    );
    Ok(())
}
