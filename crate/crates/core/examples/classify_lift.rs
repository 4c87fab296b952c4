use std::sync::Arc;

use sasaki_slant::bundle::{lift_curve, AngleTarget, FiberCharacter, FiberField, PrescribedAngle};
use sasaki_slant::curve::{BaseCurve, ExprCurve};
use sasaki_slant::lorentz::AngleLaw;
use sasaki_slant::slant::{classify, SlantOptions};
use sasaki_slant::surface::{make_surface, SurfaceKind};

fn main() -> sasaki_slant::Result<()> {
    let ds = make_surface(SurfaceKind::DeSitter { r: 1.0 })?;
    let gamma: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse("t", "0.5").unwrap());
    let range = [0.0, 1.0];
    for theta in [AngleTarget::Constant(1.2), AngleTarget::Linear { a: 0.8, b: 1.0 }] {
        let spec = PrescribedAngle {
            law: AngleLaw::CoshSpan,
            theta,
            character: FiberCharacter::Tangent,
            phi0: 0.2,
            branch: 1.0,
        };
        let x = FiberField::prescribed_angle(&ds, gamma.clone(), range, spec)?;
        let l = lift_curve(&ds, gamma.clone(), range, x, 1e-9)?;
        let rep = classify(&l, 128, &SlantOptions::default())?;
        let mid = &rep.samples[64];
        println!("{theta:?}: law {}, {:?}, {:?}", rep.law.name(), rep.tangent_verdict, rep.normal_verdict);
        println!(
            "  at t = {:.3}: θ = {:.6}, θ′ = {:.6}, oracle g1(Ñ,ξ) = {:+.3e}, closed form {:+.3e}",
            mid.t,
            mid.theta.unwrap_or(f64::NAN),
            mid.theta_prime.unwrap_or(f64::NAN),
            mid.n_xi_oracle.unwrap_or(f64::NAN),
            mid.n_xi_closed.unwrap_or(f64::NAN)
        );
        for d in &rep.deviations {
            println!("  deviation {}: max rel {:.3} at t = {:.3}", d.kind, d.max_rel, d.at_t);
        }
    }
    Ok(())
}
