use std::sync::Arc;

use sasaki_slant::bundle::{
    lift_curve, AngleProfile, AngleTarget, FiberCharacter, FiberField, PrescribedAngle, XiConvention,
};
use sasaki_slant::curve::{BaseCurve, ExprCurve};
use sasaki_slant::frenet::frame3_at;
use sasaki_slant::lorentz::AngleLaw;
use sasaki_slant::slant::tangent_reeb_value;
use sasaki_slant::surface::{make_surface, SurfaceKind};

fn main() -> sasaki_slant::Result<()> {
    let ds = make_surface(SurfaceKind::DeSitter { r: 1.0 })?;
    let gamma: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse("t", "0.3 + 0.2*t").unwrap());
    let range = [0.0, 1.0];
    let fibers = [
        FiberField::tangent_scaled(&ds, gamma.clone(), 0.0)?,
        FiberField::frame_angle(&ds, gamma.clone(), range, FiberCharacter::Normal, AngleProfile::Parallel(0.3))?,
        FiberField::frame_angle(&ds, gamma.clone(), range, FiberCharacter::Tangent, AngleProfile::Linear { a: 0.4, b: -0.2 })?,
        FiberField::prescribed_angle(&ds, gamma.clone(), range, PrescribedAngle {
            law: AngleLaw::CoshSpan,
            theta: AngleTarget::Constant(1.0),
            character: FiberCharacter::Tangent,
            phi0: 0.2,
            branch: 1.0,
        })?,
    ];
    for x in fibers {
        let label = x.label().to_string();
        let l = lift_curve(&ds, gamma.clone(), range, x, 1e-9)?;
        let t = 0.5;
        let lv = tangent_reeb_value(&l, t, XiConvention::TwoXh)?;
        let frame = match frame3_at(&l, t) {
            Ok(f) => format!("κ̃ = {:.6}, ε = ({:+}, {:+}, {:+})", f.kappa, f.eps1, f.eps2, f.eps3),
            Err(e) => e.kind().to_string(),
        };
        println!("{label:<16} ε_X = {:+}, λ = {:.6}, g1(T̃,ξ) = {lv:+.6}, {frame}", l.eps_x(), l.lambda(t)?);
    }
    Ok(())
}
