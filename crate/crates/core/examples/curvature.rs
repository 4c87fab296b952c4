use sasaki_slant::surface::{make_surface, SurfaceKind, SurfaceSignature};
use sasaki_slant::expr::Expression;

fn main() -> sasaki_slant::Result<()> {
    let kinds = [
        SurfaceKind::FlatLorentz,
        SurfaceKind::DeSitter { r: 2.0 },
        SurfaceKind::AntiDeSitter,
        SurfaceKind::HyperbolicPlane,
        SurfaceKind::Sphere,
    ];
    let p = [0.3, 0.4];
    for kind in kinds {
        let c = make_surface(kind)?;
        let g = c.metric(p)?;
        println!("{:<16} g = {:?}  σ = {:+.9}", c.name(), g, c.sigma(p)?);
    }

    // a warped Lorentzian product du² − e^{2u} dv² has σ = 1
    let uv = ["u", "v"];
    let warped = make_surface(SurfaceKind::Custom {
        g11: Expression::parse("1", &uv).unwrap(),
        g12: Expression::constant(0.0, &uv),
        g22: Expression::parse("-exp(2*u)", &uv).unwrap(),
        signature: SurfaceSignature::Lorentzian,
    })?;
    let gam = warped.christoffel(p)?;
    println!("custom: Γ¹₂₂ = {:.6}, Γ²₁₂ = {:.6}, σ = {:.6}", gam[0][1][1], gam[1][0][1], warped.sigma(p)?);
    Ok(())
}
