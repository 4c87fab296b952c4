use sasaki_slant::curve::ExprCurve;
use sasaki_slant::frenet::{frenet2_at, frenet2_residuals, frenet3_at, AmbientCurve};
use sasaki_slant::surface::{make_surface, SurfaceKind};

fn main() -> sasaki_slant::Result<()> {
    let flat = make_surface(SurfaceKind::FlatLorentz)?;
    let ds = make_surface(SurfaceKind::DeSitter { r: 1.0 })?;
    let circle = ExprCurve::parse("cosh(t)", "sinh(t)").unwrap();
    let latitude = ExprCurve::parse("t", "0.5").unwrap();

    for (name, chart, curve) in [("pseudo-circle", &flat, &circle), ("de Sitter latitude", &ds, &latitude)] {
        let f = frenet2_at(chart, curve, 0.4)?;
        let r = frenet2_residuals(chart, curve, 0.4)?;
        println!("{name}: κ = {:.9}, ε₁ = {:+}, ε₂ = {:+}, residuals {:.1e} {:.1e}", f.kappa, f.eps1, f.eps2, r[0], r[1]);
    }

    // a helix around the time axis of Minkowski 3-space
    let helix = AmbientCurve::new(|s| [s.cos(), s.sin(), 0.5 * s]);
    let f = frenet3_at(&helix, 1.0)?;
    println!(
        "helix: κ = {:.9}, τ = {:.9}, ε = ({:+}, {:+}), residuals {:?}",
        f.kappa, f.tau, f.eps1, f.eps2, f.residuals
    );
    Ok(())
}
