use sasaki_slant::bundle::{contact_at, sasaki_metric, BundlePoint, BundleTangent, XiConvention};
use sasaki_slant::surface::{make_surface, SurfaceKind};

fn main() -> sasaki_slant::Result<()> {
    let c = make_surface(SurfaceKind::AntiDeSitter)?;
    for u in [[1.0, 0.2], [0.1, 1.0]] {
        let p = BundlePoint::normalized(&c, [0.2, 0.5], u)?;
        let a = BundleTangent { h: [0.4, -1.1], t: p.project(&c, [0.8, 0.3])? };
        for conv in [XiConvention::TwoXh, XiConvention::Half] {
            let cd = contact_at(&p, conv);
            let xi_xi = sasaki_metric(&c, &p, &cd.xi, &cd.xi, true)?;
            let phi2 = cd.phi(&c, &cd.phi(&c, &a)?)?;
            let defect = (phi2 + a - cd.xi * cd.eta(&c, &a)?).max_abs();
            println!(
                "ε_u = {:+}, {}: g1(ξ,ξ) = {xi_xi:+.6}, η(ξ) = {:.6}, |φ²A + A − η(A)ξ| = {defect:.1e}",
                p.eps_u,
                conv.name(),
                cd.eta(&c, &cd.xi)?
            );
        }
    }
    Ok(())
}
