use sasaki_slant::lorentz::{
    angle_law_value, causal_character, minkowski_inner, recover_angle, wedge3, AngleLaw, MetricSignature,
};

fn main() -> sasaki_slant::Result<()> {
    let m = MetricSignature::minkowski3();
    let vectors = [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [0.3, 0.4, 2.0]];
    for v in vectors {
        println!("{v:?}: g(v,v) = {:+.3}, {:?}", minkowski_inner(&m, &v, &v)?, causal_character(&m, &v, 1e-12)?);
    }

    // the Lorentzian cross product is orthogonal to both factors
    let (a, b) = ([1.0, 0.2, 0.1], [0.0, 1.0, 0.5]);
    let c = wedge3(a, b);
    println!("a × b = {c:?}, g(a×b, a) = {:.1e}, g(a×b, b) = {:.1e}", minkowski_inner(&m, &c, &a)?, minkowski_inner(&m, &c, &b)?);

    for (law, value) in [(AngleLaw::CosSpan, 0.5), (AngleLaw::CoshSpan, 1.8), (AngleLaw::SinhMixed, -0.7)] {
        let theta = recover_angle(law, value)?;
        println!("{}: θ = {theta:.6}, back to {:.6}", law.name(), angle_law_value(law, theta));
    }
    match recover_angle(AngleLaw::CoshSpan, 0.5) {
        Err(e) => println!("cosh θ = 0.5: {e}"),
        Ok(t) => println!("unexpected θ = {t}"),
    }
    Ok(())
}
