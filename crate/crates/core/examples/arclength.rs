use std::sync::Arc;

use sasaki_slant::curve::{reparametrize_to_speed, speed, BaseCurve, ExprCurve};
use sasaki_slant::surface::{make_surface, SurfaceKind};

fn main() -> sasaki_slant::Result<()> {
    let ds = make_surface(SurfaceKind::DeSitter { r: 1.0 })?;
    let gamma: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse("t + 0.3*t^2", "0.2*sin(t)").unwrap());
    for target in [1.0, 2.5] {
        let r = reparametrize_to_speed(&ds, gamma.clone(), [0.0, 2.0], target, 1e-10)?;
        let [s0, s1] = r.range();
        let worst = (0..=20)
            .map(|i| s0 + (s1 - s0) * i as f64 / 20.0)
            .map(|s| (speed(&ds, &r, s).unwrap() - target).abs())
            .fold(0.0, f64::max);
        println!("speed {target}: s ∈ [0, {s1:.6}], length {:.6}, max speed error {worst:.1e}", s1 * target);
        println!("  s = {:.3} comes from t = {:.6}", s1 / 2.0, r.original_parameter(s1 / 2.0));
    }
    Ok(())
}
