use sasaki_slant::expr::{parse_expression, Expression};

fn main() {
    for src in ["cosh(t)*2", "sin(t)^2+cos(t)^2", "2^3^2", "-t^2", "sqrt(abs(t - 1))/exp(t)"] {
        let e = parse_expression(src).unwrap();
        println!("{src:<26} → {e:<28} at t = 0.7: {}", e.eval1(0.7));
    }

    let e = Expression::parse("u*cosh(v)^2", &["u", "v"]).unwrap();
    let d = e.derivative("v").unwrap();
    println!("d/dv {e} = {d}");

    for bad in ["cosh(", "sec(t)", "t + x", "2 * * t"] {
        let err = parse_expression(bad).unwrap_err();
        println!("{bad:<10} {}: {err} (offset {})", err.kind(), err.offset());
    }
}
