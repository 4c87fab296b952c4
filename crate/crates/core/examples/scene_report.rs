use sasaki_slant::report::{run, Command, Overrides, SweepRange};

const SCENE: &str = include_str!("scenes/prop3_de_sitter.toml");
const THM8: &str = include_str!("scenes/thm8_flat.toml");

fn main() {
    let rep = run(&Command::Verify("prop3".into()), SCENE.as_bytes(), &Overrides::default());
    let check = &rep.checks[0];
    println!("verify prop3: holds {} (residual {:.1e}), exit {}", check.holds, check.residual, rep.exit_code());
    println!("config sha256 {}", rep.config_sha256);
    let csv = rep.to_csv();
    println!("{}", csv.trim_end());

    let sweep = Command::Sweep { param: "a".into(), range: SweepRange::parse("0.5:2.0:0.25").unwrap() };
    let rep = run(&sweep, THM8.as_bytes(), &Overrides { samples: None, tol: Some(1e-9), xi_convention: None });
    print!("{}", rep.to_csv());
}
