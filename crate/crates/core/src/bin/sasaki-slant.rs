use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sasaki_slant::bundle::XiConvention;
use sasaki_slant::report::{run, Command, Overrides, SweepRange, EXIT_CONFIG};

#[derive(Parser)]
#[command(name = "sasaki-slant", version, about = "Classify lifted curves in unit tangent bundles of Lorentzian surfaces")]
struct Cli {
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Number of samples (default 512, or `[run] samples`)
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Tolerance (default 1e-6, or `[run] tol`)
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    xi_convention: Option<Convention>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Defaults to csv for sweep and json otherwise
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    Classify,
    Verify {
        #[arg(value_parser = ["prop3", "thm4", "prop5", "thm6-legendre", "thm6-slant", "thm8", "thm12"])]
        name: String,
    },
    Sweep {
        param: String,
        /// start:stop:step, inclusive
        range: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    #[value(name = "paper-2xh")]
    TwoXh,
    #[value(name = "paper-half")]
    Half,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let fail = |msg: String| {
        eprintln!("error: {msg}");
        ExitCode::from(EXIT_CONFIG as u8)
    };
    let Some(path) = cli.config else {
        return fail("--config is required".into());
    };
    let raw = match std::fs::read(&path) {
        Ok(b) => b,
        Err(e) => return fail(format!("{}: {e}", path.display())),
    };
    let command = match cli.command {
        Cmd::Classify => Command::Classify,
        Cmd::Verify { name } => Command::Verify(name),
        Cmd::Sweep { param, range } => match SweepRange::parse(&range) {
            Ok(range) => Command::Sweep { param, range },
            Err(e) => return fail(e.to_string()),
        },
    };
    let overrides = Overrides {
        samples: cli.samples,
        tol: cli.tol,
        xi_convention: cli.xi_convention.map(|c| match c {
            Convention::TwoXh => XiConvention::TwoXh,
            Convention::Half => XiConvention::Half,
        }),
    };
    let report = run(&command, &raw, &overrides);
    for e in report.errors.iter().take(5) {
        match (&e.field, e.offset) {
            (Some(f), Some(o)) => eprintln!("{}: {} (field {f}, offset {o})", e.kind, e.message),
            _ => eprintln!("{}: {}", e.kind, e.message),
        }
    }
    if report.errors.len() > 5 {
        eprintln!("... {} more errors in the report", report.errors.len() - 5);
    }
    let format = cli.format.unwrap_or(if matches!(command, Command::Sweep { .. }) { Format::Csv } else { Format::Json });
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, text) {
                return fail(format!("{}: {e}", p.display()));
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
