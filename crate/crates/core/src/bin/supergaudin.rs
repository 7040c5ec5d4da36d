use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use supergaudin::cli::{demo, parse_points, run, RunConfig, ZSpec, DEMOS, KNOWN_CHECKS};
use supergaudin::Error;

/// Run exact verification checks on gl(m|n) Gaudin models and write a JSON report.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Args {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Canned scenario (gl2-bethe, gl11-lift, gl21-trunc).
    #[arg(long)]
    demo: Option<String>,
    /// Check to run; repeat to select several. Overrides the configured list.
    #[arg(long = "check")]
    checks: Vec<String>,
    /// Seed for every randomized step.
    #[arg(long)]
    seed: Option<u64>,
    /// Points as "p/q,p/q,...", or "random".
    #[arg(long)]
    z: Option<String>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock milliseconds per check (reports stop being byte-stable).
    #[arg(long)]
    timings: bool,
    /// List check and demo names, then exit.
    #[arg(long)]
    list: bool,
}

fn config_from(args: &Args) -> Result<RunConfig, Error> {
    let mut cfg = match (&args.config, &args.demo) {
        (Some(_), Some(_)) => return Err(Error::config("arguments", "--config and --demo are mutually exclusive")),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
            RunConfig::from_json(&text)?
        }
        (None, Some(name)) => demo(name)?,
        (None, None) => return Err(Error::config("arguments", "one of --config or --demo is required")),
    };
    if !args.checks.is_empty() {
        cfg.checks = args.checks.clone();
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(z) = &args.z {
        cfg.z = if z.trim() == "random" { ZSpec::Random } else { ZSpec::Points(parse_points(z)?) };
    }
    if let Some(out) = &args.out {
        cfg.output = Some(out.display().to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list {
        println!("checks: {}", KNOWN_CHECKS.join(" "));
        println!("demos: {}", DEMOS.join(" "));
        return ExitCode::SUCCESS;
    }
    let cfg = match config_from(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let out = match run(&cfg, args.timings) {
        Ok(o) => o,
        Err(e @ (Error::ConfigError { .. } | Error::UnknownDemo(_))) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let text = serde_json::to_string_pretty(&out.document).expect("report serializes") + "\n";
    match &cfg.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: writing {path}: {e}");
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    let s = &out.document["summary"];
    eprintln!("pass {} fail {} vacuous {}", s["pass"], s["fail"], s["vacuous"]);
    ExitCode::from(out.exit_code() as u8)
}
