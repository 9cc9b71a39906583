#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Context, Run};
use config::{Config, Profile};
use output::{checks_csv, exit_code, verdict_str, Artifacts};

/// Desk-scale spectral studies of model cone operators.
///
/// Exit status: 0 when every check passes, 2 on invalid configuration, a
/// module error or a failed check, 3 when a check is undecided.
#[derive(Parser, Debug)]
#[command(name = "cone-spectral", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file; the shipped defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Also render SVG figures.
    #[arg(long, global = true)]
    svg: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Profile::Default)]
    tolerance_profile: Profile,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Boundary spectrum, discrete eigenvalues and Bessel-oracle comparison.
    Spectrum,
    /// Heat traces, expansion fits and term report.
    Heat,
    /// Resolvent-norm decay and resolvent power traces.
    Resolvent,
    /// Zeta continuation and pole report.
    Zeta,
    /// McKean-Singer, eta term, index assembly and invariance sweeps.
    Index,
    /// Property suite: index-set laws, symbol seminorms, lemma oracles, A_k identity.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Heat => "heat",
            Command::Resolvent => "resolvent",
            Command::Zeta => "zeta",
            Command::Index => "index",
            Command::Verify => "verify",
        }
    }

    fn runner(self) -> fn(&mut Context) -> Run {
        match self {
            Command::Spectrum => commands::spectrum,
            Command::Heat => commands::heat,
            Command::Resolvent => commands::resolvent,
            Command::Zeta => commands::zeta,
            Command::Index => commands::index,
            Command::Verify => commands::verify,
        }
    }
}

fn run(cli: &Cli) -> Result<i32, String> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let errors = cfg.validate();
    if !errors.is_empty() {
        return Err(format!("invalid configuration:\n  {}", errors.join("\n  ")));
    }
    let name = cli.command.name();
    let mut out = Artifacts::create(&cli.out, name, &cfg.digest(), cli.seed, cli.tolerance_profile.as_str(), cli.svg)
        .map_err(|e| format!("cannot create {}: {e}", cli.out.display()))?;
    let mut ctx = Context { cfg: &cfg, tol: cli.tolerance_profile.tolerances(), seed: cli.seed, out: &mut out };
    let result = (cli.command.runner())(&mut ctx);
    let io = |e: std::io::Error| format!("cannot write outputs: {e}");
    match result {
        Ok(checks) => {
            out.csv("checks.csv", &checks_csv(&checks)).map_err(io)?;
            out.finish(true, None).map_err(io)?;
            for c in &checks {
                println!("{:<9} {:<28} {}  [{}]", verdict_str(c.verdict), c.name, c.value, c.criterion);
            }
            Ok(exit_code(&checks))
        }
        Err(e) => {
            let msg = e.to_string();
            out.finish(false, Some(&msg)).map_err(io)?;
            Err(format!("{name} stopped: {msg}"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
