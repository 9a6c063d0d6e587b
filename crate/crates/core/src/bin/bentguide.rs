use std::path::PathBuf;
use std::process::ExitCode;

use bentguide::config::{Command, RunConfig};
use bentguide::pipeline::{run_resolved, RunContext};
use bentguide::Error;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bentguide", version, about = "Curvature-designed matter-wave waveguides")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// TOML run configuration.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,

    /// Output directory; overrides `output_dir` in the config.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,

    /// Root under which `<command>/` output directories are created by default.
    #[arg(long, global = true, env = "BENTGUIDE_OUTPUT_ROOT", default_value = "bentguide-out")]
    output_root: PathBuf,

    /// Worker threads; 0 uses every available core.
    #[arg(long, short = 'j', global = true, default_value_t = 1)]
    threads: usize,

    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Integrate the guide axis, find multiple points, check validity.
    Design,
    /// Reflection/transmission over a momentum grid and the bound spectrum.
    Scatter,
    /// Bound spectrum only.
    Spectrum,
    /// Time-dependent wave-packet propagation in 1D or 2D.
    Propagate,
    /// Talbot carpet on a closed loop.
    Carpet,
    /// Ground states on a loop with and without the compensating barrier.
    Compensate,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Design => Command::Design,
            Cmd::Scatter => Command::Scatter,
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Propagate => Command::Propagate,
            Cmd::Carpet => Command::Carpet,
            Cmd::Compensate => Command::Compensate,
        }
    }
}

fn execute(cli: &Cli) -> Result<PathBuf, Error> {
    let command = Command::from(cli.command);
    let (raw, base) = match &cli.config {
        Some(p) => (RunConfig::read(p)?, p.parent().map(PathBuf::from).unwrap_or_default()),
        None => (RunConfig::default(), PathBuf::from(".")),
    };
    let cfg = raw.resolve(command, &base)?;
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| cli.output_root.join(command.name()));
    let ctx = RunContext {
        threads: cli.threads,
        verbose: cli.verbose,
    };
    if cli.verbose {
        eprintln!("{}: writing to {}", command.name(), out.display());
    }
    run_resolved(command, &cfg, &out, ctx)?;
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            println!("{}", out.join("manifest.toml").display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
