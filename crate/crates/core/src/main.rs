//! Thin command-line front end: each subcommand loads one experiment
//! config, dispatches into the library, and maps outcomes to exit codes
//! (0 done, 1 error, 2 theorem violation candidate).

use clap::{Args, Parser, Subcommand};
use monochaos::lab::{self, ExperimentConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "monochaos", version, about = "Experiments on chaotic and monotone dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate a map or integrate a flow; writes the orbit as CSV.
    Simulate(RunArgs),
    /// Certify cooperativity / Jacobian nonnegativity over a box.
    Certify(RunArgs),
    /// Estimate an attracting set, check attraction, hunt periodic orbits.
    Attract(RunArgs),
    /// Numerical chaos indicators plus a monotonicity certificate.
    Chaos(RunArgs),
    /// Exact chaos checks on subshifts of finite type.
    Sft(RunArgs),
    /// Theorem experiments: certified monotone + attracting => periodic.
    Theorem(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (JSON, one experiment per file).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; results land under a config-hash subdirectory.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

impl Command {
    fn kind_name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Certify(_) => "certify",
            Command::Attract(_) => "attract",
            Command::Chaos(_) => "chaos",
            Command::Sft(_) => "sft",
            Command::Theorem(_) => "theorem",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Simulate(a)
            | Command::Certify(a)
            | Command::Attract(a)
            | Command::Chaos(a)
            | Command::Sft(a)
            | Command::Theorem(a) => a,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = cli.command.args();
    let mut config: ExperimentConfig = match lab::load_config(&args.config) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(1);
        }
    };
    if config.kind_name() != cli.command.kind_name() {
        eprintln!(
            "error: config kind `{}` does not match subcommand `{}`",
            config.kind_name(),
            cli.command.kind_name()
        );
        return ExitCode::from(1);
    }
    if let Some(seed) = args.seed {
        config.set_seed(seed);
    }
    let base_dir = args
        .config
        .parent()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    match lab::run(&config, &base_dir, &args.out) {
        Ok(outcome) => {
            if outcome.rerun {
                eprintln!(
                    "note: rerun of an existing config hash; overwrote {}",
                    outcome.out_dir.display()
                );
            }
            println!("report: {}", outcome.report_path.display());
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
