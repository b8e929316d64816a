use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qwalk_cli::commands::{execute, write_artifacts};
use qwalk_cli::{parse_config_text, Command, ConfigError, RunConfig};

/// Discrete-time quantum walks with a position-dependent coin.
#[derive(Parser)]
#[command(name = "qwalk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Amplitudes and position distribution after `--steps` steps
    Evolve(Flags),
    /// Coin entropy for t = 1..steps
    EntropyTable(Flags),
    /// Coin entropy over a uniform (theta, phi) grid at fixed t
    Sweep(Flags),
    /// Trace distance between neighbouring coin states, with a power-law fit
    TraceDistance(Flags),
    /// Position variance of the inhomogeneous, Hadamard and classical walks
    Variance(Flags),
    /// Simulated photon counting and coin tomography over seeds
    Tomography(Flags),
    /// Engine self-checks; exits non-zero on any failure
    Verify(Flags),
    /// Run whatever `command=` the config file names
    Run(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// key=value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Initial coin phase (radians, or e.g. pi/2)
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Phase of the coin at the origin (radians, or e.g. pi/4)
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    steps: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    grid_theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    grid_phi: Option<String>,
    /// Mean photons per basis setting at t = 0
    #[arg(long, allow_hyphen_values = true)]
    n0: Option<String>,
    /// Loss per round trip in dB
    #[arg(long, allow_hyphen_values = true)]
    loss_db: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    /// Number of seeds for tomography statistics
    #[arg(long, allow_hyphen_values = true)]
    seeds: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    fit_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    fit_max: Option<String>,
    /// Steps used by the trace-distance fit: all, even or odd
    #[arg(long)]
    parity: Option<String>,
    /// Output file (stdout if absent)
    #[arg(long)]
    output: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Also write an SVG plot next to the output
    #[arg(long)]
    plot: bool,
    /// Omit the `#` metadata line from CSV output
    #[arg(long)]
    no_header: bool,
    /// Reconstruct from a counts CSV instead of simulating
    #[arg(long)]
    counts: Option<String>,
    /// Write the simulated counts of the final step to this CSV
    #[arg(long)]
    write_counts: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let opts = [
            ("theta", &self.theta),
            ("phi", &self.phi),
            ("steps", &self.steps),
            ("grid_theta", &self.grid_theta),
            ("grid_phi", &self.grid_phi),
            ("n0", &self.n0),
            ("loss_db", &self.loss_db),
            ("seed", &self.seed),
            ("seeds", &self.seeds),
            ("fit_min", &self.fit_min),
            ("fit_max", &self.fit_max),
            ("parity", &self.parity),
            ("output", &self.output),
            ("format", &self.format),
            ("counts", &self.counts),
            ("write_counts", &self.write_counts),
        ];
        let mut pairs: Vec<(&'static str, String)> =
            opts.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k, v))).collect();
        if self.plot {
            pairs.push(("plot", "true".into()));
        }
        if self.no_header {
            pairs.push(("no_header", "true".into()));
        }
        pairs
    }
}

fn build_config(command: Option<Command>, flags: &Flags) -> Result<RunConfig, ConfigError> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    if let Some(path) = &flags.config {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
        pairs.extend(parse_config_text(&text)?);
    } else if command.is_none() {
        return Err(ConfigError::new("config", "`run` needs --config"));
    }
    if let Some(c) = command {
        pairs.push(("command".into(), c.name().into()));
    }
    pairs.extend(flags.pairs().into_iter().map(|(k, v)| (k.to_string(), v)));
    RunConfig::from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match &cli.command {
        Sub::Evolve(f) => (Some(Command::Evolve), f),
        Sub::EntropyTable(f) => (Some(Command::EntropyTable), f),
        Sub::Sweep(f) => (Some(Command::Sweep), f),
        Sub::TraceDistance(f) => (Some(Command::TraceDistance), f),
        Sub::Variance(f) => (Some(Command::Variance), f),
        Sub::Tomography(f) => (Some(Command::Tomography), f),
        Sub::Verify(f) => (Some(Command::Verify), f),
        Sub::Run(f) => (None, f),
    };
    let cfg = match build_config(command, flags) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("qwalk: {e}");
            return ExitCode::from(2);
        }
    };
    let result = execute(&cfg).and_then(|art| write_artifacts(&cfg, &art).map(|()| art.success));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(1)
        }
    }
}
