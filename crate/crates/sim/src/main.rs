use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use helicity_core::entanglement::Mode;
use helicity_sim::config::parse_mode;
use helicity_sim::sweep::{report, write_csv};
use helicity_sim::{print_matrix, run_single, run_sweep, validate, ScenarioConfig, SimError, SimResult};

/// Lorentz-boost sweeps of helicity and spin entanglement for massive spin-1/2 pairs.
///
/// Exit codes: 0 success, 1 validation failure, 2 invalid input, 3 numerical abort.
#[derive(Parser, Debug)]
#[command(name = "helicity-sim", version)]
struct Cli {
    /// Output path; overrides `output` in the config.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads, 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Refinement factor for the plateau check; overrides `refine` in the config.
    #[arg(long, global = true)]
    refine: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Two-particle sweep over boost speeds; one CSV per packet width.
    Sweep { config: PathBuf },
    /// Single-particle sweep (config needs `state = single`).
    Single { config: PathBuf },
    /// Print the helicity (or Wigner) rotation for one momentum and boost.
    Matrix {
        #[arg(long, allow_negative_numbers = true)]
        eta: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[arg(long, default_value = "helicity", value_parser = parse_mode)]
        mode: Mode,
    },
    /// Run the built-in property suite and print a JSON summary.
    Validate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start {} worker threads: {e}", cli.threads);
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load(cli: &Cli, path: &Path, default_output: &str) -> SimResult<(ScenarioConfig, PathBuf)> {
    let mut cfg = ScenarioConfig::from_file(path)?;
    if let Some(r) = cli.refine {
        cfg.refine = r;
    }
    if let Some(o) = &cli.output {
        cfg.output = Some(o.clone());
    }
    cfg.validate()?;
    let out = cfg.output.clone().unwrap_or_else(|| PathBuf::from(default_output));
    Ok((cfg, out))
}

fn run(cli: &Cli) -> SimResult<u8> {
    match &cli.command {
        Command::Sweep { config } => {
            let (cfg, out) = load(cli, config, "sweep.csv")?;
            let result = run_sweep(&cfg)?;
            let written = write_csv(&result, &out)?;
            print!("{}", report("sweep", &result, &written));
            Ok(0)
        }
        Command::Single { config } => {
            let (cfg, out) = load(cli, config, "single.csv")?;
            let result = run_single(&cfg)?;
            let written = write_csv(&result, &out)?;
            print!("{}", report("single", &result, &written));
            Ok(0)
        }
        Command::Matrix { eta, tau, theta, phi, mode } => {
            let text = print_matrix(*eta, *tau, *theta, *phi, *mode)?;
            print!("{text}");
            if let Some(o) = &cli.output {
                std::fs::write(o, &text).map_err(|source| SimError::Io { path: o.clone(), source })?;
            }
            Ok(0)
        }
        Command::Validate => {
            let rep = validate();
            let json = rep.to_json();
            println!("{json}");
            if let Some(o) = &cli.output {
                std::fs::write(o, format!("{json}\n")).map_err(|source| SimError::Io { path: o.clone(), source })?;
            }
            Ok(rep.exit_code() as u8)
        }
    }
}
