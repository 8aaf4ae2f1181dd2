//! Command-line front end for the fault-tolerant optimization simulator.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ft_optsim::harness::{
    cmd_analyze, cmd_check, cmd_oracle, cmd_run, cmd_sweep, EmitFlags, OracleQuery, RunConfig,
};
use ft_optsim::netgraph::{FaultMode, DEFAULT_ENUMERATION_BUDGET};
use ft_optsim::objective::ConstraintInterval;

#[derive(Parser)]
#[command(name = "ft-optsim", version, about = "Fault-tolerant distributed optimization simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Byzantine,
    Crash,
}

impl From<ModeArg> for FaultMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Byzantine => FaultMode::Byzantine,
            ModeArg::Crash => FaultMode::Crash,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check consensus solvability of a graph file and print the report.
    Check {
        /// Edge-list graph file (`n <count>` header, `i j` lines).
        #[arg(long)]
        graph: PathBuf,
        /// Fault budget.
        #[arg(long)]
        f: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Reduced-graph enumeration cap.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Execute a scenario file and write trace + summary artifacts.
    Run {
        /// Scenario file (TOML).
        #[arg(long)]
        scenario: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated artifacts: trace,sidecar,matrices.
        #[arg(long, default_value = "trace,sidecar")]
        emit: String,
        /// Membership tolerance recorded in the summary.
        #[arg(long, default_value_t = 1e-3)]
        membership_tol: f64,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Rebuild update matrices from a sidecar trace and certify the bounds.
    Analyze {
        /// Sidecar trace file written by `run` (trace_sidecar.json).
        #[arg(long)]
        trace: PathBuf,
        /// Write the certification JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit nonzero when a certified bound fails.
        #[arg(long, default_value_t = false)]
        assert: bool,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Compute the optimum interval of a valid-function family.
    Oracle {
        /// Comma-separated centers for agents 1..k (unit curvature).
        #[arg(long)]
        centers: String,
        /// Comma-separated faulty agent labels.
        #[arg(long, default_value = "")]
        faulty: String,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        gamma: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Constraint interval endpoints (both or neither).
        #[arg(long)]
        lo: Option<f64>,
        #[arg(long)]
        hi: Option<f64>,
    },
    /// Run a sweep file (base scenario x seeds x algorithms) into a CSV.
    Sweep {
        /// Sweep file (TOML).
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|_| format!("bad list entry `{p}`")))
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Check { graph, f, mode, budget } => {
            let out = cmd_check(&graph, f, mode.into(), budget)?;
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { scenario, out, seed, emit, membership_tol, budget } => {
            let mut config = RunConfig::new(scenario, out);
            config.seed_override = seed;
            config.membership_tol = membership_tol;
            config.budget = budget;
            let parts: Vec<String> = parse_list(&emit)?;
            config.emit = EmitFlags {
                trace_csv: parts.iter().any(|p| p == "trace"),
                sidecar: parts.iter().any(|p| p == "sidecar"),
                matrices: parts.iter().any(|p| p == "matrices"),
            };
            let summary = cmd_run(&config)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze { trace, out, assert, budget } => {
            let report = cmd_analyze(&trace, budget)?;
            let json = serde_json::to_string_pretty(&report)?;
            match out {
                Some(path) => {
                    if let Some(dir) = path.parent() {
                        std::fs::create_dir_all(dir)?;
                    }
                    std::fs::write(path, &json)?;
                }
                None => println!("{json}"),
            }
            if assert && !report.pass {
                eprintln!("certification failed");
                return Ok(ExitCode::FAILURE);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { centers, faulty, beta, gamma, mode, lo, hi } => {
            let centers: Vec<f64> = parse_list(&centers)?;
            let faulty: BTreeSet<usize> = parse_list::<usize>(&faulty)?.into_iter().collect();
            let constraint = match (lo, hi) {
                (Some(lo), Some(hi)) => Some(ConstraintInterval::new(lo, hi)?),
                (None, None) => None,
                _ => return Err("provide both --lo and --hi or neither".into()),
            };
            let query = OracleQuery { centers, faulty, beta, gamma, mode: mode.into(), constraint };
            let interval = cmd_oracle(&query)?;
            println!("{}", serde_json::to_string_pretty(&interval)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { config, out } => {
            let path = cmd_sweep(&config, &out)?;
            eprintln!("sweep written to {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
