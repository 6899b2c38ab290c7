//! Command-line front end for the Monte-Carlo experiments.
//!
//! Exit codes: 0 success, 1 I/O or internal error, 2 invalid spec, 3 every trial infeasible.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dfrc_core::experiments::{self, preset, ExperimentSpec, Scale, PRESETS};
use dfrc_core::DfrcError;

#[derive(Parser)]
#[command(name = "dfrc", version, about = "Radar SINR maximization for RIS-assisted DFRC with movable antennas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every trial of a spec file and write CSV tables and SVG plots.
    Run {
        spec: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Check a spec file and print it with all defaults filled in.
    Validate {
        spec: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Built-in experiment specs.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    /// List the available presets.
    List,
    /// Write a preset spec to a file (default `<name>.spec`).
    Write {
        name: String,
        #[arg(long, default_value = "paper")]
        scale: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Flags that replace the matching spec fields.
#[derive(Args)]
struct Overrides {
    /// Use seeds 0..N.
    #[arg(long)]
    seeds: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scheme to run; repeat or comma-separate for several.
    #[arg(long, value_delimiter = ',')]
    scheme: Vec<String>,
    /// `paper` or `desk`: defaults for K, N, M and P_t.
    #[arg(long)]
    scale: Option<String>,
}

impl Overrides {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if let Some(n) = self.seeds {
            out.push(("seeds", n.to_string()));
        }
        if let Some(dir) = &self.out {
            out.push(("output", dir.display().to_string()));
        }
        if !self.scheme.is_empty() {
            out.push(("schemes", format!("[{}]", self.scheme.join(", "))));
        }
        if let Some(s) = &self.scale {
            out.push(("scale", s.clone()));
        }
        out
    }

    fn load(&self, path: &std::path::Path) -> dfrc_core::Result<ExperimentSpec> {
        let pairs = self.pairs();
        let refs: Vec<(&str, &str)> = pairs.iter().map(|(k, v)| (*k, v.as_str())).collect();
        experiments::validate_spec(path, &refs)
    }
}

fn fail(e: DfrcError) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        DfrcError::InvalidConfig(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { spec, overrides } => {
            let spec = match overrides.load(&spec) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let (report, files) = match experiments::run_experiment(&spec) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            for s in &report.summary {
                println!(
                    "{:<11} {:>8} {}/{} solved  mean radar SINR {:.2} dB",
                    s.scheme.name(),
                    s.sweep_value,
                    s.solved,
                    s.trials,
                    s.mean_radar_sinr_db
                );
            }
            println!("wrote {} files to {}", files.len(), spec.output.display());
            if report.solved() == 0 {
                eprintln!("error: every trial was infeasible");
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Command::Validate { spec, overrides } => match overrides.load(&spec) {
            Ok(s) => {
                print!("{}", s.to_text());
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Presets { action: PresetAction::List } => {
            for (name, description) in PRESETS {
                println!("{name:<6} {description}");
            }
            ExitCode::SUCCESS
        }
        Command::Presets {
            action: PresetAction::Write { name, scale, out },
        } => {
            let text = scale.parse::<Scale>().and_then(|s| preset(&name, s));
            let text = match text {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            let path = out.unwrap_or_else(|| PathBuf::from(format!("{name}.spec")));
            if let Err(e) = std::fs::write(&path, text) {
                return fail(e.into());
            }
            println!("wrote {}", path.display());
            ExitCode::SUCCESS
        }
    }
}
