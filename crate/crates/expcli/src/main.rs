use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kdvbbm_cli::config::{self, ExperimentKind, Overrides, RawConfig};
use kdvbbm_cli::runner;

/// Pseudospectral experiment runner for the fifth-order KdV-BBM equation on
/// the torus. Exit code 0 iff every acceptance rule of the run passes.
#[derive(Parser)]
#[command(name = "kdvbbm", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate an initial datum and record the trajectory diagnostics.
    Simulate(RunArgs),
    /// Check energy conservation (gamma = 7/48) or the drift identity.
    EnergyAudit(RunArgs),
    /// Empirical multiplier-estimate quotients and the sharpness witness.
    Estimates(RunArgs),
    /// High-frequency data scan: decaying data, persistent second iterate.
    IllposedScan(RunArgs),
    /// Shifted-frame norm-inflation sweep.
    Inflate(RunArgs),
    /// Low/high frequency splitting smoothing sweep.
    Split(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration (defaults are used when omitted).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSV series, report and manifest.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for every random quantity in the run.
    #[arg(long)]
    seed: Option<u64>,
    /// Coefficient preset: hamiltonian | inflation.
    #[arg(long)]
    preset: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.cmd {
        Cmd::Simulate(a) => (ExperimentKind::Simulate, a),
        Cmd::EnergyAudit(a) => (ExperimentKind::EnergyAudit, a),
        Cmd::Estimates(a) => (ExperimentKind::Estimates, a),
        Cmd::IllposedScan(a) => (ExperimentKind::IllposedScan, a),
        Cmd::Inflate(a) => (ExperimentKind::Inflate, a),
        Cmd::Split(a) => (ExperimentKind::Split, a),
    };

    let raw = match &args.config {
        None => RawConfig::default(),
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            };
            match RawConfig::from_toml_str(&text) {
                Ok(r) => r,
                Err(e) => {
                    eprint!("{e}");
                    return ExitCode::from(2);
                }
            }
        }
    };
    let overrides = Overrides {
        out: args.out.clone(),
        seed: args.seed,
        preset: args.preset.clone(),
    };
    let cfg = match config::resolve(kind, &raw, &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(2);
        }
    };

    match runner::run_and_persist(&cfg) {
        Ok(out) => {
            let r = &out.report;
            println!("run {} ({})", out.run_id, r.experiment);
            for f in &r.fits {
                let verdict = if !f.asserted {
                    "REPORTED"
                } else if f.pass {
                    "PASS"
                } else {
                    "FAIL"
                };
                println!(
                    "  fit  {:<40} slope {:+.4} (expected {:+.4}, dev {:.1}%)  {}",
                    f.name,
                    f.slope,
                    f.expected,
                    100.0 * f.rel_dev,
                    verdict
                );
            }
            for c in &r.checks {
                println!(
                    "  check {:<40} value {:.6e} vs {:.6e}  {}",
                    c.name,
                    c.value,
                    c.threshold,
                    if c.pass { "PASS" } else { "FAIL" }
                );
            }
            if let Some(err) = &r.error {
                println!("  error: {err}");
            }
            println!(
                "  -> {} in {:.2}s, artifacts in {}",
                if r.passed { "PASS" } else { "FAIL" },
                r.timing_s,
                out.dir.display()
            );
            if r.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("run failed: {e}");
            ExitCode::FAILURE
        }
    }
}
