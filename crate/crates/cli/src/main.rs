//! `uorasim` — experiment harness for the UORA uplink OFDMA simulator.
//!
//! Runs sweeps over station counts, RA RU counts and bandwidths, emits
//! `results.csv` / `summary.csv`, and optionally checks the simulator
//! against the analytic throughput estimator.
//!
//! Exit codes: 0 on success, 1 on usage or configuration errors, 2 when the
//! oracle comparison fails.

mod config;
mod experiment;
mod oracle;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{load_config, ExperimentSpec};

#[derive(Debug, Parser)]
#[command(name = "uorasim", version, about = "UORA uplink OFDMA experiment runner")]
struct Args {
    /// Experiment config file (`key = value` lines); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for results.csv, summary.csv and trace logs.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Overrides the base seed from the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Writes a per-run event trace log next to the CSV output.
    #[arg(long)]
    trace: bool,
    /// Compares per-point throughput with the analytic estimator after the
    /// sweep; a deviation beyond the configured tolerance fails the run.
    #[arg(long)]
    compare_oracle: bool,
    /// Worker threads for replications (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(args: Args) -> anyhow::Result<ExitCode> {
    let mut spec = match &args.config {
        Some(path) => load_config(path)?,
        None => {
            let spec = ExperimentSpec::default();
            spec.validate()?;
            spec
        }
    };
    if let Some(seed) = args.seed {
        spec.base.seed = seed;
    }
    spec.trace |= args.trace;
    let out_dir = spec.out_dir.clone().unwrap_or_else(|| args.out.clone());

    let jobs = experiment::job_list(&spec);
    eprintln!(
        "running {} simulations ({} sweep points x {} runs) into {}",
        jobs.len(),
        jobs.len() / spec.n_runs.max(1) as usize,
        spec.n_runs,
        out_dir.display()
    );
    let output = experiment::run_experiments(&spec, &out_dir, args.jobs)?;
    eprintln!("wrote {}", output.results_path.display());
    eprintln!("wrote {}", output.summary_path.display());

    if args.compare_oracle {
        let (comparisons, all_pass) = oracle::compare_with_oracle(&spec, &output.rows)?;
        for comparison in &comparisons {
            println!("{}", comparison.report_line(spec.oracle_tolerance));
        }
        if !all_pass {
            eprintln!("oracle comparison failed");
            return Ok(ExitCode::from(2));
        }
    }
    Ok(ExitCode::SUCCESS)
}
