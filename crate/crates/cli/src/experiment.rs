//! Sweep execution and CSV emission.
//!
//! Every (bandwidth, n_stas, n_ra, run) job is a pure function of its
//! configuration and seed, so jobs run in parallel and the assembled CSV is
//! byte-identical across repetitions. Metric values are rounded to the six
//! decimals they are printed with *before* aggregation, so the summary file
//! is exactly recomputable from `results.csv`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use rayon::prelude::*;

use uorasim_core::engine::{self, Metrics, SimConfig};

use crate::config::ExperimentSpec;

pub const RESULTS_HEADER: &str = "bandwidth_mhz,n_stas,n_ra,run,seed,throughput_mbps,\
ra_success_rate,ra_collision_rate,ra_idle_rate,mean_delay_us";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SweepPoint {
    pub bandwidth_mhz: u16,
    pub n_stas: u16,
    pub n_ra: usize,
}

impl std::fmt::Display for SweepPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "bw={} n_stas={} n_ra={}", self.bandwidth_mhz, self.n_stas, self.n_ra)
    }
}

#[derive(Debug, Clone)]
pub struct RunRow {
    pub point: SweepPoint,
    pub run: u32,
    pub seed: u64,
    pub throughput_mbps: f64,
    pub ra_success_rate: f64,
    pub ra_collision_rate: f64,
    pub ra_idle_rate: f64,
    pub mean_delay_us: f64,
}

impl RunRow {
    fn metrics(&self) -> [f64; 5] {
        [
            self.throughput_mbps,
            self.ra_success_rate,
            self.ra_collision_rate,
            self.ra_idle_rate,
            self.mean_delay_us,
        ]
    }

    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6}",
            self.point.bandwidth_mhz,
            self.point.n_stas,
            self.point.n_ra,
            self.run,
            self.seed,
            self.throughput_mbps,
            self.ra_success_rate,
            self.ra_collision_rate,
            self.ra_idle_rate,
            self.mean_delay_us,
        )
    }
}

#[derive(Debug)]
pub struct ExperimentOutput {
    pub rows: Vec<RunRow>,
    pub results_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Clamp to the precision written to disk, so in-memory aggregates equal
/// aggregates recomputed from the file.
fn round6(x: f64) -> f64 {
    format!("{x:.6}").parse().expect("formatted float reparses")
}

fn row_from_metrics(point: SweepPoint, run: u32, seed: u64, m: &Metrics) -> RunRow {
    RunRow {
        point,
        run,
        seed,
        throughput_mbps: round6(m.throughput_mbps()),
        ra_success_rate: round6(m.bsrp_ra.success_rate()),
        ra_collision_rate: round6(m.bsrp_ra.collision_rate()),
        ra_idle_rate: round6(m.bsrp_ra.idle_rate()),
        mean_delay_us: round6(m.mean_delay_us()),
    }
}

/// All (sweep point, run) jobs in output order.
pub fn job_list(spec: &ExperimentSpec) -> Vec<(SweepPoint, u32)> {
    let mut jobs = Vec::new();
    for &bandwidth_mhz in &spec.bandwidth_list {
        for &n_stas in &spec.n_stas_list {
            for &n_ra in &spec.n_ra_list {
                for run in 0..spec.n_runs {
                    jobs.push((SweepPoint { bandwidth_mhz, n_stas, n_ra }, run));
                }
            }
        }
    }
    jobs
}

/// Runs the whole sweep and writes `results.csv` and `summary.csv` into
/// `out_dir` (plus one trace log per run when tracing is on).
pub fn run_experiments(
    spec: &ExperimentSpec,
    out_dir: &Path,
    jobs: Option<usize>,
) -> anyhow::Result<ExperimentOutput> {
    spec.validate()?;
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .context("building worker pool")?;

    let work = job_list(spec);
    let rows: Vec<RunRow> = pool.install(|| {
        work.par_iter()
            .map(|&(point, run)| run_one(spec, point, run, out_dir))
            .collect::<anyhow::Result<Vec<_>>>()
    })?;

    let results_path = out_dir.join("results.csv");
    write_results(&results_path, &rows)?;
    let summary_path = out_dir.join("summary.csv");
    write_summary(&summary_path, &rows, spec.n_runs)?;

    Ok(ExperimentOutput { rows, results_path, summary_path })
}

fn run_one(
    spec: &ExperimentSpec,
    point: SweepPoint,
    run: u32,
    out_dir: &Path,
) -> anyhow::Result<RunRow> {
    let mut cfg: SimConfig = spec.point_config(point.bandwidth_mhz, point.n_stas, point.n_ra);
    cfg.seed = spec.base.seed.wrapping_add(run as u64);
    let metrics = if spec.trace {
        let (metrics, trace) = engine::run_traced(&cfg).map_err(|e| anyhow::anyhow!("{point}: {e}"))?;
        let name = format!(
            "trace_bw{}_nsta{}_nra{}_run{run}.log",
            point.bandwidth_mhz, point.n_stas, point.n_ra
        );
        let mut file = fs::File::create(out_dir.join(&name))
            .with_context(|| format!("cannot create trace log {name}"))?;
        for rec in &trace {
            writeln!(file, "{}", rec.render())?;
        }
        metrics
    } else {
        engine::run(&cfg).map_err(|e| anyhow::anyhow!("{point}: {e}"))?
    };
    Ok(row_from_metrics(point, run, cfg.seed, &metrics))
}

fn write_results(path: &Path, rows: &[RunRow]) -> anyhow::Result<()> {
    let mut out = String::with_capacity(rows.len() * 96 + 128);
    out.push_str(RESULTS_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

const METRIC_NAMES: [&str; 5] =
    ["throughput_mbps", "ra_success_rate", "ra_collision_rate", "ra_idle_rate", "mean_delay_us"];

fn write_summary(path: &Path, rows: &[RunRow], n_runs: u32) -> anyhow::Result<()> {
    let mut out = String::new();
    out.push_str("bandwidth_mhz,n_stas,n_ra,n_runs");
    for name in METRIC_NAMES {
        out.push_str(&format!(",{name}_mean,{name}_std"));
    }
    out.push('\n');

    for group in rows.chunks(n_runs.max(1) as usize) {
        let point = group[0].point;
        debug_assert!(group.iter().all(|r| r.point == point));
        out.push_str(&format!("{},{},{},{}", point.bandwidth_mhz, point.n_stas, point.n_ra, group.len()));
        for metric in 0..METRIC_NAMES.len() {
            let values: Vec<f64> = group.iter().map(|r| r.metrics()[metric]).collect();
            let (mean, std) = mean_and_sample_std(&values);
            out.push_str(&format!(",{mean:.6},{std:.6}"));
        }
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Arithmetic mean (in row order) and sample standard deviation; a single
/// run has zero deviation.
pub fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (values.len() - 1) as f64).sqrt())
}

/// Per-point mean throughput over runs, in row order.
pub fn mean_throughput_per_point(rows: &[RunRow]) -> Vec<(SweepPoint, f64)> {
    let mut out: Vec<(SweepPoint, f64)> = Vec::new();
    let mut counts: Vec<u32> = Vec::new();
    for row in rows {
        match out.last_mut() {
            Some((point, sum)) if *point == row.point => {
                *sum += row.throughput_mbps;
                *counts.last_mut().unwrap() += 1;
            }
            _ => {
                out.push((row.point, row.throughput_mbps));
                counts.push(1);
            }
        }
    }
    for ((_, sum), count) in out.iter_mut().zip(counts) {
        *sum /= count as f64;
    }
    out
}
