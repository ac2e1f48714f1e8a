//! Simulator-versus-estimator comparison.

use uorasim_core::analytics;

use crate::config::ExperimentSpec;
use crate::experiment::{mean_throughput_per_point, RunRow, SweepPoint};

#[derive(Debug, Clone)]
pub struct OracleComparison {
    pub point: SweepPoint,
    pub sim_mbps: f64,
    pub estimate_mbps: f64,
    pub rel_deviation: f64,
    pub pass: bool,
}

impl OracleComparison {
    pub fn report_line(&self, tolerance: f64) -> String {
        format!(
            "{}: sim={:.3} Mbps estimate={:.3} Mbps deviation={:.2}% (tolerance {:.1}%) {}",
            self.point,
            self.sim_mbps,
            self.estimate_mbps,
            self.rel_deviation * 100.0,
            tolerance * 100.0,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Compares the mean simulated throughput of every sweep point against the
/// analytic saturation estimate. Returns the per-point verdicts and whether
/// all of them passed.
pub fn compare_with_oracle(
    spec: &ExperimentSpec,
    rows: &[RunRow],
) -> anyhow::Result<(Vec<OracleComparison>, bool)> {
    let mut comparisons = Vec::new();
    let mut all_pass = true;
    for (point, sim_mbps) in mean_throughput_per_point(rows) {
        let cfg = spec.point_config(point.bandwidth_mhz, point.n_stas, point.n_ra);
        let estimate_mbps = analytics::saturation_throughput_estimate_with(&cfg, spec.mc_cycles)
            .map_err(|e| anyhow::anyhow!("{point}: {e}"))?;
        let rel_deviation = if estimate_mbps > 0.0 {
            (sim_mbps - estimate_mbps).abs() / estimate_mbps
        } else if sim_mbps.abs() < 1e-9 {
            0.0
        } else {
            f64::INFINITY
        };
        let pass = rel_deviation <= spec.oracle_tolerance;
        all_pass &= pass;
        comparisons.push(OracleComparison { point, sim_mbps, estimate_mbps, rel_deviation, pass });
    }
    Ok((comparisons, all_pass))
}
