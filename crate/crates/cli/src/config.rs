//! Experiment configuration: a line-oriented `key = value` file over the
//! simulation defaults, with sweep lists for station counts, RA RU counts
//! and bandwidths.

use std::fmt;
use std::path::PathBuf;

use uorasim_core::engine::{SimConfig, MU_EDCA_TIMER_WHOLE_RUN_US};
use uorasim_core::phy::{RateTable, RuLayout, RuTones};

/// A full experiment: sweep lists across a shared base configuration.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub base: SimConfig,
    pub bandwidth_list: Vec<u16>,
    pub n_stas_list: Vec<u16>,
    pub n_ra_list: Vec<usize>,
    /// RU size override; `None` picks the bandwidth-matched default
    /// (26-tone in 20 MHz, 52 in 40, 106 in 80, 242 in 160).
    pub ru_tones: Option<RuTones>,
    pub n_runs: u32,
    pub oracle_tolerance: f64,
    pub mc_cycles: u64,
    pub trace: bool,
    pub out_dir: Option<PathBuf>,
    pub rate_table_file: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            base: SimConfig::default(),
            bandwidth_list: vec![20],
            n_stas_list: vec![9, 18, 27, 36, 45, 54, 63, 72, 81, 90, 99],
            n_ra_list: vec![9],
            ru_tones: None,
            n_runs: 5,
            oracle_tolerance: 0.10,
            mc_cycles: 1_000_000,
            trace: false,
            out_dir: None,
            rate_table_file: None,
        }
    }
}

/// Default RU size for a bandwidth when none is configured.
pub fn default_tones_for_bandwidth(bandwidth_mhz: u16) -> Option<RuTones> {
    match bandwidth_mhz {
        20 => Some(RuTones::Tones26),
        40 => Some(RuTones::Tones52),
        80 => Some(RuTones::Tones106),
        160 => Some(RuTones::Tones242),
        _ => None,
    }
}

impl ExperimentSpec {
    /// The simulation configuration of one sweep point (run seed unset).
    pub fn point_config(&self, bandwidth_mhz: u16, n_stas: u16, n_ra: usize) -> SimConfig {
        let ru_tones = self
            .ru_tones
            .or_else(|| default_tones_for_bandwidth(bandwidth_mhz))
            .unwrap_or(RuTones::Tones26);
        SimConfig { bandwidth_mhz, ru_tones, n_stas, n_ra, ..self.base.clone() }
    }

    /// Validates every sweep combination up front so nothing fails mid-run.
    pub fn validate(&self) -> Result<(), ConfigFileError> {
        if self.n_runs == 0 {
            return Err(ConfigFileError::invalid("n_runs must be at least 1"));
        }
        for &bw in &self.bandwidth_list {
            let tones = self
                .ru_tones
                .or_else(|| default_tones_for_bandwidth(bw))
                .ok_or_else(|| ConfigFileError::invalid(format!("unsupported bandwidth {bw}")))?;
            let layout = RuLayout::new(bw, tones)
                .map_err(|e| ConfigFileError::invalid(format!("{e}")))?;
            for &n_ra in &self.n_ra_list {
                if n_ra > layout.count() {
                    return Err(ConfigFileError::invalid(format!(
                        "n_ra {n_ra} exceeds the {}-RU layout of {bw} MHz / {tones} RUs",
                        layout.count(),
                        tones = tones
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct ConfigFileError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigFileError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self { line: Some(line), message: message.into() }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self { line: None, message: message.into() }
    }
}

impl fmt::Display for ConfigFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "config line {line}: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigFileError {}

/// Loads an experiment spec from a config file.
pub fn load_config(path: &std::path::Path) -> anyhow::Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", path.display()))?;
    let mut spec = parse_config(&text)?;
    if let Some(rate_path) = spec.rate_table_file.clone() {
        let resolved = if rate_path.is_relative() {
            path.parent().map(|p| p.join(&rate_path)).unwrap_or(rate_path)
        } else {
            rate_path
        };
        let rate_text = std::fs::read_to_string(&resolved)
            .map_err(|e| anyhow::anyhow!("cannot read rate table {}: {e}", resolved.display()))?;
        spec.base.rate_overrides = RateTable::parse_overrides(&rate_text)?;
    }
    spec.validate()?;
    Ok(spec)
}

/// Parses the `key = value` format. Unknown keys, duplicate keys and type
/// mismatches are rejected with the offending line number; unspecified keys
/// keep their defaults. `#` starts a comment; lists are comma-separated.
pub fn parse_config(text: &str) -> Result<ExperimentSpec, ConfigFileError> {
    let mut spec = ExperimentSpec::default();
    let mut packet_interval_set = false;
    let mut txop_set = false;
    let mut seen: Vec<String> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigFileError::at(line, format!("expected `key = value`, got `{content}`")));
        };
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(ConfigFileError::at(line, format!("empty value for `{key}`")));
        }
        if seen.iter().any(|k| k == key) {
            return Err(ConfigFileError::at(line, format!("duplicate key `{key}`")));
        }
        seen.push(key.to_string());

        match key {
            "bandwidth_mhz" => spec.bandwidth_list = parse_list(line, key, value)?,
            "n_stas" => spec.n_stas_list = parse_list(line, key, value)?,
            "n_ra" => spec.n_ra_list = parse_list(line, key, value)?,
            "ru_tones" => {
                let tones: u16 = parse_scalar(line, key, value)?;
                spec.ru_tones = Some(RuTones::from_tone_count(tones).ok_or_else(|| {
                    ConfigFileError::at(line, format!("ru_tones {tones} is not one of 26/52/106/242"))
                })?);
            }
            "mcs_index" => spec.base.mcs_index = parse_scalar(line, key, value)?,
            "gi_us" => {
                let gi: f64 = parse_scalar(line, key, value)?;
                spec.base.gi_ns = (gi * 1000.0).round() as u32;
            }
            "txop_us" => {
                spec.base.txop_us = parse_scalar(line, key, value)?;
                txop_set = true;
            }
            "beacon_interval_us" => spec.base.beacon_interval_us = parse_scalar(line, key, value)?,
            "eocw_min" => spec.base.eocw_min = parse_scalar(line, key, value)?,
            "eocw_max" => spec.base.eocw_max = parse_scalar(line, key, value)?,
            "access_req_interval_us" => {
                spec.base.access_req_interval_us = parse_scalar(line, key, value)?
            }
            "payload_bytes" => spec.base.payload_bytes = parse_scalar(line, key, value)?,
            "packet_interval_us" => {
                spec.base.packet_interval_us = parse_scalar(line, key, value)?;
                packet_interval_set = true;
            }
            "sim_duration_us" => spec.base.sim_duration_us = parse_scalar(line, key, value)?,
            "sifs_us" => spec.base.sifs_us = parse_scalar(line, key, value)?,
            "seed" => spec.base.seed = parse_scalar(line, key, value)?,
            "n_runs" => spec.n_runs = parse_scalar(line, key, value)?,
            "n_ra_basic" => spec.base.n_ra_basic = parse_scalar(line, key, value)?,
            "allow_stale_allocation" => {
                spec.base.allow_stale_allocation = parse_bool(line, key, value)?
            }
            "capture" => spec.base.capture_enabled = parse_bool(line, key, value)?,
            "mu_edca_aifsn" => spec.base.mu_edca_aifsn = parse_scalar(line, key, value)?,
            "mu_edca_timer_us" => {
                spec.base.mu_edca_timer_us = if value == "whole_run" {
                    MU_EDCA_TIMER_WHOLE_RUN_US
                } else {
                    parse_scalar(line, key, value)?
                };
            }
            "preamble_us" => spec.base.preamble_us = parse_scalar(line, key, value)?,
            "legacy_preamble_us" => spec.base.legacy_preamble_us = parse_scalar(line, key, value)?,
            "basic_rate_mbps" => spec.base.basic_rate_mbps = parse_scalar(line, key, value)?,
            "mpdu_overhead_bytes" => spec.base.mpdu_overhead_bytes = parse_scalar(line, key, value)?,
            "bsr_frame_bytes" => spec.base.bsr_frame_bytes = parse_scalar(line, key, value)?,
            "tf_base_bytes" => spec.base.tf_base_bytes = parse_scalar(line, key, value)?,
            "tf_per_alloc_bytes" => spec.base.tf_per_alloc_bytes = parse_scalar(line, key, value)?,
            "ba_base_bytes" => spec.base.ba_base_bytes = parse_scalar(line, key, value)?,
            "ba_per_sta_bytes" => spec.base.ba_per_sta_bytes = parse_scalar(line, key, value)?,
            "beacon_bytes" => spec.base.beacon_bytes = parse_scalar(line, key, value)?,
            "oracle_tolerance" => spec.oracle_tolerance = parse_scalar(line, key, value)?,
            "mc_cycles" => spec.mc_cycles = parse_scalar(line, key, value)?,
            "trace" => spec.trace = parse_bool(line, key, value)?,
            "out_dir" => spec.out_dir = Some(PathBuf::from(value)),
            "rate_table_file" => spec.rate_table_file = Some(PathBuf::from(value)),
            other => {
                return Err(ConfigFileError::at(line, format!("unknown key `{other}`")));
            }
        }
    }

    // The default packet interval tracks the TXOP (one quarter of it).
    if txop_set && !packet_interval_set {
        spec.base.packet_interval_us = (spec.base.txop_us / 4).max(1);
    }
    Ok(spec)
}

fn parse_scalar<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigFileError> {
    value.parse().map_err(|_| {
        ConfigFileError::at(line, format!("cannot parse `{value}` as a value for `{key}`"))
    })
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, ConfigFileError> {
    match value {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(ConfigFileError::at(line, format!("`{key}` expects a boolean, got `{other}`"))),
    }
}

fn parse_list<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<Vec<T>, ConfigFileError> {
    value
        .split(',')
        .map(str::trim)
        .map(|item| {
            item.parse().map_err(|_| {
                ConfigFileError::at(line, format!("cannot parse `{item}` in list `{key}`"))
            })
        })
        .collect()
}
