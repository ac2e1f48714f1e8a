//! Independent validation oracles.
//!
//! Two kinds of cross-checks live here, deliberately built without the event
//! engine so they can catch its mistakes:
//!
//! * a balls-into-bins contention oracle — with `n` stations each picking
//!   one of `m` RA RUs uniformly, the expected number of decodable (lone)
//!   transmissions is `n·(1 − 1/m)^(n−1)`, and the full distribution of that
//!   count is available by exhaustive enumeration or Monte Carlo sampling;
//! * a cycle-time throughput estimator — prices one uplink OFDMA exchange
//!   through the same [`DurationModel`] the engine uses and combines it with
//!   the expected number of served stations per cycle, obtained by running
//!   the *actual* scheduler and back-off state machines cycle by cycle
//!   (which doubles as a cross-implementation check of those modules).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::backoff::{TriggerDecision, UoraState};
use crate::engine::{ConfigError, DurationModel, SimConfig};
use crate::numeric::{powi, sqrt};
use crate::phy::{resolve_reception, RuOutcome};
use crate::rng::actor_rng;
use crate::scheduler::ApScheduler;
use crate::wire::BufferStatusReport;
use crate::{Aid, Nanos};

/// Enumeration limit: inputs with `m^n` beyond this fall back to sampling.
pub const EXACT_ENUMERATION_BOUND: u64 = 10_000_000;

/// Default sample count for the Monte Carlo fallback.
pub const MC_SAMPLES: u64 = 1_000_000;

/// Default virtual-cycle count for the served-stations estimate.
pub const MC_CYCLES: u64 = 1_000_000;

/// Offset separating oracle random streams from engine actor streams.
const ORACLE_STREAM_BASE: u64 = 1 << 33;

/// Expected number of RUs holding exactly one transmitter when `n` stations
/// each pick one of `m` RUs uniformly at random.
pub fn expected_success_count(n: u64, m: u64) -> f64 {
    assert!(m >= 1, "at least one RA RU required");
    if n == 0 {
        return 0.0;
    }
    n as f64 * powi(1.0 - 1.0 / m as f64, n - 1)
}

/// Distribution of the number of lone-transmitter RUs.
#[derive(Debug, Clone)]
pub struct SuccessDistribution {
    /// Probability of each success count; sums to 1 within 1e-12.
    pub pmf: BTreeMap<u32, f64>,
    /// Per-bin standard error; empty for exact enumeration.
    pub std_error: BTreeMap<u32, f64>,
    pub exact: bool,
    /// Assignments enumerated or samples drawn.
    pub weight: u64,
}

impl SuccessDistribution {
    pub fn mean(&self) -> f64 {
        self.pmf.iter().map(|(&k, &p)| k as f64 * p).sum()
    }

    pub fn probability(&self, k: u32) -> f64 {
        self.pmf.get(&k).copied().unwrap_or(0.0)
    }
}

/// Exact or sampled distribution of successes for `n` stations over `m` RUs,
/// choosing exhaustive enumeration whenever `m^n` stays within
/// [`EXACT_ENUMERATION_BOUND`].
pub fn success_distribution(n: u32, m: u32) -> SuccessDistribution {
    assert!(m >= 1, "at least one RA RU required");
    if assignments_within_bound(n, m) {
        success_distribution_exact(n, m)
    } else {
        success_distribution_sampled(n, m, MC_SAMPLES, 0xBA115)
    }
}

fn assignments_within_bound(n: u32, m: u32) -> bool {
    let mut total: u64 = 1;
    for _ in 0..n {
        total = match total.checked_mul(m as u64) {
            Some(t) if t <= EXACT_ENUMERATION_BOUND => t,
            _ => return false,
        };
    }
    true
}

/// Exhaustive enumeration over all `m^n` RU assignments.
pub fn success_distribution_exact(n: u32, m: u32) -> SuccessDistribution {
    assert!(assignments_within_bound(n, m), "m^n exceeds the enumeration bound");
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    let mut assignment = vec![0u32; n as usize];
    let mut total: u64 = 0;
    loop {
        total += 1;
        *counts.entry(count_singletons(&assignment, m)).or_insert(0) += 1;
        // Odometer increment over base-m digits.
        let mut pos = 0;
        loop {
            if pos == assignment.len() {
                let pmf = counts
                    .into_iter()
                    .map(|(k, c)| (k, c as f64 / total as f64))
                    .collect();
                return SuccessDistribution {
                    pmf,
                    std_error: BTreeMap::new(),
                    exact: true,
                    weight: total,
                };
            }
            assignment[pos] += 1;
            if assignment[pos] < m {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// Monte Carlo sampling of the success-count distribution.
pub fn success_distribution_sampled(n: u32, m: u32, samples: u64, seed: u64) -> SuccessDistribution {
    assert!(m >= 1 && samples >= 1);
    let mut rng = actor_rng(seed, ORACLE_STREAM_BASE);
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    let mut bins = vec![0u32; m as usize];
    for _ in 0..samples {
        bins.fill(0);
        for _ in 0..n {
            bins[rng.gen_range(0..m as usize)] += 1;
        }
        let k = bins.iter().filter(|&&b| b == 1).count() as u32;
        *counts.entry(k).or_insert(0) += 1;
    }
    let mut pmf = BTreeMap::new();
    let mut std_error = BTreeMap::new();
    for (k, c) in counts {
        let p = c as f64 / samples as f64;
        pmf.insert(k, p);
        std_error.insert(k, sqrt(p * (1.0 - p) / samples as f64));
    }
    SuccessDistribution { pmf, std_error, exact: false, weight: samples }
}

fn count_singletons(assignment: &[u32], m: u32) -> u32 {
    let mut bins = [0u16; 64];
    debug_assert!(m as usize <= bins.len());
    for &ru in assignment {
        bins[ru as usize] += 1;
    }
    bins[..m as usize].iter().filter(|&&b| b == 1).count() as u32
}

/// Deterministic cycle-time model: the duration of one full uplink OFDMA
/// exchange under saturation, with every phase present and control frames
/// sized for `min(n_stas, layout)` served stations.
///
/// `T = gap + T(BSRP TF) + T(BSR) + T(M-BA) + T(Basic TF) + T(data) +
/// T(M-BA) + 5·SIFS`; with nothing to serve the cycle stops after the BSR
/// window.
pub fn cycle_time_estimate(cfg: &SimConfig) -> Result<Nanos, ConfigError> {
    let dm = DurationModel::from_config(cfg)?;
    let count = dm.layout().count();
    if cfg.n_ra > count {
        return Err(ConfigError::NRaExceedsLayout { n_ra: cfg.n_ra, layout_count: count });
    }
    let served = (cfg.n_stas as usize).min(count - cfg.n_ra_basic.min(count));
    let sifs = dm.sifs_ns();

    let mut t = dm.access_gap_ns() + dm.tf_ns(count) + sifs;
    t += crate::us_to_ns(dm.bsr_phase_ul_us() as u64);
    if served > 0 {
        t += sifs + dm.ba_ns(served);
        let window_cap = dm.max_mpdus_in(dm.data_window_ns());
        let data_ul = dm.round_ul_us(dm.data_burst_ns(window_cap));
        t += sifs + dm.tf_ns(cfg.n_ra_basic + served);
        t += sifs + crate::us_to_ns(data_ul as u64);
        t += sifs + dm.ba_ns(served);
    }
    Ok(t)
}

/// Mean stations served (granted a data RU) per cycle, estimated by running
/// the real scheduler and back-off machines for `mc_cycles` virtual cycles
/// under full-buffer saturation, without the event engine.
pub fn estimate_served_per_cycle(cfg: &SimConfig, mc_cycles: u64) -> Result<f64, ConfigError> {
    assert!(mc_cycles >= 1);
    let dm = DurationModel::from_config(cfg)?;
    let layout = *dm.layout();
    if cfg.n_ra > layout.count() {
        return Err(ConfigError::NRaExceedsLayout { n_ra: cfg.n_ra, layout_count: layout.count() });
    }
    let policy = cfg.scheduler_policy();
    policy.validate(&layout)?;
    if cfg.n_stas == 0 {
        return Ok(0.0);
    }

    let window_cap = dm.max_mpdus_in(dm.data_window_ns());
    let grant_bytes = dm.burst_bytes(window_cap);

    let mut sched = ApScheduler::new((1..=cfg.n_stas).collect());
    let mut stas: Vec<(UoraState, crate::ActorRng)> = (1..=cfg.n_stas)
        .map(|aid| {
            let mut rng = actor_rng(cfg.seed, ORACLE_STREAM_BASE + aid as u64);
            let uora = UoraState::initialize(cfg.eocw_min, cfg.eocw_max, &mut rng)?;
            Ok((uora, rng))
        })
        .collect::<Result<_, crate::backoff::BackoffConfigError>>()?;

    let mut served_total: u64 = 0;
    for _ in 0..mc_cycles {
        let tf = sched.build_bsrp_trigger(&policy, &layout, 0)?;
        let n_ra = tf.n_ra();
        let ra_indices = tf.ra_ru_indices();

        // Saturation: every station always has data and something new to
        // report, so everyone not polled contends.
        let mut txs: Vec<(Aid, usize)> = Vec::new();
        let mut ra_participants: Vec<Aid> = Vec::new();
        for aid in 1..=cfg.n_stas {
            if let Some(alloc) = tf.sa_allocation_for(aid) {
                txs.push((aid, alloc.ru_index as usize));
                continue;
            }
            let (uora, rng) = &mut stas[aid as usize - 1];
            if uora.process_trigger(n_ra) == TriggerDecision::Transmit {
                let ru = uora.select_ra_ru(&ra_indices, rng);
                txs.push((aid, ru as usize));
                ra_participants.push(aid);
            }
        }

        let outcomes = resolve_reception(&txs, layout.count());
        let mut reports = Vec::new();
        for outcome in &outcomes {
            if let RuOutcome::Success(aid) = outcome {
                reports.push(BufferStatusReport::new(*aid, u32::MAX).expect("valid AID"));
            }
        }
        for aid in ra_participants {
            let delivered = matches!(outcomes[find_ru(&txs, aid)], RuOutcome::Success(a) if a == aid);
            let (uora, rng) = &mut stas[aid as usize - 1];
            if delivered {
                uora.on_success(rng);
            } else {
                uora.on_failure(rng);
            }
        }
        sched.ingest_bsr_results(&reports);

        if let Some(plan) = sched.plan_basic_trigger(&policy, &layout, &[]) {
            served_total += plan.sa_grants.len() as u64;
            for aid in plan.sa_grants {
                sched.note_delivered(aid, grant_bytes);
            }
        }
    }
    Ok(served_total as f64 / mc_cycles as f64)
}

fn find_ru(txs: &[(Aid, usize)], aid: Aid) -> usize {
    txs.iter().find(|&&(a, _)| a == aid).map(|&(_, ru)| ru).expect("participant transmitted")
}

/// Saturation throughput in bits/µs (= Mbps): expected served stations per
/// cycle times the bits delivered per grant, over the cycle time.
pub fn saturation_throughput_estimate(cfg: &SimConfig) -> Result<f64, ConfigError> {
    saturation_throughput_estimate_with(cfg, MC_CYCLES)
}

pub fn saturation_throughput_estimate_with(
    cfg: &SimConfig,
    mc_cycles: u64,
) -> Result<f64, ConfigError> {
    let dm = DurationModel::from_config(cfg)?;
    let window_cap = dm.max_mpdus_in(dm.data_window_ns());
    let bits_per_grant = window_cap as f64 * cfg.payload_bytes as f64 * 8.0;
    let served = estimate_served_per_cycle(cfg, mc_cycles)?;
    let cycle_ns = cycle_time_estimate(cfg)?;
    if cycle_ns == 0 {
        return Ok(0.0);
    }
    Ok(served * bits_per_grant / (cycle_ns as f64 / 1000.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phy::RuTones;

    #[test]
    fn expected_successes_trivial_cases() {
        assert_eq!(expected_success_count(0, 5), 0.0);
        assert_eq!(expected_success_count(1, 1), 1.0);
        assert_eq!(expected_success_count(1, 9), 1.0);
    }

    #[test]
    fn expected_successes_matches_brute_force_3_over_3() {
        // All 27 assignments of 3 stations over 3 RUs hold 36 singleton RUs.
        let dist = success_distribution_exact(3, 3);
        assert_eq!(dist.weight, 27);
        let mean = dist.mean();
        assert!((mean - 4.0 / 3.0).abs() < 1e-12, "mean={mean}");
        assert!((expected_success_count(3, 3) - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_small_cases() {
        // Two stations, two RUs: both collide or both succeed.
        let d = success_distribution(2, 2);
        assert!(d.exact);
        assert!((d.probability(0) - 0.5).abs() < 1e-12);
        assert!((d.probability(2) - 0.5).abs() < 1e-12);
        assert_eq!(d.probability(1), 0.0);

        let d = success_distribution(1, 5);
        assert!((d.probability(1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_sums_to_one_and_mean_matches_formula() {
        for (n, m) in [(2u32, 2u32), (3, 3), (5, 4), (7, 9), (6, 2)] {
            let d = success_distribution_exact(n, m);
            let sum: f64 = d.pmf.values().sum();
            assert!((sum - 1.0).abs() < 1e-12, "n={n} m={m} sum={sum}");
            let want = expected_success_count(n as u64, m as u64);
            assert!((d.mean() - want).abs() < 1e-9, "n={n} m={m}");
        }
    }

    #[test]
    fn monte_carlo_agrees_with_enumeration() {
        let exact = success_distribution_exact(6, 4);
        let sampled = success_distribution_sampled(6, 4, 200_000, 42);
        for (&k, &p) in &exact.pmf {
            let got = sampled.probability(k);
            let se = sampled.std_error.get(&k).copied().unwrap_or(0.0).max(1e-9);
            assert!((got - p).abs() <= 3.0 * se, "k={k} exact={p} sampled={got}");
        }
    }

    #[test]
    fn large_inputs_fall_back_to_sampling() {
        let d = success_distribution(30, 9); // 9^30 far beyond the bound
        assert!(!d.exact);
        assert_eq!(d.weight, MC_SAMPLES);
        let sum: f64 = d.pmf.values().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        let want = expected_success_count(30, 9);
        let se: f64 = 3.0 / sqrt(MC_SAMPLES as f64); // generous bound
        assert!((d.mean() - want).abs() < 3.0 * se + 0.02, "mean={} want={want}", d.mean());
    }

    #[test]
    fn expected_successes_bounded_by_n_and_m() {
        for n in 0..=60u64 {
            for m in 1..=12u64 {
                let e = expected_success_count(n, m);
                assert!(e <= (n.min(m) as f64) + 1e-12, "n={n} m={m} e={e}");
                assert!(e >= 0.0);
            }
        }
    }

    #[test]
    fn expected_successes_unimodal_with_peak_near_m() {
        for m in 2..=12u64 {
            let mut best_n = 1;
            let mut best = 0.0;
            let mut decreasing = false;
            let mut prev = 0.0;
            for n in 1..=10 * m {
                let e = expected_success_count(n, m);
                if e > best {
                    best = e;
                    best_n = n;
                }
                if n > 1 {
                    if e < prev {
                        decreasing = true;
                    } else {
                        assert!(!decreasing, "second rise at n={n} m={m}");
                    }
                }
                prev = e;
            }
            assert!(best_n.abs_diff(m) <= 1, "m={m} peak at {best_n}");
        }
    }

    fn table1_config(bandwidth_mhz: u16, ru_tones: RuTones) -> SimConfig {
        SimConfig { bandwidth_mhz, ru_tones, n_stas: 9, n_ra: 0, ..SimConfig::default() }
    }

    #[test]
    fn cycle_time_reference_value_at_20mhz() {
        let mut cfg = table1_config(20, RuTones::Tones26);
        cfg.n_ra = 9;
        let t = cycle_time_estimate(&cfg).unwrap();
        // 124 gap + 48 TF + 96 BSR + 52 BA + 48 TF + 1360 data + 52 BA + 5*16 SIFS.
        assert_eq!(t, crate::us_to_ns(124 + 48 + 96 + 52 + 48 + 1360 + 52 + 80));
    }

    #[test]
    fn degenerate_single_station_estimate_is_one_grant_per_cycle() {
        let cfg = SimConfig { n_stas: 1, n_ra: 9, ..SimConfig::default() };
        let served = estimate_served_per_cycle(&cfg, 20_000).unwrap();
        assert!(served > 0.99, "served={served}");
        let throughput = saturation_throughput_estimate_with(&cfg, 20_000).unwrap();
        let cycle_us = cycle_time_estimate(&cfg).unwrap() as f64 / 1000.0;
        let want = 1700.0 * 8.0 / cycle_us;
        assert!((throughput - want).abs() / want < 0.02, "got {throughput}, want ~{want}");
    }

    #[test]
    fn estimator_ratio_between_bandwidths_is_roughly_fourfold() {
        let mut narrow = table1_config(20, RuTones::Tones26);
        narrow.n_ra = 9;
        let mut wide = table1_config(80, RuTones::Tones106);
        wide.n_ra = 8;
        let t_narrow = saturation_throughput_estimate_with(&narrow, 50_000).unwrap();
        let t_wide = saturation_throughput_estimate_with(&wide, 50_000).unwrap();
        let ratio = t_wide / t_narrow;
        assert!((3.5..=4.3).contains(&ratio), "ratio={ratio}");
    }

    #[test]
    fn throughput_estimate_respects_capacity_bound() {
        for (bw, tones, n_ra) in [(20, RuTones::Tones26, 9), (80, RuTones::Tones106, 8)] {
            let mut cfg = table1_config(bw, tones);
            cfg.n_ra = n_ra;
            cfg.n_stas = 45;
            let dm = DurationModel::from_config(&cfg).unwrap();
            let per_ru_rate = crate::phy::RateTable::standard()
                .rate(tones, cfg.mcs_index, cfg.gi_ns)
                .unwrap()
                .bits_per_us;
            let cap = dm.layout().count() as f64 * per_ru_rate;
            let t = saturation_throughput_estimate_with(&cfg, 20_000).unwrap();
            assert!(t <= cap, "estimate {t} exceeds capacity {cap}");
        }
    }

    #[test]
    fn zero_stations_estimate_zero() {
        let cfg = SimConfig { n_stas: 0, ..SimConfig::default() };
        assert_eq!(estimate_served_per_cycle(&cfg, 1000).unwrap(), 0.0);
        assert_eq!(saturation_throughput_estimate_with(&cfg, 1000).unwrap(), 0.0);
    }
}
