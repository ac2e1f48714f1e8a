//! Deterministic discrete-event simulation loop.
//!
//! A run advances through repeated uplink OFDMA cycles:
//!
//! ```text
//! access gap | BSRP TF | SIFS | BSR phase | SIFS | M-BA |
//!       SIFS | Basic TF | SIFS | DATA phase | SIFS | M-BA
//! ```
//!
//! Stations contend for RA RUs in the BSR phase through the OBO/OCW state
//! machine, the AP folds received reports into its scheduler, and the Basic
//! trigger re-allocates the whole RU layout for data. Beacons are inserted
//! on their interval boundaries between cycles; a fixed access-request gap
//! precedes every cycle (the AP never contends with stations — station-side
//! EDCA must be disabled for the whole run, which the engine enforces).
//!
//! Determinism: all randomness comes from per-actor streams derived from
//! `(seed, aid)`, simultaneous events resolve AP-first then by ascending
//! AID, and time is integer nanoseconds, so identical `(config, seed)`
//! yields bit-identical [`Metrics`] and traces on every platform.

mod config;
mod event;
mod metrics;
mod node;
mod script;
mod timing;
mod trace;

pub use config::{ConfigError, SimConfig, MU_EDCA_TIMER_WHOLE_RUN_US};
pub use event::{EventKind, EventQueue, ScheduledEvent};
pub use metrics::{AirtimeBreakdown, Metrics, RaPhaseStats, StaMetrics};
pub use script::Script;
pub use timing::DurationModel;
pub use trace::{Actor, TraceKind, TraceRecord};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::backoff::{TriggerDecision, UoraState};
use crate::phy::{resolve_reception, RuOutcome};
use crate::rng::actor_rng;
use crate::scheduler::ApScheduler;
use crate::wire::{BufferStatusReport, MultiStaBlockAck, RuAllocation, TriggerFrame, TriggerVariant};
use crate::{Aid, Nanos, RA_AID};

use node::{Packet, StaNode};

/// Runs one simulation to completion.
pub fn run(cfg: &SimConfig) -> Result<Metrics, ConfigError> {
    Sim::build(cfg, &Script::default(), false).map(|mut sim| {
        sim.run_to_completion();
        sim.finish().0
    })
}

/// Runs one simulation with event tracing enabled.
pub fn run_traced(cfg: &SimConfig) -> Result<(Metrics, Vec<TraceRecord>), ConfigError> {
    run_scripted(cfg, &Script::default(), true)
}

/// Runs one simulation under scripted overrides.
pub fn run_scripted(
    cfg: &SimConfig,
    script: &Script,
    trace: bool,
) -> Result<(Metrics, Vec<TraceRecord>), ConfigError> {
    Sim::build(cfg, script, trace).map(|mut sim| {
        sim.run_to_completion();
        sim.finish()
    })
}

struct Sim<'a> {
    cfg: &'a SimConfig,
    dm: DurationModel,
    script: &'a Script,
    stas: Vec<StaNode>,
    sched: ApScheduler,
    events: EventQueue,
    beacon_pending: u32,
    now: Nanos,
    sim_end: Nanos,
    max_cycles: u64,
    metrics: Metrics,
    trace: Option<Vec<TraceRecord>>,
}

/// One station's uplink transmission within a solicited phase.
struct PhaseTx {
    aid: Aid,
    ru_index: u8,
    /// Whether this transmission contended on an RA RU (drives back-off).
    random_access: bool,
    /// Queue bytes carried in the BSR, when this is a BSR transmission.
    reported_bytes: u32,
    /// MPDUs in the burst, when this is a data transmission.
    mpdus: u32,
}

impl<'a> Sim<'a> {
    fn build(cfg: &'a SimConfig, script: &'a Script, trace: bool) -> Result<Self, ConfigError> {
        let dm = DurationModel::from_config(cfg)?;
        let layout_count = dm.layout().count();

        if cfg.sim_duration_us == 0 {
            return Err(ConfigError::ZeroSimDuration);
        }
        if cfg.packet_interval_us == 0 {
            return Err(ConfigError::ZeroPacketInterval);
        }
        if cfg.n_stas > 2000 {
            return Err(ConfigError::TooManyStations(cfg.n_stas));
        }
        if cfg.n_ra > layout_count {
            return Err(ConfigError::NRaExceedsLayout { n_ra: cfg.n_ra, layout_count });
        }
        cfg.scheduler_policy().validate(dm.layout())?;
        // The engine cannot model station-side contention: the MU EDCA
        // parameters must disable EDCA for the entire run.
        if cfg.mu_edca_aifsn != 0 || cfg.mu_edca_timer_ns() < cfg.sim_duration_ns() {
            return Err(ConfigError::EdcaContentionRequired);
        }
        // A single data MPDU must fit the TXOP data window, as the traffic
        // model never fragments.
        if cfg.payload_bytes > 0 && cfg.n_stas > 0 {
            let needed = dm.data_burst_ns(1);
            let window = dm.data_window_ns();
            if needed > window {
                return Err(ConfigError::PayloadExceedsDataWindow {
                    needed_ns: needed,
                    window_ns: window,
                });
            }
        }
        validate_script(script, cfg, layout_count)?;

        let mut stas = Vec::with_capacity(cfg.n_stas as usize);
        for aid in 1..=cfg.n_stas {
            let mut rng = actor_rng(cfg.seed, aid as u64);
            let uora = UoraState::initialize(cfg.eocw_min, cfg.eocw_max, &mut rng)?;
            let mut node = StaNode::new(aid, uora, rng);
            node.traffic_enabled = !script.silent_stas.contains(&aid);
            node.forced_initial_obo = script.forced_initial_obo.get(&aid).copied();
            if let Some(choices) = script.forced_ru_choice.get(&aid) {
                node.forced_ru = choices.iter().copied().collect();
            }
            // Announced at association: MU EDCA parameters disabling EDCA.
            node.edca.apply_parameters(cfg.mu_edca_aifsn, 0, 0, cfg.mu_edca_timer_ns(), 0);
            debug_assert!(!node.edca.edca_enabled(0));
            stas.push(node);
        }

        let mut sched = ApScheduler::new((1..=cfg.n_stas).collect());
        for &(aid, bytes) in &script.preknown_status {
            sched.seed_stale_status(aid, bytes);
        }
        if let Some(aid) = script.cursor_start {
            sched.set_cursor_to(aid);
        }

        let mut events = EventQueue::new();
        for sta in &stas {
            if sta.traffic_enabled && cfg.payload_bytes > 0 {
                events.schedule(0, EventKind::PacketArrival { aid: sta.aid });
            }
        }
        if cfg.beacon_interval_us > 0 {
            events.schedule(crate::us_to_ns(cfg.beacon_interval_us), EventKind::Beacon);
        }

        let metrics = Metrics {
            per_sta: (1..=cfg.n_stas)
                .map(|aid| StaMetrics { aid, ..StaMetrics::default() })
                .collect(),
            ..Metrics::default()
        };

        Ok(Self {
            cfg,
            dm,
            script,
            stas,
            sched,
            events,
            beacon_pending: 0,
            now: 0,
            sim_end: cfg.sim_duration_ns(),
            max_cycles: script.max_cycles.unwrap_or(u64::MAX),
            metrics,
            trace: trace.then(Vec::new),
        })
    }

    fn sta(&mut self, aid: Aid) -> &mut StaNode {
        &mut self.stas[aid as usize - 1]
    }

    fn sta_metrics(&mut self, aid: Aid) -> &mut StaMetrics {
        &mut self.metrics.per_sta[aid as usize - 1]
    }

    fn record<F: FnOnce() -> String>(&mut self, kind: TraceKind, actor: Actor, detail: F) {
        if let Some(log) = self.trace.as_mut() {
            log.push(TraceRecord { time_ns: self.now, kind, actor, detail: detail() });
        }
    }

    /// Applies all events due at or before the current time.
    fn drain_events(&mut self) {
        while let Some(ev) = self.events.pop_due(self.now) {
            match ev.kind {
                EventKind::PacketArrival { aid } => {
                    let bytes = self.cfg.payload_bytes;
                    self.sta(aid).enqueue(Packet { bytes, enqueue_ns: ev.time_ns });
                    let m = self.sta_metrics(aid);
                    m.generated_bytes += bytes as u64;
                    m.generated_mpdus += 1;
                    self.metrics.generated_bytes += bytes as u64;
                    self.metrics.generated_mpdus += 1;
                    let next = ev.time_ns + crate::us_to_ns(self.cfg.packet_interval_us as u64);
                    if next < self.sim_end {
                        self.events.schedule(next, EventKind::PacketArrival { aid });
                    }
                }
                EventKind::Beacon => {
                    self.beacon_pending += 1;
                    let next = ev.time_ns + crate::us_to_ns(self.cfg.beacon_interval_us);
                    if next < self.sim_end {
                        self.events.schedule(next, EventKind::Beacon);
                    }
                }
            }
        }
    }

    fn advance(&mut self, duration: Nanos, bucket: fn(&mut AirtimeBreakdown) -> &mut Nanos) {
        *bucket(&mut self.metrics.airtime) += duration;
        self.now += duration;
        self.drain_events();
    }

    fn run_to_completion(&mut self) {
        self.drain_events();
        while self.now < self.sim_end && self.metrics.cycles < self.max_cycles {
            // Beacons queued up mid-cycle go out at the boundary.
            while self.beacon_pending > 0 {
                self.beacon_pending -= 1;
                let beacon_bytes = self.cfg.beacon_bytes;
                self.record(TraceKind::Beacon, Actor::Ap, || format!("bytes={beacon_bytes}"));
                self.metrics.beacon_count += 1;
                self.advance(self.dm.beacon_ns(), |a| &mut a.beacon_ns);
            }
            if self.now >= self.sim_end {
                break;
            }
            self.run_cycle();
        }
        let cycles = self.metrics.cycles;
        self.record(TraceKind::RunEnd, Actor::Ap, || format!("cycles={cycles}"));
    }

    /// One full uplink OFDMA exchange.
    fn run_cycle(&mut self) {
        // AP channel access pause before the exchange.
        self.advance(self.dm.access_gap_ns(), |a| &mut a.access_gap_ns);
        self.metrics.cycles += 1;
        let cycle = self.metrics.cycles;
        self.record(TraceKind::CycleStart, Actor::Ap, || format!("cycle={cycle}"));

        // --- BSRP trigger frame ---
        let bsr_ul_us = self.dm.bsr_phase_ul_us();
        let bsrp = self.build_bsrp(bsr_ul_us);
        self.metrics.bsrp_tf_count += 1;
        self.metrics.unallocated_rus +=
            (self.dm.layout().count() - bsrp.allocations().len()) as u64;
        self.trace_tf(&bsrp);
        self.advance(self.dm.tf_ns(bsrp.allocations().len()), |a| &mut a.tf_ns);

        // --- Stations react to the trigger ---
        let txs = self.stations_process_bsrp(&bsrp);
        self.advance(self.dm.sifs_ns(), |a| &mut a.sifs_ns);

        // --- BSR phase (solicited window elapses whether or not anyone
        //     transmits) ---
        for tx in &txs {
            self.record(TraceKind::BsrTx, Actor::Sta(tx.aid), || {
                format!("ru={} queue_bytes={}", tx.ru_index, tx.reported_bytes)
            });
        }
        let outcomes = self.resolve_phase(&txs, &bsrp, true);
        self.advance(crate::us_to_ns(bsrp.ul_length_us() as u64), |a| &mut a.bsr_phase_ns);

        // --- Multi-STA Block Ack for the BSR phase ---
        let acked = self.acked_set(&outcomes);
        if !acked.is_empty() {
            self.advance(self.dm.sifs_ns(), |a| &mut a.sifs_ns);
            self.record(TraceKind::MbaTx, Actor::Ap, || format!("phase=bsr acked={}", fmt_aids(&acked)));
            self.advance(self.dm.ba_ns(acked.len()), |a| &mut a.ba_ns);
        }
        self.apply_bsr_outcomes(&txs, &acked);

        // --- Basic trigger frame and data phase ---
        let unused_bsr_rus: Vec<u8> = bsrp
            .ra_ru_indices()
            .into_iter()
            .filter(|&ru| !outcomes[ru as usize].is_success())
            .collect();
        self.run_data_phase(&unused_bsr_rus);
    }

    fn build_bsrp(&mut self, ul_length_us: u32) -> TriggerFrame {
        if let Some(m) = self.script.bsrp_ra_only {
            let tones = self.dm.layout().ru_tones();
            let allocations = (0..m)
                .map(|ru| RuAllocation::new(ru as u8, tones, RA_AID).expect("valid RA allocation"))
                .collect();
            TriggerFrame::new(TriggerVariant::Bsrp, ul_length_us, allocations)
                .expect("scripted BSRP trigger is valid")
        } else {
            let layout = *self.dm.layout();
            self.sched
                .build_bsrp_trigger(&self.cfg.scheduler_policy(), &layout, ul_length_us)
                .expect("validated policy builds BSRP triggers")
        }
    }

    /// Runs the UORA procedure on every station for a BSRP trigger and
    /// returns the resulting BSR transmissions.
    fn stations_process_bsrp(&mut self, tf: &TriggerFrame) -> Vec<PhaseTx> {
        let n_ra = tf.n_ra();
        let ra_indices = tf.ra_ru_indices();
        let force_eligible = self.script.force_all_eligible;
        let mut txs = Vec::new();

        for idx in 0..self.stas.len() {
            let aid = (idx + 1) as Aid;
            // A station polled on a scheduled RU answers there and skips
            // random access for this trigger.
            if let Some(alloc) = tf.sa_allocation_for(aid) {
                let ru_index = alloc.ru_index;
                let sta = &mut self.stas[idx];
                let reported = sta.reportable_queue_bytes();
                sta.was_pending = sta.pending_bsr();
                txs.push(PhaseTx {
                    aid,
                    ru_index,
                    random_access: false,
                    reported_bytes: reported,
                    mpdus: 0,
                });
                continue;
            }

            let sta = &mut self.stas[idx];
            let pending = sta.pending_bsr();
            if !pending {
                sta.was_pending = false;
                continue;
            }
            // A station that newly needs to report (re)starts contention
            // with a fresh window.
            if !sta.was_pending {
                sta.uora = UoraState::initialize(self.cfg.eocw_min, self.cfg.eocw_max, &mut sta.rng)
                    .expect("validated EOCW range");
                if let Some(obo) = sta.forced_initial_obo.take() {
                    sta.uora.force_obo(obo);
                }
            }
            sta.was_pending = true;
            if force_eligible {
                sta.uora.force_obo(0);
            }
            let before = sta.uora.obo();
            let decision = sta.uora.process_trigger(n_ra);
            let after = sta.uora.obo();
            let verdict = match decision {
                TriggerDecision::Transmit => "transmit",
                TriggerDecision::Defer => "defer",
            };
            self.record(TraceKind::Obo, Actor::Sta(aid), || {
                format!("phase=bsrp obo={before}->{after} decision={verdict}")
            });
            if decision == TriggerDecision::Transmit {
                let sta = &mut self.stas[idx];
                let ru_index = match sta.forced_ru.pop_front() {
                    Some(forced) => {
                        debug_assert!(ra_indices.contains(&forced));
                        forced
                    }
                    None => sta.uora.select_ra_ru(&ra_indices, &mut sta.rng),
                };
                let reported = sta.reportable_queue_bytes();
                self.sta_metrics(aid).ra_attempts += 1;
                txs.push(PhaseTx {
                    aid,
                    ru_index,
                    random_access: true,
                    reported_bytes: reported,
                    mpdus: 0,
                });
            }
        }
        txs
    }

    /// Resolves per-RU reception, applies optional capture, traces outcomes
    /// and accounts RA RU statistics for the phase.
    fn resolve_phase(&mut self, txs: &[PhaseTx], tf: &TriggerFrame, bsrp: bool) -> Vec<RuOutcome> {
        let layout_count = self.dm.layout().count();
        let pairs: Vec<(Aid, usize)> = txs.iter().map(|t| (t.aid, t.ru_index as usize)).collect();
        let mut outcomes = resolve_reception(&pairs, layout_count);
        if self.cfg.capture_enabled {
            for outcome in &mut outcomes {
                if let RuOutcome::Collision(aids) = outcome {
                    // Synchronized equal-power transmissions: the receiver
                    // locks to one PPDU; ties break on the lowest AID.
                    *outcome = RuOutcome::Success(aids[0]);
                }
            }
        }

        let mut tf_successes = 0u32;
        let stats = if bsrp { &mut self.metrics.bsrp_ra } else { &mut self.metrics.basic_ra };
        for &ru in &tf.ra_ru_indices() {
            stats.ra_rus_offered += 1;
            match &outcomes[ru as usize] {
                RuOutcome::Idle => stats.idle_rus += 1,
                RuOutcome::Success(_) => {
                    stats.success_rus += 1;
                    tf_successes += 1;
                }
                RuOutcome::Collision(_) => stats.collision_rus += 1,
            }
        }
        *stats.per_tf_success_counts.entry(tf_successes).or_insert(0) += 1;

        if self.trace.is_some() {
            let lines: Vec<String> = outcomes
                .iter()
                .enumerate()
                .map(|(ru, result)| {
                    let alloc = tf
                        .allocations()
                        .iter()
                        .find(|a| a.ru_index as usize == ru)
                        .map_or_else(
                            || String::from("none"),
                            |a| if a.is_random_access() { String::from("ra") } else { format!("sa{}", a.aid) },
                        );
                    let outcome = match result {
                        RuOutcome::Idle => String::from("idle"),
                        RuOutcome::Success(aid) => format!("success aid={aid}"),
                        RuOutcome::Collision(aids) => format!("collision aids={}", fmt_aids(aids)),
                    };
                    format!("ru={ru} alloc={alloc} {outcome}")
                })
                .collect();
            for line in lines {
                self.record(TraceKind::RuOutcome, Actor::Ap, || line);
            }
        }
        outcomes
    }

    fn acked_set(&self, outcomes: &[RuOutcome]) -> Vec<Aid> {
        outcomes
            .iter()
            .filter_map(|o| match o {
                RuOutcome::Success(aid) => Some(*aid),
                _ => None,
            })
            .collect()
    }

    /// Back-off updates and AP-side status ingestion after the BSR ack.
    fn apply_bsr_outcomes(&mut self, txs: &[PhaseTx], acked: &[Aid]) {
        let ack = MultiStaBlockAck::new(acked.iter().copied()).expect("station AIDs are valid");
        let mut reports = Vec::new();
        for tx in txs {
            let delivered = ack.acks(tx.aid);
            if delivered {
                reports.push(
                    BufferStatusReport::new(tx.aid, tx.reported_bytes).expect("valid BSR"),
                );
                self.stas[tx.aid as usize - 1].bsr_acknowledged(tx.reported_bytes);
                if tx.random_access {
                    self.sta_metrics(tx.aid).ra_successes += 1;
                }
            }
            if tx.random_access {
                let sta = &mut self.stas[tx.aid as usize - 1];
                if delivered {
                    sta.uora.on_success(&mut sta.rng);
                } else {
                    sta.uora.on_failure(&mut sta.rng);
                }
            }
        }
        self.sched.ingest_bsr_results(&reports);
    }

    /// Basic trigger, data phase and final Block Ack.
    fn run_data_phase(&mut self, unused_bsr_rus: &[u8]) {
        let policy = self.cfg.scheduler_policy();
        let layout = *self.dm.layout();
        let Some(plan) = self.sched.plan_basic_trigger(&policy, &layout, unused_bsr_rus) else {
            return;
        };

        // Size the solicited window from what the AP knows: each granted
        // station gets to drain its reported queue, capped by the TXOP data
        // window; RA data RUs (if any) reserve the full window.
        let window_cap = self.dm.max_mpdus_in(self.dm.data_window_ns());
        let mut needed_ns: Nanos = 0;
        for &aid in &plan.sa_grants {
            let known = self.sched.buffer_status(aid).map_or(0, |e| e.queue_bytes);
            let mpdus = self.dm.mpdus_for_bytes(known, window_cap);
            needed_ns = needed_ns.max(self.dm.data_burst_ns(mpdus));
        }
        if plan.n_ra > 0 {
            needed_ns = needed_ns.max(self.dm.data_burst_ns(window_cap));
        }
        let ul_us = self.dm.round_ul_us(needed_ns);
        let tf = plan.into_trigger_frame(ul_us).expect("planned trigger is valid");

        self.metrics.basic_tf_count += 1;
        self.metrics.sa_grants += plan.sa_grants.len() as u64;
        for &aid in &plan.sa_grants {
            self.sta_metrics(aid).sa_grants += 1;
        }
        self.metrics.unallocated_rus += plan.unallocated_rus.len() as u64;
        self.metrics.rescheduled_unused_rus += plan.rescheduled_unused_rus as u64;

        self.advance(self.dm.sifs_ns(), |a| &mut a.sifs_ns);
        self.trace_tf(&tf);
        self.advance(self.dm.tf_ns(tf.allocations().len()), |a| &mut a.tf_ns);

        // --- Stations build their bursts ---
        let txs = self.stations_process_basic(&tf, window_cap);
        self.advance(self.dm.sifs_ns(), |a| &mut a.sifs_ns);

        for tx in &txs {
            self.record(TraceKind::DataTx, Actor::Sta(tx.aid), || {
                format!("ru={} mpdus={}", tx.ru_index, tx.mpdus)
            });
        }
        let outcomes = self.resolve_phase(&txs, &tf, false);
        self.advance(crate::us_to_ns(tf.ul_length_us() as u64), |a| &mut a.data_phase_ns);

        // --- Multi-STA Block Ack for the data phase ---
        let acked = self.acked_set(&outcomes);
        if !acked.is_empty() {
            self.advance(self.dm.sifs_ns(), |a| &mut a.sifs_ns);
            self.record(TraceKind::MbaTx, Actor::Ap, || format!("phase=data acked={}", fmt_aids(&acked)));
            self.advance(self.dm.ba_ns(acked.len()), |a| &mut a.ba_ns);
        }

        // --- Deliveries, back-off updates, MU EDCA refresh ---
        let ba = MultiStaBlockAck::new(acked.iter().copied()).expect("station AIDs are valid");
        let ba_time = self.now;
        for tx in &txs {
            let delivered = ba.acks(tx.aid);
            if delivered {
                let packets = self.stas[tx.aid as usize - 1].dequeue_front(tx.mpdus as usize);
                let bytes: u64 = packets.iter().map(|p| p.bytes as u64).sum();
                let m = self.sta_metrics(tx.aid);
                m.delivered_bytes += bytes;
                m.delivered_mpdus += packets.len() as u64;
                for p in &packets {
                    m.sum_delay_ns += ba_time - p.enqueue_ns;
                    m.delay_samples += 1;
                }
                self.metrics.delivered_bytes += bytes;
                self.metrics.delivered_mpdus += packets.len() as u64;
                self.sched.note_delivered(tx.aid, bytes.min(u32::MAX as u64) as u32);
                self.stas[tx.aid as usize - 1].edca.on_ofdma_success(ba_time);
                let mpdu_count = packets.len();
                self.record(TraceKind::Delivery, Actor::Sta(tx.aid), || {
                    format!("mpdus={mpdu_count} bytes={bytes}")
                });
            }
            if tx.random_access {
                if delivered {
                    self.sta_metrics(tx.aid).ra_successes += 1;
                }
                let sta = &mut self.stas[tx.aid as usize - 1];
                if delivered {
                    sta.uora.on_success(&mut sta.rng);
                } else {
                    sta.uora.on_failure(&mut sta.rng);
                }
            }
        }
    }

    /// Station reactions to a Basic trigger: scheduled stations fill their
    /// grant; with RA data RUs advertised, contending stations run the same
    /// OBO procedure (every received trigger with RA RUs counts).
    fn stations_process_basic(&mut self, tf: &TriggerFrame, window_cap: u32) -> Vec<PhaseTx> {
        let n_ra = tf.n_ra();
        let ra_indices = tf.ra_ru_indices();
        let ul_ns = crate::us_to_ns(tf.ul_length_us() as u64);
        let fits_ul = self.dm.max_mpdus_in(ul_ns).min(window_cap);
        let mut txs = Vec::new();

        for idx in 0..self.stas.len() {
            let aid = (idx + 1) as Aid;
            if let Some(alloc) = tf.sa_allocation_for(aid) {
                let ru_index = alloc.ru_index;
                let sta = &mut self.stas[idx];
                let mpdus = (sta.queue_len() as u32).min(fits_ul);
                if mpdus > 0 {
                    txs.push(PhaseTx {
                        aid,
                        ru_index,
                        random_access: false,
                        reported_bytes: 0,
                        mpdus,
                    });
                }
                continue;
            }
            if n_ra == 0 {
                continue;
            }
            let sta = &mut self.stas[idx];
            if !sta.pending_bsr() || sta.queue_len() == 0 {
                continue;
            }
            let before = sta.uora.obo();
            let decision = sta.uora.process_trigger(n_ra);
            let after = sta.uora.obo();
            let verdict = match decision {
                TriggerDecision::Transmit => "transmit",
                TriggerDecision::Defer => "defer",
            };
            self.record(TraceKind::Obo, Actor::Sta(aid), || {
                format!("phase=basic obo={before}->{after} decision={verdict}")
            });
            if decision == TriggerDecision::Transmit {
                let sta = &mut self.stas[idx];
                let ru_index = match sta.forced_ru.pop_front() {
                    Some(forced) => forced,
                    None => sta.uora.select_ra_ru(&ra_indices, &mut sta.rng),
                };
                let mpdus = (sta.queue_len() as u32).min(fits_ul);
                self.sta_metrics(aid).ra_attempts += 1;
                txs.push(PhaseTx { aid, ru_index, random_access: true, reported_bytes: 0, mpdus });
            }
        }
        txs
    }

    fn trace_tf(&mut self, tf: &TriggerFrame) {
        if self.trace.is_none() {
            return;
        }
        let variant = match tf.variant() {
            TriggerVariant::Bsrp => "bsrp",
            TriggerVariant::Basic => "basic",
        };
        let sa: Vec<String> = tf
            .allocations()
            .iter()
            .filter(|a| !a.is_random_access())
            .map(|a| format!("{}:{}", a.ru_index, a.aid))
            .collect();
        let detail = format!(
            "variant={variant} n_ra={} sa=[{}] ul_us={} allocs={}",
            tf.n_ra(),
            sa.join(","),
            tf.ul_length_us(),
            tf.allocations().len()
        );
        self.record(TraceKind::TfTx, Actor::Ap, || detail);
    }

    fn finish(mut self) -> (Metrics, Vec<TraceRecord>) {
        self.metrics.duration_ns = self.now;
        assert_eq!(
            self.metrics.airtime.total_ns(),
            self.metrics.duration_ns,
            "airtime breakdown must sum exactly to the simulated duration"
        );
        assert!(
            self.metrics.delivered_bytes <= self.metrics.generated_bytes,
            "conservation violated: delivered more than generated"
        );
        (self.metrics, self.trace.unwrap_or_default())
    }
}

fn validate_script(script: &Script, cfg: &SimConfig, layout_count: usize) -> Result<(), ConfigError> {
    let bad_aid = |aid: Aid| ConfigError::InvalidScript(format!("AID {aid} is not simulated"));
    let known = |aid: Aid| aid >= 1 && aid <= cfg.n_stas;
    for &aid in script
        .forced_initial_obo
        .keys()
        .chain(script.forced_ru_choice.keys())
        .chain(script.silent_stas.iter())
    {
        if !known(aid) {
            return Err(bad_aid(aid));
        }
    }
    for &(aid, _) in &script.preknown_status {
        if !known(aid) {
            return Err(bad_aid(aid));
        }
    }
    if let Some(aid) = script.cursor_start {
        if !known(aid) {
            return Err(bad_aid(aid));
        }
    }
    if let Some(m) = script.bsrp_ra_only {
        if m == 0 || m > layout_count {
            return Err(ConfigError::InvalidScript(format!(
                "bsrp_ra_only={m} outside 1..={layout_count}"
            )));
        }
    }
    if script.max_cycles == Some(0) {
        return Err(ConfigError::InvalidScript(String::from("max_cycles must be positive")));
    }
    Ok(())
}

fn fmt_aids(aids: &[Aid]) -> String {
    let mut out = String::new();
    for (i, aid) in aids.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("{aid}"));
    }
    out
}

#[cfg(test)]
mod tests;
