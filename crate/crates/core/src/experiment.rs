//! Monte-Carlo drops and sweeps over the number of small RRHs.
//!
//! Every drop evaluates four architecture modes on the same deployment,
//! schedule and channels:
//!
//! * `FC`: fully centralized over CPRI; precoders identical to `PC-Cent`.
//! * `PC-Cent`: every RRH uses victim-nulling zero-forcing computed at the BBU.
//! * `PC-Hybrid`: the policy picks nulling ZF or local conjugate beamforming
//!   per RRH.
//! * `PC-Dist`: every RRH uses local conjugate beamforming.
//!
//! A drop draws all of its randomness from a ChaCha stream selected by
//! `(master_seed, n_small, drop_index)`, so results do not depend on the
//! order or the thread in which drops are evaluated.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::channel::{dbm_to_watts, CVec, ChannelSet, LargeScaleGains, RadioParams};
use crate::error::{Error, Result};
use crate::fronthaul::{rrh_breakdown, Architecture, BreakdownOptions, CsiOption, FronthaulBreakdown, FronthaulParams};
use crate::policy::{build_interference_map, classify_rrhs, InterferenceMap};
use crate::precoding::{mrt_precoder, zf_with_nulling, LinkReport, PrecoderSet, RrhPrecoder};
use crate::topology::{associate, place_rrhs, place_users, PrecodingMode, RrhId, RrhProfile, Tier, Topology, UserId};

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyParams {
    /// Victims below this INR are never nulled, whatever the hybrid
    /// threshold.
    pub victim_floor_db: f64,
    pub macro_always_centralized: bool,
    /// Degrees of freedom a nulling precoder keeps for its own users:
    /// victims are truncated so that `K + K_v <= M - spare_dof`.
    pub spare_dof: usize,
}

impl Default for PolicyParams {
    fn default() -> Self {
        PolicyParams {
            victim_floor_db: 0.0,
            macro_always_centralized: true,
            spare_dof: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags {
    pub two_stage: bool,
    pub joint_cluster_zf: bool,
    pub uplink_payload: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n_users: usize,
    pub cell_radius_m: f64,
    pub min_separation_m: f64,
    pub macro_antennas: usize,
    pub small_antennas: usize,
    pub macro_rf_chains: usize,
    pub small_rf_chains: usize,
    pub macro_power_dbm: f64,
    pub small_power_dbm: f64,
    pub k_max: usize,
    pub small_rrh_counts: Vec<usize>,
    pub drops: usize,
    pub master_seed: u64,
    pub hybrid_threshold_db: f64,
    pub csi: CsiOption,
    pub flags: Flags,
    pub policy: PolicyParams,
    pub radio: RadioParams,
    pub fronthaul: FronthaulParams,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            n_users: 500,
            cell_radius_m: 2000.0,
            min_separation_m: 75.0,
            macro_antennas: 256,
            small_antennas: 64,
            macro_rf_chains: 256,
            small_rf_chains: 64,
            macro_power_dbm: 46.0,
            small_power_dbm: 30.0,
            k_max: 16,
            small_rrh_counts: vec![0, 10, 20, 30, 40],
            drops: 100,
            master_seed: 0,
            hybrid_threshold_db: 10.0,
            csi: CsiOption::PilotIq,
            flags: Flags::default(),
            policy: PolicyParams::default(),
            radio: RadioParams::default(),
            fronthaul: FronthaulParams::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn macro_profile(&self) -> RrhProfile {
        RrhProfile {
            num_antennas: self.macro_antennas,
            num_rf_chains: self.macro_rf_chains,
            tx_power: dbm_to_watts(self.macro_power_dbm),
        }
    }

    pub fn small_profile(&self) -> RrhProfile {
        RrhProfile {
            num_antennas: self.small_antennas,
            num_rf_chains: self.small_rf_chains,
            tx_power: dbm_to_watts(self.small_power_dbm),
        }
    }

    pub fn breakdown_options(&self) -> BreakdownOptions {
        BreakdownOptions {
            csi: self.csi,
            two_stage: self.flags.two_stage,
            uplink_payload: self.flags.uplink_payload,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.macro_profile().validate("macro_antennas")?;
        self.small_profile().validate("small_antennas")?;
        if self.k_max == 0 {
            return Err(Error::config("k_max", "must be at least 1"));
        }
        if self.drops == 0 {
            return Err(Error::config("drops", "must be at least 1"));
        }
        if self.small_rrh_counts.is_empty() {
            return Err(Error::config("small_rrh_counts", "sweep needs at least one point"));
        }
        let mut sorted = self.small_rrh_counts.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("small_rrh_counts", "sweep points must be distinct"));
        }
        if !(self.cell_radius_m > 0.0 && self.cell_radius_m.is_finite()) {
            return Err(Error::config("cell_radius_m", "must be positive"));
        }
        if !(self.min_separation_m >= 0.0 && self.min_separation_m.is_finite()) {
            return Err(Error::config("min_separation_m", "must be non-negative"));
        }
        if self.hybrid_threshold_db.is_nan() {
            return Err(Error::config("hybrid_threshold_db", "must be a number or +/-inf"));
        }
        if self.policy.victim_floor_db.is_nan() {
            return Err(Error::config("policy.victim_floor_db", "must be a number or +/-inf"));
        }
        if self.csi == CsiOption::Partial {
            return Err(Error::config(
                "csi",
                "partial CSI cannot drive centralized precoding; use pilot-iq or le-csi",
            ));
        }
        self.radio.validate()?;
        self.fronthaul.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Fc,
    PcCent,
    PcHybrid,
    PcDist,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Fc, Mode::PcCent, Mode::PcHybrid, Mode::PcDist];

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Fc => "FC",
            Mode::PcCent => "PC-Cent",
            Mode::PcHybrid => "PC-Hybrid",
            Mode::PcDist => "PC-Dist",
        }
    }
}

/// Fronthaul components summed over RRHs, bits/s.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FronthaulTotals {
    pub dl_payload: f64,
    pub dl_precoder: f64,
    pub ul_csi: f64,
    pub ul_payload: f64,
    pub total: f64,
}

impl FronthaulTotals {
    fn add(&mut self, b: &FronthaulBreakdown) {
        self.dl_payload += b.dl_payload;
        self.dl_precoder += b.dl_precoder;
        self.ul_csi += b.ul_csi;
        self.ul_payload += b.ul_payload;
        self.total += b.total;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RrhOutcome {
    pub rrh: RrhId,
    pub tier: Tier,
    /// Streams transmitted by this RRH.
    pub streams: usize,
    /// `None` for RRHs without scheduled users.
    pub precoding: Option<PrecodingMode>,
    pub sum_rate: f64,
    pub fronthaul: FronthaulBreakdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeResult {
    pub mode: Mode,
    pub sum_rate: f64,
    pub fronthaul: FronthaulTotals,
    /// Radio-over-fiber wavelengths; only meaningful for `FC`.
    pub wavelengths: usize,
    pub n_centralized: usize,
    pub rrhs: Vec<RrhOutcome>,
}

impl ModeResult {
    /// Field-for-field equality ignoring the mode label.
    pub fn same_outcome(&self, other: &ModeResult) -> bool {
        self.sum_rate == other.sum_rate
            && self.fronthaul == other.fronthaul
            && self.wavelengths == other.wavelengths
            && self.n_centralized == other.n_centralized
            && self.rrhs == other.rrhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DropResult {
    pub n_small: usize,
    pub drop_index: usize,
    /// True when the first schedule hit a precoder failure.
    pub rescheduled: bool,
    pub num_scheduled: usize,
    /// One entry per mode in `Mode::ALL` order.
    pub modes: Vec<ModeResult>,
}

impl DropResult {
    pub fn mode(&self, mode: Mode) -> &ModeResult {
        self.modes.iter().find(|m| m.mode == mode).expect("every mode evaluated")
    }
}

/// Drop-local random stream: `master_seed` selects the key, the stream id
/// packs the sweep point and drop index.
pub fn drop_rng(master_seed: u64, n_small: usize, drop_index: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(((n_small as u64) << 32) | (drop_index as u64 & 0xffff_ffff));
    rng
}

/// Deployment, association, schedule and channels of one drop attempt.
struct DropState {
    topology: Topology,
    channels: ChannelSet,
}

fn is_retryable(e: &Error) -> bool {
    matches!(e, Error::IllConditioned { .. } | Error::DegenerateChannel { .. })
}

pub fn run_drop(config: &ScenarioConfig, n_small: usize, drop_index: usize) -> Result<DropResult> {
    let mut rng = drop_rng(config.master_seed, n_small, drop_index);
    let rrhs = place_rrhs(
        n_small,
        config.cell_radius_m,
        config.min_separation_m,
        &config.macro_profile(),
        &config.small_profile(),
        &mut rng,
    )?;
    let mut users = place_users(config.n_users, config.cell_radius_m, &mut rng);
    let gains = LargeScaleGains::compute(&rrhs, &users, &config.radio, &mut rng);
    associate(&mut users, &rrhs, &gains);
    let mut topology = Topology::new(rrhs, users, config.cell_radius_m);

    let mut first_error = None;
    for attempt in 0..2 {
        topology.schedule(config.k_max, &mut rng);
        let channels = ChannelSet::draw(&topology, gains.clone(), &config.radio, &mut rng);
        let state = DropState { topology, channels };
        match evaluate_modes(config, &state) {
            Ok(modes) => {
                return Ok(DropResult {
                    n_small,
                    drop_index,
                    rescheduled: attempt > 0,
                    num_scheduled: state.topology.num_scheduled(),
                    modes,
                })
            }
            Err(e) if is_retryable(&e) && first_error.is_none() => {
                first_error = Some(e);
                topology = state.topology;
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("second attempt either succeeds or returns its error")
}

fn uniform_modes(topology: &Topology, mode: PrecodingMode) -> BTreeMap<RrhId, PrecodingMode> {
    topology.rrhs.iter().map(|r| (r.id, mode)).collect()
}

fn evaluate_modes(config: &ScenarioConfig, state: &DropState) -> Result<Vec<ModeResult>> {
    let topology = &state.topology;
    let channels = &state.channels;
    let imap = build_interference_map(topology, &channels.large_scale, channels.noise_power);

    let floor = config.policy.victim_floor_db;
    let centralized = uniform_modes(topology, PrecodingMode::Centralized);
    let distributed = uniform_modes(topology, PrecodingMode::Distributed);
    let hybrid = classify_rrhs(
        topology,
        &imap,
        config.hybrid_threshold_db,
        config.policy.macro_always_centralized,
    );

    let cent_set = build_precoders(config, topology, channels, &imap, &centralized, floor)?;
    let hybrid_set = build_precoders(
        config,
        topology,
        channels,
        &imap,
        &hybrid,
        config.hybrid_threshold_db.max(floor),
    )?;
    let dist_set = build_precoders(config, topology, channels, &imap, &distributed, floor)?;

    Mode::ALL
        .iter()
        .map(|&mode| {
            let (set, modes) = match mode {
                Mode::Fc | Mode::PcCent => (&cent_set, &centralized),
                Mode::PcHybrid => (&hybrid_set, &hybrid),
                Mode::PcDist => (&dist_set, &distributed),
            };
            mode_result(config, topology, channels, mode, set, modes)
        })
        .collect()
}

fn mode_result(
    config: &ScenarioConfig,
    topology: &Topology,
    channels: &ChannelSet,
    mode: Mode,
    precoders: &PrecoderSet,
    modes: &BTreeMap<RrhId, PrecodingMode>,
) -> Result<ModeResult> {
    let link = LinkReport::evaluate(
        topology,
        precoders,
        channels,
        config.radio.bandwidth_hz,
        config.fronthaul.tau_over_t(),
        config.radio.se_cap_bps_hz,
    );
    let opts = config.breakdown_options();
    let fp = &config.fronthaul;

    let mut fronthaul = FronthaulTotals::default();
    let mut wavelengths = 0;
    let mut n_centralized = 0;
    let mut rrhs = Vec::with_capacity(topology.rrhs.len());
    for rrh in &topology.rrhs {
        let streams = precoders.get(rrh.id).map_or(0, |p| p.users.len());
        let active = streams > 0;
        let precoding = active.then(|| modes[&rrh.id]);
        if precoding == Some(PrecodingMode::Centralized) {
            n_centralized += 1;
        }
        let (m, s) = (rrh.num_antennas, rrh.num_rf_chains);
        let breakdown = match (mode, precoding) {
            (Mode::Fc, _) => {
                wavelengths += rrh_breakdown(Architecture::FcRof, fp, m, s, streams, opts)?.wavelengths;
                rrh_breakdown(Architecture::FcIq, fp, m, s, streams, opts)?
            }
            (_, None) => FronthaulBreakdown::idle(Architecture::PcDistributed),
            (_, Some(PrecodingMode::Centralized)) => {
                rrh_breakdown(Architecture::PcCentralized, fp, m, s, streams, opts)?
            }
            (_, Some(PrecodingMode::Distributed)) => {
                rrh_breakdown(Architecture::PcDistributed, fp, m, s, streams, opts)?
            }
        };
        fronthaul.add(&breakdown);
        rrhs.push(RrhOutcome {
            rrh: rrh.id,
            tier: rrh.tier,
            streams,
            precoding,
            sum_rate: link.per_rrh_sum_rate[rrh.id],
            fronthaul: breakdown,
        });
    }

    Ok(ModeResult {
        mode,
        sum_rate: link.sum_rate,
        fronthaul,
        wavelengths,
        n_centralized,
        rrhs,
    })
}

/// Keeps the strongest victims that fit in `antennas - served - spare`.
fn truncate_victims(mut victims: Vec<UserId>, antennas: usize, served: usize, spare: usize) -> Vec<UserId> {
    let room = antennas.saturating_sub(served).saturating_sub(spare);
    victims.truncate(room);
    victims
}

/// Precoders for every active RRH. Centralized RRHs null the foreign users
/// whose INR reaches `victim_threshold_db`; distributed ones use conjugate
/// beamforming on their local estimates.
pub fn build_precoders(
    config: &ScenarioConfig,
    topology: &Topology,
    channels: &ChannelSet,
    imap: &InterferenceMap,
    modes: &BTreeMap<RrhId, PrecodingMode>,
    victim_threshold_db: f64,
) -> Result<PrecoderSet> {
    let mut set = PrecoderSet::default();
    let cluster: Vec<RrhId> = topology
        .rrhs
        .iter()
        .filter(|r| topology.load(r.id) > 0 && modes[&r.id] == PrecodingMode::Centralized)
        .map(|r| r.id)
        .collect();
    let joint = config.flags.joint_cluster_zf && !cluster.is_empty();

    for rrh in &topology.rrhs {
        let users = &topology.schedule[rrh.id];
        if users.is_empty() || (joint && cluster.contains(&rrh.id)) {
            continue;
        }
        let served: Vec<CVec> = users.iter().map(|&u| channels.estimated_channel(rrh.id, u).clone()).collect();
        let w = match modes[&rrh.id] {
            PrecodingMode::Distributed => mrt_precoder(&served, rrh.tx_power)?,
            PrecodingMode::Centralized => {
                let victims = truncate_victims(
                    imap.victims(rrh.id, victim_threshold_db),
                    rrh.num_antennas,
                    users.len(),
                    config.policy.spare_dof,
                );
                let victim_h: Vec<CVec> =
                    victims.iter().map(|&v| channels.estimated_channel(rrh.id, v).clone()).collect();
                zf_with_nulling(&served, &victim_h, rrh.tx_power)?
            }
        };
        set.rrhs.push(RrhPrecoder {
            rrh: rrh.id,
            users: users.clone(),
            w,
        });
    }

    if joint {
        set.rrhs.extend(joint_cluster_precoders(config, topology, channels, imap, &cluster, victim_threshold_db)?);
        set.rrhs.sort_by_key(|p| p.rrh);
    }
    Ok(set)
}

/// One zero-forcing precoder over the stacked antennas of all centralized
/// RRHs, split back into per-RRH row blocks. The power budget is the sum of
/// the cluster's budgets, shared equally among the cluster's streams.
fn joint_cluster_precoders(
    config: &ScenarioConfig,
    topology: &Topology,
    channels: &ChannelSet,
    imap: &InterferenceMap,
    cluster: &[RrhId],
    victim_threshold_db: f64,
) -> Result<Vec<RrhPrecoder>> {
    let users: Vec<UserId> = cluster.iter().flat_map(|&r| topology.schedule[r].iter().copied()).collect();
    let antennas: usize = cluster.iter().map(|&r| topology.rrhs[r].num_antennas).sum();
    let power: f64 = cluster.iter().map(|&r| topology.rrhs[r].tx_power).sum();

    // Strongest INR any cluster member causes at each outside user.
    let mut strongest: BTreeMap<UserId, f64> = BTreeMap::new();
    let threshold = crate::policy::threshold_linear(victim_threshold_db);
    for &r in cluster {
        for v in imap.victims(r, victim_threshold_db) {
            if users.contains(&v) {
                continue;
            }
            let inr = imap.get(r, v).expect("victim has an INR");
            debug_assert!(inr >= threshold);
            let e = strongest.entry(v).or_insert(inr);
            *e = e.max(inr);
        }
    }
    let mut ranked: Vec<(UserId, f64)> = strongest.into_iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let victims = truncate_victims(
        ranked.into_iter().map(|(u, _)| u).collect(),
        antennas,
        users.len(),
        config.policy.spare_dof,
    );

    let stacked = |u: UserId| -> CVec {
        let parts: Vec<&CVec> = cluster.iter().map(|&r| channels.estimated_channel(r, u)).collect();
        CVec::from_iterator(antennas, parts.into_iter().flat_map(|h| h.iter().copied()))
    };
    let served: Vec<CVec> = users.iter().map(|&u| stacked(u)).collect();
    let victim_h: Vec<CVec> = victims.iter().map(|&u| stacked(u)).collect();
    let w = zf_with_nulling(&served, &victim_h, power)?;

    let mut offset = 0;
    Ok(cluster
        .iter()
        .map(|&r| {
            let m = topology.rrhs[r].num_antennas;
            let block = w.rows(offset, m).into_owned();
            offset += m;
            RrhPrecoder {
                rrh: r,
                users: users.clone(),
                w: block,
            }
        })
        .collect())
}

/// Sample mean, sample standard deviation and 95% normal confidence
/// half-width `1.96 σ / sqrt(n)`. A single sample has zero spread.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Summary {
    pub mean: f64,
    pub std_dev: f64,
    pub ci95: f64,
    pub samples: usize,
}

impl Summary {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Summary::default();
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let std_dev = if n > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Summary {
            mean,
            std_dev,
            ci95: 1.96 * std_dev / (n as f64).sqrt(),
            samples: n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeStats {
    pub mode: Mode,
    pub sum_rate: Summary,
    pub fronthaul: Summary,
    pub dl_payload_mean: f64,
    pub dl_precoder_mean: f64,
    pub ul_csi_mean: f64,
    pub ul_payload_mean: f64,
    pub wavelengths_mean: f64,
    pub n_centralized_mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedDrop {
    pub n_small: usize,
    pub drop_index: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub n_small: usize,
    pub completed: usize,
    pub skipped: Vec<SkippedDrop>,
    /// One entry per mode in `Mode::ALL` order.
    pub modes: Vec<ModeStats>,
}

impl SweepPoint {
    pub fn mode(&self, mode: Mode) -> &ModeStats {
        self.modes.iter().find(|m| m.mode == mode).expect("every mode aggregated")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// Completed drops ordered by (sweep point, drop index).
    pub drops: Vec<DropResult>,
}

impl SweepResult {
    pub fn skipped_drops(&self) -> usize {
        self.points.iter().map(|p| p.skipped.len()).sum()
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn aggregate(n_small: usize, drops: &[&DropResult], skipped: Vec<SkippedDrop>) -> SweepPoint {
    let modes = Mode::ALL
        .iter()
        .map(|&mode| {
            let results: Vec<&ModeResult> = drops.iter().map(|d| d.mode(mode)).collect();
            let sum_rates: Vec<f64> = results.iter().map(|r| r.sum_rate).collect();
            let totals: Vec<f64> = results.iter().map(|r| r.fronthaul.total).collect();
            ModeStats {
                mode,
                sum_rate: Summary::from_samples(&sum_rates),
                fronthaul: Summary::from_samples(&totals),
                dl_payload_mean: mean(results.iter().map(|r| r.fronthaul.dl_payload)),
                dl_precoder_mean: mean(results.iter().map(|r| r.fronthaul.dl_precoder)),
                ul_csi_mean: mean(results.iter().map(|r| r.fronthaul.ul_csi)),
                ul_payload_mean: mean(results.iter().map(|r| r.fronthaul.ul_payload)),
                wavelengths_mean: mean(results.iter().map(|r| r.wavelengths as f64)),
                n_centralized_mean: mean(results.iter().map(|r| r.n_centralized as f64)),
            }
        })
        .collect();
    SweepPoint {
        n_small,
        completed: drops.len(),
        skipped,
        modes,
    }
}

/// Runs every `(sweep point, drop)` pair on the current rayon pool and
/// aggregates per point. Drops whose precoders fail after the reschedule
/// retry are skipped and reported; deployment failures abort the sweep.
pub fn run_sweep(config: &ScenarioConfig) -> Result<SweepResult> {
    config.validate()?;
    let jobs: Vec<(usize, usize)> = config
        .small_rrh_counts
        .iter()
        .flat_map(|&n| (0..config.drops).map(move |d| (n, d)))
        .collect();
    let outcomes: Vec<Result<DropResult>> = jobs.par_iter().map(|&(n, d)| run_drop(config, n, d)).collect();

    let mut drops = Vec::with_capacity(outcomes.len());
    let mut skipped: BTreeMap<usize, Vec<SkippedDrop>> = BTreeMap::new();
    for (&(n_small, drop_index), outcome) in jobs.iter().zip(outcomes) {
        match outcome {
            Ok(d) => drops.push(d),
            Err(e @ Error::Placement { .. }) => return Err(e),
            Err(e) => skipped.entry(n_small).or_default().push(SkippedDrop {
                n_small,
                drop_index,
                reason: e.to_string(),
            }),
        }
    }

    let points = config
        .small_rrh_counts
        .iter()
        .map(|&n| {
            let at_point: Vec<&DropResult> = drops.iter().filter(|d| d.n_small == n).collect();
            aggregate(n, &at_point, skipped.remove(&n).unwrap_or_default())
        })
        .collect();
    Ok(SweepResult { points, drops })
}
