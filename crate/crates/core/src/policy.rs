//! Centralized/distributed classification for hybrid PC-RAN operation.
//!
//! An RRH is a candidate for centralized (nulling) precoding when some
//! foreign scheduled user would receive a strong per-stream interference
//! from it. The metric uses large-scale gains only, so it does not fluctuate
//! with fast fading.

use std::collections::BTreeMap;

use crate::channel::LargeScaleGains;
use crate::topology::{PrecodingMode, RrhId, Tier, Topology, UserId};

/// Converts a dB threshold to linear scale; `-inf` maps to 0 and `+inf` to
/// infinity so the comparisons below behave at the boundaries.
pub fn threshold_linear(threshold_db: f64) -> f64 {
    10f64.powf(threshold_db / 10.0)
}

/// Expected pre-precoding interference-to-noise ratio that each
/// transmitting RRH causes at every foreign scheduled user.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InterferenceMap {
    pub inr: BTreeMap<(RrhId, UserId), f64>,
}

impl InterferenceMap {
    pub fn is_empty(&self) -> bool {
        self.inr.is_empty()
    }

    pub fn get(&self, rrh: RrhId, user: UserId) -> Option<f64> {
        self.inr.get(&(rrh, user)).copied()
    }

    /// Strongest INR caused by `rrh`, 0 when it has no victims.
    pub fn max_inr(&self, rrh: RrhId) -> f64 {
        self.inr
            .range((rrh, 0)..=(rrh, UserId::MAX))
            .map(|(_, &v)| v)
            .fold(0.0, f64::max)
    }

    /// Foreign users with `inr >= threshold`, strongest first, ties by id.
    pub fn victims(&self, rrh: RrhId, threshold_db: f64) -> Vec<UserId> {
        let t = threshold_linear(threshold_db);
        let mut v: Vec<(UserId, f64)> = self
            .inr
            .range((rrh, 0)..=(rrh, UserId::MAX))
            .filter(|(_, &inr)| inr >= t)
            .map(|(&(_, u), &inr)| (u, inr))
            .collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        v.into_iter().map(|(u, _)| u).collect()
    }
}

/// `inr(r, u) = (P_r / K_r) g(r, u) / N0` for every RRH with a non-empty
/// schedule and every scheduled user not served by it.
pub fn build_interference_map(topology: &Topology, gains: &LargeScaleGains, noise_power: f64) -> InterferenceMap {
    let mut inr = BTreeMap::new();
    for rrh in &topology.rrhs {
        let k = topology.load(rrh.id);
        if k == 0 {
            continue;
        }
        let per_stream = rrh.tx_power / k as f64;
        for (r, sched) in topology.schedule.iter().enumerate() {
            if r == rrh.id {
                continue;
            }
            for &u in sched {
                inr.insert((rrh.id, u), per_stream * gains.get(rrh.id, u) / noise_power);
            }
        }
    }
    InterferenceMap { inr }
}

/// Centralized iff the strongest victim INR reaches the threshold. The
/// macro RRH is pinned to centralized when `macro_always_centralized`.
pub fn classify_rrhs(
    topology: &Topology,
    imap: &InterferenceMap,
    threshold_db: f64,
    macro_always_centralized: bool,
) -> BTreeMap<RrhId, PrecodingMode> {
    let t = threshold_linear(threshold_db);
    topology
        .rrhs
        .iter()
        .map(|rrh| {
            let pinned = macro_always_centralized && rrh.tier == Tier::Macro;
            let mode = if pinned || imap.max_inr(rrh.id) >= t {
                PrecodingMode::Centralized
            } else {
                PrecodingMode::Distributed
            };
            (rrh.id, mode)
        })
        .collect()
}
