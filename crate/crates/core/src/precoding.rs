//! Conjugate (MRT) and zero-forcing precoders, downlink SINR and sum-rate.
//!
//! A channel vector `h` of length `M` maps a precoding vector `w` to the
//! received amplitude `h^H w`. Zero-forcing stacks the rows `h_k^H` into
//! `H` and uses the right pseudo-inverse `H^H (H H^H)^{-1}`, computed from a
//! thin QR factorization of `H^H` so accuracy tracks `cond(H)` rather than
//! `cond(H)^2`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::channel::{CVec, ChannelSet};
use crate::error::{Error, Result};
use crate::topology::{RrhId, Topology, UserId};

pub type CMat = DMatrix<Complex64>;

/// Stacked channels above this condition number are rejected.
pub const MAX_CONDITION_NUMBER: f64 = 1e12;

fn check_dimensions(channels: &[CVec]) -> usize {
    assert!(!channels.is_empty(), "precoder needs at least one channel");
    let m = channels[0].len();
    assert!(
        channels.iter().all(|h| h.len() == m),
        "all channels must have the same antenna count"
    );
    m
}

fn check_nonzero(channels: &[CVec]) -> Result<()> {
    match channels.iter().position(|h| h.norm_squared() == 0.0) {
        Some(row) => Err(Error::DegenerateChannel { row }),
        None => Ok(()),
    }
}

/// Rescales every column to carry `tx_power / K`.
fn normalize_columns(w: &mut CMat, tx_power: f64) {
    let per_column = (tx_power / w.ncols() as f64).sqrt();
    for mut col in w.column_iter_mut() {
        let norm = col.norm();
        col.scale_mut(per_column / norm);
    }
}

/// Conjugate beamforming, `w_k = sqrt(P/K) h_k / |h_k|`.
pub fn mrt_precoder(channels: &[CVec], tx_power: f64) -> Result<CMat> {
    let m = check_dimensions(channels);
    check_nonzero(channels)?;
    let mut w = CMat::from_fn(m, channels.len(), |i, k| channels[k][i]);
    normalize_columns(&mut w, tx_power);
    Ok(w)
}

/// Unnormalized right pseudo-inverse of the stacked rows `h_k^H`; column `k`
/// satisfies `h_j^H w_k = δ_jk`.
fn pseudo_inverse_columns(channels: &[CVec]) -> Result<CMat> {
    let m = channels[0].len();
    let k = channels.len();
    let all_rows = || (0..k).collect::<Vec<_>>();

    // H^H has the channel vectors as its columns.
    let h_adj = CMat::from_fn(m, k, |i, j| channels[j][i]);
    let qr = h_adj.qr();
    let r = qr.r();

    let diag_ok = r.diagonal().iter().all(|d| d.norm() > 0.0 && d.is_finite());
    let r_inv = diag_ok
        .then(|| r.solve_upper_triangular(&CMat::identity(k, k)))
        .flatten()
        .filter(|inv| inv.iter().all(|x| x.is_finite()));
    let Some(r_inv) = r_inv else {
        return Err(Error::IllConditioned {
            rows: all_rows(),
            condition: f64::INFINITY,
        });
    };

    // Frobenius condition number, an upper bound on the spectral one.
    let condition = r.norm() * r_inv.norm();
    if !(condition < MAX_CONDITION_NUMBER) {
        return Err(Error::IllConditioned {
            rows: all_rows(),
            condition,
        });
    }

    Ok(qr.q() * r_inv.adjoint())
}

/// Zero-forcing, `W = H^H (H H^H)^{-1}` with columns rescaled to `P/K`.
pub fn zf_precoder(channels: &[CVec], tx_power: f64) -> Result<CMat> {
    zf_with_nulling(channels, &[], tx_power)
}

/// Zero-forcing over served and victim channels stacked together; only the
/// served columns are kept, so every victim sees a null.
pub fn zf_with_nulling(served: &[CVec], victims: &[CVec], tx_power: f64) -> Result<CMat> {
    let m = check_dimensions(served);
    check_nonzero(served)?;
    let streams = served.len() + victims.len();
    if streams > m {
        return Err(Error::TooManyStreams {
            served: served.len(),
            victims: victims.len(),
            antennas: m,
            excess: streams - m,
        });
    }
    let stacked: Vec<CVec> = served.iter().chain(victims).cloned().collect();
    check_dimensions(&stacked);

    let w0 = pseudo_inverse_columns(&stacked)?;
    let mut w = w0.columns(0, served.len()).into_owned();
    normalize_columns(&mut w, tx_power);
    Ok(w)
}

/// Precoding matrix of one RRH. Column `k` carries the stream of `users[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RrhPrecoder {
    pub rrh: RrhId,
    pub users: Vec<UserId>,
    pub w: CMat,
}

impl RrhPrecoder {
    pub fn column_powers(&self) -> Vec<f64> {
        self.w.column_iter().map(|c| c.norm_squared()).collect()
    }

    pub fn total_power(&self) -> f64 {
        self.w.norm_squared()
    }
}

/// Precoders of every transmitting RRH in a drop.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PrecoderSet {
    pub rrhs: Vec<RrhPrecoder>,
}

impl PrecoderSet {
    /// Users with at least one precoder column, ascending.
    pub fn stream_users(&self) -> Vec<UserId> {
        let mut users: Vec<UserId> = self.rrhs.iter().flat_map(|p| p.users.iter().copied()).collect();
        users.sort_unstable();
        users.dedup();
        users
    }

    pub fn get(&self, rrh: RrhId) -> Option<&RrhPrecoder> {
        self.rrhs.iter().find(|p| p.rrh == rrh)
    }
}

/// Downlink SINR of every user carried by `precoders`, evaluated on the
/// true channels. A stream spread over several RRHs adds coherently.
pub fn compute_sinr(precoders: &PrecoderSet, channels: &ChannelSet, noise_power: f64) -> Vec<(UserId, f64)> {
    let users = precoders.stream_users();
    let slot: BTreeMap<UserId, usize> = users.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    // Column -> stream slot, per RRH.
    let slots: Vec<Vec<usize>> = precoders
        .rrhs
        .iter()
        .map(|p| p.users.iter().map(|u| slot[u]).collect())
        .collect();

    let mut amplitude = vec![Complex64::new(0.0, 0.0); users.len()];
    users
        .iter()
        .map(|&u| {
            amplitude.fill(Complex64::new(0.0, 0.0));
            for (p, cols) in precoders.rrhs.iter().zip(&slots) {
                let h = channels.true_channel(p.rrh, u);
                // Entries are conj(h^H w_k); only magnitudes of sums matter.
                let received: DVector<Complex64> = p.w.ad_mul(h);
                for (k, &s) in cols.iter().enumerate() {
                    amplitude[s] += received[k];
                }
            }
            let own = slot[&u];
            let signal = amplitude[own].norm_sqr();
            let interference: f64 = amplitude
                .iter()
                .enumerate()
                .filter(|&(s, _)| s != own)
                .map(|(_, a)| a.norm_sqr())
                .sum();
            (u, signal / (noise_power + interference))
        })
        .collect()
}

pub fn spectral_efficiency(sinr: f64, cap: Option<f64>) -> f64 {
    let se = (1.0 + sinr).log2();
    match cap {
        Some(c) => se.min(c),
        None => se,
    }
}

/// `(1 - τ/T) B Σ log2(1 + SINR)`, bits/s.
pub fn sum_rate(sinrs: &[f64], bandwidth_hz: f64, tau_over_t: f64) -> f64 {
    capped_sum_rate(sinrs, bandwidth_hz, tau_over_t, None)
}

pub fn capped_sum_rate(sinrs: &[f64], bandwidth_hz: f64, tau_over_t: f64, cap: Option<f64>) -> f64 {
    assert!((0.0..1.0).contains(&tau_over_t), "pilot fraction must lie in [0, 1)");
    let se: f64 = sinrs.iter().map(|&s| spectral_efficiency(s, cap)).sum();
    (1.0 - tau_over_t) * bandwidth_hz * se
}

/// Per-user and aggregate wireless performance of one precoder set.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkReport {
    pub sinr: Vec<(UserId, f64)>,
    /// bits/s/Hz, aligned with `sinr`.
    pub spectral_efficiency: Vec<f64>,
    /// bits/s, indexed by RRH id, attributed to each user's serving RRH.
    pub per_rrh_sum_rate: Vec<f64>,
    pub sum_rate: f64,
}

impl LinkReport {
    pub fn evaluate(
        topology: &Topology,
        precoders: &PrecoderSet,
        channels: &ChannelSet,
        bandwidth_hz: f64,
        tau_over_t: f64,
        se_cap: Option<f64>,
    ) -> Self {
        let sinr = compute_sinr(precoders, channels, channels.noise_power);
        let spectral_efficiency: Vec<f64> = sinr.iter().map(|&(_, s)| spectral_efficiency(s, se_cap)).collect();

        let mut per_rrh_sinr = vec![Vec::new(); topology.rrhs.len()];
        for &(u, s) in &sinr {
            if let Some(r) = topology.users[u].serving_rrh {
                per_rrh_sinr[r].push(s);
            }
        }
        let per_rrh_sum_rate = per_rrh_sinr
            .iter()
            .map(|s| capped_sum_rate(s, bandwidth_hz, tau_over_t, se_cap))
            .collect();
        let all: Vec<f64> = sinr.iter().map(|&(_, s)| s).collect();
        LinkReport {
            sum_rate: capped_sum_rate(&all, bandwidth_hz, tau_over_t, se_cap),
            sinr,
            spectral_efficiency,
            per_rrh_sum_rate,
        }
    }
}
