//! Large-scale gains and i.i.d. Rayleigh small-scale channels.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::topology::{Rrh, RrhId, Tier, Topology, User, UserId};

pub type CVec = DVector<Complex64>;

/// Log-distance path loss `intercept + slope * log10(d_km)` in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLoss {
    pub intercept_db: f64,
    pub slope_db: f64,
}

impl PathLoss {
    pub const MACRO: PathLoss = PathLoss {
        intercept_db: 128.1,
        slope_db: 37.6,
    };
    pub const SMALL: PathLoss = PathLoss {
        intercept_db: 140.7,
        slope_db: 36.7,
    };

    pub fn db(&self, distance_m: f64, min_distance_m: f64) -> f64 {
        let d_km = distance_m.max(min_distance_m) / 1000.0;
        self.intercept_db + self.slope_db * d_km.log10()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadioParams {
    pub bandwidth_hz: f64,
    pub macro_path_loss: PathLoss,
    pub small_path_loss: PathLoss,
    /// Distances below this floor are clamped before evaluating path loss.
    pub min_distance_m: f64,
    pub noise_psd_dbm_hz: f64,
    pub noise_figure_db: f64,
    pub estimation_error_eps: f64,
    pub shadowing: bool,
    pub macro_shadowing_db: f64,
    pub small_shadowing_db: f64,
    /// Optional ceiling on per-user spectral efficiency, bits/s/Hz.
    pub se_cap_bps_hz: Option<f64>,
}

impl Default for RadioParams {
    fn default() -> Self {
        RadioParams {
            bandwidth_hz: 20e6,
            macro_path_loss: PathLoss::MACRO,
            small_path_loss: PathLoss::SMALL,
            min_distance_m: 10.0,
            noise_psd_dbm_hz: -174.0,
            noise_figure_db: 9.0,
            estimation_error_eps: 0.0,
            shadowing: false,
            macro_shadowing_db: 8.0,
            small_shadowing_db: 10.0,
            se_cap_bps_hz: None,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_hz > 0.0 && self.bandwidth_hz.is_finite()) {
            return Err(Error::config("radio.bandwidth_hz", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.estimation_error_eps) {
            return Err(Error::config("radio.estimation_error_eps", "must lie in [0, 1]"));
        }
        if !(self.min_distance_m > 0.0) {
            return Err(Error::config("radio.min_distance_m", "must be positive"));
        }
        if self.macro_shadowing_db < 0.0 || self.small_shadowing_db < 0.0 {
            return Err(Error::config("radio.*_shadowing_db", "must be non-negative"));
        }
        if let Some(cap) = self.se_cap_bps_hz {
            if !(cap > 0.0) {
                return Err(Error::config("radio.se_cap_bps_hz", "must be positive"));
            }
        }
        Ok(())
    }

    pub fn path_loss_db(&self, tier: Tier, distance_m: f64) -> f64 {
        let model = match tier {
            Tier::Macro => self.macro_path_loss,
            Tier::Small => self.small_path_loss,
        };
        model.db(distance_m, self.min_distance_m)
    }

    /// Thermal noise plus noise figure over the system bandwidth, watts.
    pub fn noise_power_w(&self) -> f64 {
        let dbm = self.noise_psd_dbm_hz + 10.0 * self.bandwidth_hz.log10() + self.noise_figure_db;
        dbm_to_watts(dbm)
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear large-scale power gains, one row per RRH and one column per user.
#[derive(Debug, Clone, PartialEq)]
pub struct LargeScaleGains {
    gains: DMatrix<f64>,
}

impl LargeScaleGains {
    pub fn from_matrix(gains: DMatrix<f64>) -> Self {
        assert!(gains.iter().all(|&g| g > 0.0), "large-scale gains must be positive");
        LargeScaleGains { gains }
    }

    /// Path loss (and log-normal shadowing when enabled) for every pair.
    /// Shadowing draws are taken RRH-major, user-minor.
    pub fn compute<R: Rng + ?Sized>(
        rrhs: &[Rrh],
        users: &[User],
        radio: &RadioParams,
        rng: &mut R,
    ) -> Self {
        let mut gains = DMatrix::zeros(rrhs.len(), users.len());
        for rrh in rrhs {
            let sigma = match rrh.tier {
                Tier::Macro => radio.macro_shadowing_db,
                Tier::Small => radio.small_shadowing_db,
            };
            for user in users {
                let mut loss = radio.path_loss_db(rrh.tier, rrh.position.distance(&user.position));
                if radio.shadowing && sigma > 0.0 {
                    loss += Normal::new(0.0, sigma).expect("finite sigma").sample(rng);
                }
                gains[(rrh.id, user.id)] = db_to_linear(-loss);
            }
        }
        LargeScaleGains { gains }
    }

    pub fn get(&self, rrh: RrhId, user: UserId) -> f64 {
        self.gains[(rrh, user)]
    }

    pub fn num_rrhs(&self) -> usize {
        self.gains.nrows()
    }

    pub fn num_users(&self) -> usize {
        self.gains.ncols()
    }

    /// Same gains multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        LargeScaleGains::from_matrix(&self.gains * c)
    }
}

/// Circularly-symmetric complex Gaussian with unit variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `sqrt(gain) * g` with `g` i.i.d. CN(0, 1) of length `num_antennas`.
pub fn draw_channel<R: Rng + ?Sized>(num_antennas: usize, large_scale_gain: f64, rng: &mut R) -> CVec {
    assert!(large_scale_gain > 0.0, "large-scale gain must be positive");
    let amp = large_scale_gain.sqrt();
    DVector::from_fn(num_antennas, |_, _| complex_gaussian(rng) * amp)
}

/// `sqrt(1 - eps^2) h + eps sqrt(gain) e`, which keeps the per-element
/// variance at `gain`. `eps == 0` returns `h` untouched and draws nothing.
pub fn apply_estimation_error<R: Rng + ?Sized>(
    h: &CVec,
    large_scale_gain: f64,
    eps: f64,
    rng: &mut R,
) -> CVec {
    assert!((0.0..=1.0).contains(&eps), "estimation error must lie in [0, 1]");
    if eps == 0.0 {
        return h.clone();
    }
    let keep = (1.0 - eps * eps).sqrt();
    let noise = eps * large_scale_gain.sqrt();
    h.map(|x| x * keep + complex_gaussian(rng) * noise)
}

/// True and estimated small-scale channels between every RRH and every
/// scheduled user.
#[derive(Debug, Clone)]
pub struct ChannelSet {
    pub large_scale: LargeScaleGains,
    pub noise_power: f64,
    true_h: Vec<Vec<Option<CVec>>>,
    estimated_h: Option<Vec<Vec<Option<CVec>>>>,
}

impl ChannelSet {
    /// Draws channels for every (RRH, scheduled user) pair, users in
    /// ascending id order and RRHs in ascending id order, then the
    /// estimation errors in the same order.
    pub fn draw<R: Rng + ?Sized>(
        topology: &Topology,
        large_scale: LargeScaleGains,
        radio: &RadioParams,
        rng: &mut R,
    ) -> Self {
        let n_rrh = topology.rrhs.len();
        let n_users = topology.users.len();
        let mut true_h: Vec<Vec<Option<CVec>>> = vec![vec![None; n_users]; n_rrh];
        let scheduled: Vec<UserId> = topology.scheduled_users().collect();
        for &u in &scheduled {
            for rrh in &topology.rrhs {
                true_h[rrh.id][u] = Some(draw_channel(rrh.num_antennas, large_scale.get(rrh.id, u), rng));
            }
        }

        let eps = radio.estimation_error_eps;
        let estimated_h = (eps > 0.0).then(|| {
            let mut est: Vec<Vec<Option<CVec>>> = vec![vec![None; n_users]; n_rrh];
            for &u in &scheduled {
                for rrh in &topology.rrhs {
                    let h = true_h[rrh.id][u].as_ref().expect("drawn above");
                    est[rrh.id][u] =
                        Some(apply_estimation_error(h, large_scale.get(rrh.id, u), eps, rng));
                }
            }
            est
        });

        ChannelSet {
            large_scale,
            noise_power: radio.noise_power_w(),
            true_h,
            estimated_h,
        }
    }

    /// Builds a set from explicit channels, `channels[r][u]`. Intended for
    /// hand-made instances.
    pub fn from_channels(channels: Vec<Vec<Option<CVec>>>, large_scale: LargeScaleGains, noise_power: f64) -> Self {
        ChannelSet {
            large_scale,
            noise_power,
            true_h: channels,
            estimated_h: None,
        }
    }

    /// Channel used for SINR evaluation.
    pub fn true_channel(&self, rrh: RrhId, user: UserId) -> &CVec {
        self.true_h[rrh][user]
            .as_ref()
            .unwrap_or_else(|| panic!("no channel drawn for RRH {rrh}, user {user}"))
    }

    /// Channel the precoders are designed from. Equals the true channel
    /// under perfect CSI.
    pub fn estimated_channel(&self, rrh: RrhId, user: UserId) -> &CVec {
        match &self.estimated_h {
            Some(est) => est[rrh][user]
                .as_ref()
                .unwrap_or_else(|| panic!("no channel drawn for RRH {rrh}, user {user}")),
            None => self.true_channel(rrh, user),
        }
    }
}
