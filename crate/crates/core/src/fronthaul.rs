//! Fronthaul bit-rate model for fully- and partially-centralized C-RANs.
//!
//! All rates are in bits/s and scale with the transport redundancy `alpha`
//! (CPRI: 8B/10B line coding times a 1/16 control-word share, i.e. 4/3).
//!
//! | quantity                 | rate                                      |
//! |--------------------------|-------------------------------------------|
//! | IQ samples               | `alpha M b_iq f_s`                        |
//! | data symbols             | `alpha (1 - tau/T) K b_ds f_sym`          |
//! | precoders                | `alpha M K b_iq f_pre`                    |
//! | locally estimated CSI    | `alpha M K b_iq f_csi`                    |
//! | pilot IQ samples         | `alpha M (tau/T) b_iq f_sym`              |
//! | partial CSI              | `alpha K b_real f_csi`                    |
//! | two-stage precoder / CSI | `alpha (S K b_iq f_bb + M K b_iq f_rf)`   |

use crate::error::{Error, Result};

/// CPRI redundancy: (10/8) line code times (16/15) control overhead.
pub const CPRI_ALPHA: f64 = (10.0 / 8.0) * (16.0 / 15.0);

#[derive(Debug, Clone, PartialEq)]
pub struct FronthaulParams {
    pub alpha: f64,
    /// Bits per IQ sample pair.
    pub b_iq: f64,
    /// Bits per data symbol (constellation index).
    pub b_ds: f64,
    /// Bits per real scalar of partial CSI.
    pub b_real: f64,
    /// IQ sampling rate, Hz.
    pub f_s: f64,
    /// OFDM symbol rate over all subcarriers, Hz.
    pub f_sym: f64,
    pub n_sc: u32,
    /// Useful symbol duration, seconds.
    pub t_s: f64,
    /// Guard duration, seconds.
    pub t_g: f64,
    /// Pilot symbols per slot.
    pub tau: u32,
    /// Symbols per slot.
    pub t_slot: u32,
    /// Update frequencies in Hz; `None` means once per slot, `f_sym / T`.
    pub f_pre: Option<f64>,
    pub f_csi: Option<f64>,
    /// Two-stage frequencies; baseband defaults to the slot rate, RF to a
    /// hundredth of it.
    pub f_pre_bb: Option<f64>,
    pub f_pre_rf: Option<f64>,
    pub f_csi_bb: Option<f64>,
    pub f_csi_rf: Option<f64>,
}

impl Default for FronthaulParams {
    fn default() -> Self {
        let n_sc = 1200;
        let f_sym = 16.8e6;
        let t_s = 1.0 / 15e3;
        FronthaulParams {
            alpha: CPRI_ALPHA,
            b_iq: 30.0,
            b_ds: 8.0,
            b_real: 16.0,
            f_s: 30.72e6,
            f_sym,
            n_sc,
            t_s,
            t_g: n_sc as f64 / f_sym - t_s,
            tau: 4,
            t_slot: 14,
            f_pre: None,
            f_csi: None,
            f_pre_bb: None,
            f_pre_rf: None,
            f_csi_bb: None,
            f_csi_rf: None,
        }
    }
}

/// Long-term RF updates default to this fraction of the slot rate.
const RF_UPDATE_FRACTION: f64 = 0.01;

impl FronthaulParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |key: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(key, "must be a finite non-negative number"))
            }
        };
        if !(self.alpha >= 1.0 && self.alpha.is_finite()) {
            return Err(Error::config("fronthaul.alpha", "must be at least 1"));
        }
        positive("fronthaul.b_iq", self.b_iq)?;
        positive("fronthaul.b_ds", self.b_ds)?;
        positive("fronthaul.b_real", self.b_real)?;
        positive("fronthaul.f_s", self.f_s)?;
        positive("fronthaul.f_sym", self.f_sym)?;
        positive("fronthaul.t_s", self.t_s)?;
        positive("fronthaul.t_g", self.t_g)?;
        if self.t_slot == 0 || self.tau >= self.t_slot {
            return Err(Error::config("fronthaul.tau", "pilot symbols must satisfy 0 <= tau < t_slot"));
        }
        let derived = self.n_sc as f64 / (self.t_s + self.t_g);
        if (derived - self.f_sym).abs() > 1e-9 * self.f_sym.max(1.0) {
            return Err(Error::config(
                "fronthaul.f_sym",
                format!("must equal n_sc / (t_s + t_g) = {derived}"),
            ));
        }
        for (key, v) in [
            ("fronthaul.f_pre", self.f_pre),
            ("fronthaul.f_csi", self.f_csi),
            ("fronthaul.f_pre_bb", self.f_pre_bb),
            ("fronthaul.f_pre_rf", self.f_pre_rf),
            ("fronthaul.f_csi_bb", self.f_csi_bb),
            ("fronthaul.f_csi_rf", self.f_csi_rf),
        ] {
            if let Some(v) = v {
                positive(key, v)?;
            }
        }
        Ok(())
    }

    pub fn tau_over_t(&self) -> f64 {
        self.tau as f64 / self.t_slot as f64
    }

    pub fn slot_rate(&self) -> f64 {
        self.f_sym / self.t_slot as f64
    }

    pub fn f_pre(&self) -> f64 {
        self.f_pre.unwrap_or_else(|| self.slot_rate())
    }

    pub fn f_csi(&self) -> f64 {
        self.f_csi.unwrap_or_else(|| self.slot_rate())
    }

    pub fn f_pre_bb(&self) -> f64 {
        self.f_pre_bb.unwrap_or_else(|| self.f_pre())
    }

    pub fn f_pre_rf(&self) -> f64 {
        self.f_pre_rf.unwrap_or_else(|| self.f_pre() * RF_UPDATE_FRACTION)
    }

    pub fn f_csi_bb(&self) -> f64 {
        self.f_csi_bb.unwrap_or_else(|| self.f_csi())
    }

    pub fn f_csi_rf(&self) -> f64 {
        self.f_csi_rf.unwrap_or_else(|| self.f_csi() * RF_UPDATE_FRACTION)
    }

    /// Digitized IQ samples of `m` antennas (per direction).
    pub fn r_iq(&self, m: usize) -> f64 {
        self.alpha * m as f64 * self.b_iq * self.f_s
    }

    /// Modulated data symbols of `k` users.
    pub fn r_data_symbol(&self, k: usize) -> f64 {
        self.alpha * (1.0 - self.tau_over_t()) * k as f64 * self.b_ds * self.f_sym
    }

    pub fn r_precoder(&self, m: usize, k: usize) -> f64 {
        self.alpha * m as f64 * k as f64 * self.b_iq * self.f_pre()
    }

    pub fn r_le_csi(&self, m: usize, k: usize) -> f64 {
        self.alpha * m as f64 * k as f64 * self.b_iq * self.f_csi()
    }

    /// Received pilot IQ samples of `m` antennas during channel training.
    pub fn r_pilot_iq(&self, m: usize) -> f64 {
        self.alpha * m as f64 * self.tau_over_t() * self.b_iq * self.f_sym
    }

    /// One real-valued channel quality report per user; independent of `M`.
    pub fn r_partial_csi(&self, k: usize) -> f64 {
        self.alpha * k as f64 * self.b_real * self.f_csi()
    }

    fn two_stage(&self, m: usize, s: usize, k: usize, f_bb: f64, f_rf: f64) -> f64 {
        debug_assert!(1 <= s && s <= m, "RF chains must satisfy 1 <= S <= M");
        let (m, s, k) = (m as f64, s as f64, k as f64);
        self.alpha * (s * k * self.b_iq * f_bb + m * k * self.b_iq * f_rf)
    }

    pub fn r_two_stage_precoder(&self, m: usize, s: usize, k: usize) -> f64 {
        self.two_stage(m, s, k, self.f_pre_bb(), self.f_pre_rf())
    }

    pub fn r_two_stage_csi(&self, m: usize, s: usize, k: usize) -> f64 {
        self.two_stage(m, s, k, self.f_csi_bb(), self.f_csi_rf())
    }
}

/// Radio-over-fiber needs one wavelength per active antenna or RF chain.
pub fn rof_wavelengths(active_chains: usize) -> usize {
    active_chains
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    /// Fully centralized, digitized IQ over CPRI.
    FcIq,
    /// Fully centralized, analog radio over fiber.
    FcRof,
    PcCentralized,
    PcDistributed,
}

/// How a centralized RRH feeds channel knowledge back to the BBU pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CsiOption {
    PilotIq,
    LeCsi,
    Partial,
}

impl CsiOption {
    pub fn name(&self) -> &'static str {
        match self {
            CsiOption::PilotIq => "pilot-iq",
            CsiOption::LeCsi => "le-csi",
            CsiOption::Partial => "partial",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pilot-iq" => Some(CsiOption::PilotIq),
            "le-csi" => Some(CsiOption::LeCsi),
            "partial" => Some(CsiOption::Partial),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakdownOptions {
    pub csi: CsiOption,
    pub two_stage: bool,
    /// Adds uplink data-symbol traffic to the PC-RAN architectures.
    pub uplink_payload: bool,
}

impl Default for BreakdownOptions {
    fn default() -> Self {
        BreakdownOptions {
            csi: CsiOption::PilotIq,
            two_stage: false,
            uplink_payload: false,
        }
    }
}

/// Fronthaul load of one RRH. Every rate is bits/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FronthaulBreakdown {
    pub architecture: Architecture,
    /// Downlink user plane: IQ samples (FC) or data symbols (PC).
    pub dl_payload: f64,
    pub dl_precoder: f64,
    pub ul_csi: f64,
    /// Uplink user plane: IQ samples (FC) or data symbols when enabled (PC).
    pub ul_payload: f64,
    pub wavelengths: usize,
    pub total: f64,
}

impl FronthaulBreakdown {
    fn new(architecture: Architecture, dl_payload: f64, dl_precoder: f64, ul_csi: f64, ul_payload: f64) -> Self {
        FronthaulBreakdown {
            architecture,
            dl_payload,
            dl_precoder,
            ul_csi,
            ul_payload,
            wavelengths: 0,
            total: dl_payload + dl_precoder + ul_csi + ul_payload,
        }
    }

    /// Zero load, e.g. an RRH without scheduled users.
    pub fn idle(architecture: Architecture) -> Self {
        Self::new(architecture, 0.0, 0.0, 0.0, 0.0)
    }
}

/// Composes the per-RRH fronthaul load for `m` antennas, `s` RF chains and
/// `k` scheduled users. With two-stage precoding only `s` chains are
/// digitized and the precoder/CSI terms use the two-stage rates.
pub fn rrh_breakdown(
    arch: Architecture,
    p: &FronthaulParams,
    m: usize,
    s: usize,
    k: usize,
    opts: BreakdownOptions,
) -> Result<FronthaulBreakdown> {
    let chains = if opts.two_stage { s } else { m };
    let ul_symbols = |k| if opts.uplink_payload { p.r_data_symbol(k) } else { 0.0 };
    let b = match arch {
        Architecture::FcIq => {
            let iq = p.r_iq(chains);
            FronthaulBreakdown::new(arch, iq, 0.0, 0.0, iq)
        }
        Architecture::FcRof => FronthaulBreakdown {
            wavelengths: rof_wavelengths(chains),
            ..FronthaulBreakdown::idle(arch)
        },
        Architecture::PcCentralized => {
            let precoder = if opts.two_stage {
                p.r_two_stage_precoder(m, s, k)
            } else {
                p.r_precoder(m, k)
            };
            let csi = match opts.csi {
                CsiOption::PilotIq => p.r_pilot_iq(m),
                CsiOption::LeCsi if opts.two_stage => p.r_two_stage_csi(m, s, k),
                CsiOption::LeCsi => p.r_le_csi(m, k),
                CsiOption::Partial => return Err(Error::PartialCsiForCentralized),
            };
            FronthaulBreakdown::new(arch, p.r_data_symbol(k), precoder, csi, ul_symbols(k))
        }
        Architecture::PcDistributed => {
            FronthaulBreakdown::new(arch, p.r_data_symbol(k), 0.0, p.r_partial_csi(k), ul_symbols(k))
        }
    };
    Ok(b)
}
