//! Flat `key = value` configuration files with dotted section keys.
//!
//! ```text
//! # comments start with '#'
//! drops = 100
//! small_rrh_counts = 0,10,20,30,40
//! fronthaul.b_ds = 8
//! radio.se_cap_bps_hz = none
//! ```
//!
//! Keys under `meta.` are written into manifests and ignored on load.

use std::str::FromStr;

use hcran_core::{CsiOption, ScenarioConfig};

use crate::CliError;

/// Parses `text` into `(key, value)` pairs in file order.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::config(
                format!("line {}", i + 1),
                "expected `key = value`",
            ));
        };
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::config(key, format!("cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::config(key, format!("expected true/false, got `{value}`"))),
    }
}

fn parse_optional(key: &str, value: &str) -> Result<Option<f64>, CliError> {
    if value == "none" || value == "auto" {
        Ok(None)
    } else {
        parse_value(key, value).map(Some)
    }
}

pub fn parse_counts(key: &str, value: &str) -> Result<Vec<usize>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(key, s))
        .collect()
}

pub fn parse_csi(key: &str, value: &str) -> Result<CsiOption, CliError> {
    CsiOption::parse(value).ok_or_else(|| {
        CliError::config(key, format!("expected pilot-iq, le-csi or partial, got `{value}`"))
    })
}

/// Applies one `key = value` pair on top of `cfg`.
pub fn apply(cfg: &mut ScenarioConfig, key: &str, value: &str) -> Result<(), CliError> {
    let v = value;
    match key {
        k if k.starts_with("meta.") => {}
        "n_users" => cfg.n_users = parse_value(key, v)?,
        "cell_radius_m" => cfg.cell_radius_m = parse_value(key, v)?,
        "min_separation_m" => cfg.min_separation_m = parse_value(key, v)?,
        "macro_antennas" => cfg.macro_antennas = parse_value(key, v)?,
        "small_antennas" => cfg.small_antennas = parse_value(key, v)?,
        "macro_rf_chains" => cfg.macro_rf_chains = parse_value(key, v)?,
        "small_rf_chains" => cfg.small_rf_chains = parse_value(key, v)?,
        "macro_power_dbm" => cfg.macro_power_dbm = parse_value(key, v)?,
        "small_power_dbm" => cfg.small_power_dbm = parse_value(key, v)?,
        "k_max" => cfg.k_max = parse_value(key, v)?,
        "small_rrh_counts" => cfg.small_rrh_counts = parse_counts(key, v)?,
        "drops" => cfg.drops = parse_value(key, v)?,
        "master_seed" => cfg.master_seed = parse_value(key, v)?,
        "hybrid_threshold_db" => cfg.hybrid_threshold_db = parse_value(key, v)?,
        "csi" => cfg.csi = parse_csi(key, v)?,
        "two_stage" => cfg.flags.two_stage = parse_bool(key, v)?,
        "joint_cluster_zf" => cfg.flags.joint_cluster_zf = parse_bool(key, v)?,
        "uplink_payload" => cfg.flags.uplink_payload = parse_bool(key, v)?,

        "policy.victim_floor_db" => cfg.policy.victim_floor_db = parse_value(key, v)?,
        "policy.macro_always_centralized" => cfg.policy.macro_always_centralized = parse_bool(key, v)?,
        "policy.spare_dof" => cfg.policy.spare_dof = parse_value(key, v)?,

        "radio.bandwidth_hz" => cfg.radio.bandwidth_hz = parse_value(key, v)?,
        "radio.macro_pl_intercept_db" => cfg.radio.macro_path_loss.intercept_db = parse_value(key, v)?,
        "radio.macro_pl_slope_db" => cfg.radio.macro_path_loss.slope_db = parse_value(key, v)?,
        "radio.small_pl_intercept_db" => cfg.radio.small_path_loss.intercept_db = parse_value(key, v)?,
        "radio.small_pl_slope_db" => cfg.radio.small_path_loss.slope_db = parse_value(key, v)?,
        "radio.min_distance_m" => cfg.radio.min_distance_m = parse_value(key, v)?,
        "radio.noise_psd_dbm_hz" => cfg.radio.noise_psd_dbm_hz = parse_value(key, v)?,
        "radio.noise_figure_db" => cfg.radio.noise_figure_db = parse_value(key, v)?,
        "radio.estimation_error_eps" => cfg.radio.estimation_error_eps = parse_value(key, v)?,
        "radio.shadowing" => cfg.radio.shadowing = parse_bool(key, v)?,
        "radio.macro_shadowing_db" => cfg.radio.macro_shadowing_db = parse_value(key, v)?,
        "radio.small_shadowing_db" => cfg.radio.small_shadowing_db = parse_value(key, v)?,
        "radio.se_cap_bps_hz" => cfg.radio.se_cap_bps_hz = parse_optional(key, v)?,

        "fronthaul.alpha" => cfg.fronthaul.alpha = parse_value(key, v)?,
        "fronthaul.b_iq" => cfg.fronthaul.b_iq = parse_value(key, v)?,
        "fronthaul.b_ds" => cfg.fronthaul.b_ds = parse_value(key, v)?,
        "fronthaul.b_real" => cfg.fronthaul.b_real = parse_value(key, v)?,
        "fronthaul.f_s" => cfg.fronthaul.f_s = parse_value(key, v)?,
        "fronthaul.f_sym" => cfg.fronthaul.f_sym = parse_value(key, v)?,
        "fronthaul.n_sc" => cfg.fronthaul.n_sc = parse_value(key, v)?,
        "fronthaul.t_s" => cfg.fronthaul.t_s = parse_value(key, v)?,
        "fronthaul.t_g" => cfg.fronthaul.t_g = parse_value(key, v)?,
        "fronthaul.tau" => cfg.fronthaul.tau = parse_value(key, v)?,
        "fronthaul.t_slot" => cfg.fronthaul.t_slot = parse_value(key, v)?,
        "fronthaul.f_pre" => cfg.fronthaul.f_pre = parse_optional(key, v)?,
        "fronthaul.f_csi" => cfg.fronthaul.f_csi = parse_optional(key, v)?,
        "fronthaul.f_pre_bb" => cfg.fronthaul.f_pre_bb = parse_optional(key, v)?,
        "fronthaul.f_pre_rf" => cfg.fronthaul.f_pre_rf = parse_optional(key, v)?,
        "fronthaul.f_csi_bb" => cfg.fronthaul.f_csi_bb = parse_optional(key, v)?,
        "fronthaul.f_csi_rf" => cfg.fronthaul.f_csi_rf = parse_optional(key, v)?,
        _ => return Err(CliError::config(key, "unknown configuration key")),
    }
    Ok(())
}

pub fn apply_text(cfg: &mut ScenarioConfig, text: &str) -> Result<(), CliError> {
    for (key, value) in parse(text)? {
        apply(cfg, &key, &value)?;
    }
    Ok(())
}

/// Every configuration key with its resolved value, in a fixed order.
/// Frequencies left at their slot-rate defaults are written out explicitly.
pub fn resolved_entries(cfg: &ScenarioConfig) -> Vec<(&'static str, String)> {
    let counts = cfg
        .small_rrh_counts
        .iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let fh = &cfg.fronthaul;
    let r = &cfg.radio;
    vec![
        ("n_users", cfg.n_users.to_string()),
        ("cell_radius_m", cfg.cell_radius_m.to_string()),
        ("min_separation_m", cfg.min_separation_m.to_string()),
        ("macro_antennas", cfg.macro_antennas.to_string()),
        ("small_antennas", cfg.small_antennas.to_string()),
        ("macro_rf_chains", cfg.macro_rf_chains.to_string()),
        ("small_rf_chains", cfg.small_rf_chains.to_string()),
        ("macro_power_dbm", cfg.macro_power_dbm.to_string()),
        ("small_power_dbm", cfg.small_power_dbm.to_string()),
        ("k_max", cfg.k_max.to_string()),
        ("small_rrh_counts", counts),
        ("drops", cfg.drops.to_string()),
        ("master_seed", cfg.master_seed.to_string()),
        ("hybrid_threshold_db", cfg.hybrid_threshold_db.to_string()),
        ("csi", cfg.csi.name().to_string()),
        ("two_stage", cfg.flags.two_stage.to_string()),
        ("joint_cluster_zf", cfg.flags.joint_cluster_zf.to_string()),
        ("uplink_payload", cfg.flags.uplink_payload.to_string()),
        ("policy.victim_floor_db", cfg.policy.victim_floor_db.to_string()),
        (
            "policy.macro_always_centralized",
            cfg.policy.macro_always_centralized.to_string(),
        ),
        ("policy.spare_dof", cfg.policy.spare_dof.to_string()),
        ("radio.bandwidth_hz", r.bandwidth_hz.to_string()),
        ("radio.macro_pl_intercept_db", r.macro_path_loss.intercept_db.to_string()),
        ("radio.macro_pl_slope_db", r.macro_path_loss.slope_db.to_string()),
        ("radio.small_pl_intercept_db", r.small_path_loss.intercept_db.to_string()),
        ("radio.small_pl_slope_db", r.small_path_loss.slope_db.to_string()),
        ("radio.min_distance_m", r.min_distance_m.to_string()),
        ("radio.noise_psd_dbm_hz", r.noise_psd_dbm_hz.to_string()),
        ("radio.noise_figure_db", r.noise_figure_db.to_string()),
        ("radio.estimation_error_eps", r.estimation_error_eps.to_string()),
        ("radio.shadowing", r.shadowing.to_string()),
        ("radio.macro_shadowing_db", r.macro_shadowing_db.to_string()),
        ("radio.small_shadowing_db", r.small_shadowing_db.to_string()),
        (
            "radio.se_cap_bps_hz",
            r.se_cap_bps_hz.map_or_else(|| "none".to_string(), |c| c.to_string()),
        ),
        ("fronthaul.alpha", fh.alpha.to_string()),
        ("fronthaul.b_iq", fh.b_iq.to_string()),
        ("fronthaul.b_ds", fh.b_ds.to_string()),
        ("fronthaul.b_real", fh.b_real.to_string()),
        ("fronthaul.f_s", fh.f_s.to_string()),
        ("fronthaul.f_sym", fh.f_sym.to_string()),
        ("fronthaul.n_sc", fh.n_sc.to_string()),
        ("fronthaul.t_s", fh.t_s.to_string()),
        ("fronthaul.t_g", fh.t_g.to_string()),
        ("fronthaul.tau", fh.tau.to_string()),
        ("fronthaul.t_slot", fh.t_slot.to_string()),
        ("fronthaul.f_pre", fh.f_pre().to_string()),
        ("fronthaul.f_csi", fh.f_csi().to_string()),
        ("fronthaul.f_pre_bb", fh.f_pre_bb().to_string()),
        ("fronthaul.f_pre_rf", fh.f_pre_rf().to_string()),
        ("fronthaul.f_csi_bb", fh.f_csi_bb().to_string()),
        ("fronthaul.f_csi_rf", fh.f_csi_rf().to_string()),
    ]
}
