//! CSV, manifest and console renderings of a sweep.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use hcran_core::{Mode, ScenarioConfig, SweepResult};
use sha2::{Digest, Sha256};

use crate::config_file::resolved_entries;
use crate::CliError;

pub const CSV_HEADER: &str = "n_small,mode,sumrate_mean_bps,sumrate_ci_bps,fronthaul_mean_bps,fronthaul_ci_bps,dl_payload_bps,dl_precoder_bps,ul_csi_bps,n_centralized_mean";

/// Decimal rendering with six significant digits, e.g. `629146000000`,
/// `0.500000`, `0.00123457`.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let body = if exp >= 5 {
        format!("{digits}{}", "0".repeat((exp - 5) as usize))
    } else if exp >= 0 {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Renders the sweep as CSV, rows ordered by `n_small` then mode name.
pub fn render_csv(sweep: &SweepResult) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');

    let mut points: Vec<_> = sweep.points.iter().collect();
    points.sort_by_key(|p| p.n_small);
    for point in points {
        let mut modes: Vec<_> = point.modes.iter().collect();
        modes.sort_by_key(|m| m.mode.name());
        for m in modes {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                point.n_small,
                m.mode.name(),
                sig6(m.sum_rate.mean),
                sig6(m.sum_rate.ci95),
                sig6(m.fronthaul.mean),
                sig6(m.fronthaul.ci95),
                sig6(m.dl_payload_mean),
                sig6(m.dl_precoder_mean),
                sig6(m.ul_csi_mean),
                sig6(m.n_centralized_mean),
            )
            .expect("writing to a String");
        }
    }
    out
}

pub fn emit_csv(sweep: &SweepResult, path: &Path) -> Result<(), CliError> {
    fs::write(path, render_csv(sweep)).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

pub fn manifest_path(csv: &Path) -> PathBuf {
    let mut name = csv.as_os_str().to_owned();
    name.push(".manifest");
    PathBuf::from(name)
}

/// Manifest text: run metadata under `meta.` followed by the fully
/// resolved configuration. The digest covers the configuration lines only.
pub fn render_manifest(cfg: &ScenarioConfig, skipped_drops: usize, timestamp_unix: u64) -> String {
    let body: String = resolved_entries(cfg)
        .into_iter()
        .map(|(k, v)| format!("{k}={v}\n"))
        .collect();
    let digest = Sha256::digest(body.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();

    let mut out = String::new();
    out.push_str("# hcran-sim run manifest; load with --config to reproduce\n");
    writeln!(out, "meta.version={}", env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(out, "meta.timestamp_unix={timestamp_unix}").unwrap();
    writeln!(out, "meta.skipped_drops={skipped_drops}").unwrap();
    writeln!(out, "meta.config_sha256={hex}").unwrap();
    out.push_str(&body);
    out
}

/// Human-readable table of the sweep means.
pub fn render_summary(sweep: &SweepResult) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:>7}  {:<9}  {:>14}  {:>10}  {:>14}  {:>10}  {:>7}",
        "n_small", "mode", "sum-rate Mb/s", "± CI", "fronthaul Gb/s", "± CI", "n_cent"
    )
    .unwrap();
    for p in &sweep.points {
        for &mode in &Mode::ALL {
            let m = p.mode(mode);
            writeln!(
                out,
                "{:>7}  {:<9}  {:>14.1}  {:>10.1}  {:>14.2}  {:>10.2}  {:>7.2}",
                p.n_small,
                mode.name(),
                m.sum_rate.mean / 1e6,
                m.sum_rate.ci95 / 1e6,
                m.fronthaul.mean / 1e9,
                m.fronthaul.ci95 / 1e9,
                m.n_centralized_mean,
            )
            .unwrap();
        }
        if !p.skipped.is_empty() {
            writeln!(out, "         {} drop(s) skipped at n_small={}", p.skipped.len(), p.n_small).unwrap();
        }
    }
    out
}
