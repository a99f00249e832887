//! Command-line driver: resolves configuration (defaults, then config file,
//! then flags), runs the sweep and writes the CSV plus a manifest.

pub mod config_file;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use hcran_core::{run_sweep, ScenarioConfig};
use thiserror::Error;

pub const THREADS_ENV: &str = "HCRAN_SIM_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("simulation failed: {0}")]
    Runtime(hcran_core::Error),
}

impl CliError {
    pub fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 1,
            CliError::Io { .. } | CliError::Runtime(_) => 2,
        }
    }
}

impl From<hcran_core::Error> for CliError {
    fn from(e: hcran_core::Error) -> Self {
        match e {
            hcran_core::Error::InvalidConfig { key, reason } => CliError::Config { key, reason },
            other => CliError::Runtime(other),
        }
    }
}

/// Sweep H-CRAN sum-rate and fronthaul load over the number of small RRHs.
#[derive(Debug, Parser)]
#[command(name = "hcran-sim", version)]
pub struct Args {
    /// key=value configuration file (a previous run's .manifest works too)
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// CSV output path; the manifest is written next to it with suffix .manifest
    #[arg(long, value_name = "PATH", default_value = "results.csv")]
    pub out: PathBuf,

    /// Master seed
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,

    /// Monte-Carlo drops per sweep point
    #[arg(long, value_name = "N")]
    pub drops: Option<usize>,

    /// Comma-separated small-RRH counts, e.g. 0,10,20,30,40
    #[arg(long, value_name = "LIST")]
    pub small_rrhs: Option<String>,

    /// Victim INR threshold for centralized precoding in hybrid mode (dB, accepts inf/-inf)
    #[arg(long, value_name = "F", allow_hyphen_values = true)]
    pub hybrid_threshold_db: Option<String>,

    /// CSI feedback of centralized RRHs: pilot-iq, le-csi or partial
    #[arg(long, value_name = "MODE")]
    pub csi: Option<String>,

    /// Two-stage (RF + baseband) precoding fronthaul rates
    #[arg(long)]
    pub two_stage: bool,

    /// Joint zero-forcing across all centralized RRHs
    #[arg(long)]
    pub joint_zf: bool,

    /// Include uplink data symbols in PC-RAN fronthaul
    #[arg(long)]
    pub uplink_payload: bool,

    /// Log-normal shadowing
    #[arg(long)]
    pub shadowing: bool,

    /// Suppress the summary table
    #[arg(long)]
    pub quiet: bool,
}

/// Defaults, then the config file, then command-line flags.
pub fn resolve_config(args: &Args) -> Result<ScenarioConfig, CliError> {
    let mut cfg = ScenarioConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config("--config", format!("{}: {e}", path.display())))?;
        config_file::apply_text(&mut cfg, &text)?;
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(drops) = args.drops {
        cfg.drops = drops;
    }
    if let Some(list) = &args.small_rrhs {
        cfg.small_rrh_counts = config_file::parse_counts("--small-rrhs", list)?;
    }
    if let Some(t) = &args.hybrid_threshold_db {
        cfg.hybrid_threshold_db = t
            .parse()
            .map_err(|_| CliError::config("--hybrid-threshold-db", format!("cannot parse `{t}`")))?;
    }
    if let Some(csi) = &args.csi {
        cfg.csi = config_file::parse_csi("--csi", csi)?;
    }
    cfg.flags.two_stage |= args.two_stage;
    cfg.flags.joint_cluster_zf |= args.joint_zf;
    cfg.flags.uplink_payload |= args.uplink_payload;
    cfg.radio.shadowing |= args.shadowing;
    cfg.validate()?;
    Ok(cfg)
}

/// Worker count from the environment; 0 or unset lets rayon decide.
pub fn thread_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::config(THREADS_ENV, format!("expected a non-negative integer, got `{v}`"))),
        Err(_) => Ok(0),
    }
}

pub fn execute(args: &Args) -> Result<(), CliError> {
    let cfg = resolve_config(args)?;
    let threads = thread_count()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::config(THREADS_ENV, e.to_string()))?;
    let sweep = pool.install(|| run_sweep(&cfg))?;

    output::emit_csv(&sweep, &args.out)?;
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = output::manifest_path(&args.out);
    std::fs::write(&manifest, output::render_manifest(&cfg, sweep.skipped_drops(), timestamp)).map_err(|e| {
        CliError::Io {
            path: manifest.clone(),
            source: e,
        }
    })?;

    if !args.quiet {
        print!("{}", output::render_summary(&sweep));
        println!("wrote {} and {}", args.out.display(), manifest.display());
    }
    for p in &sweep.points {
        for s in &p.skipped {
            eprintln!("skipped drop {} at n_small={}: {}", s.drop_index, s.n_small, s.reason);
        }
    }
    Ok(())
}

/// Parses `argv` and runs; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("hcran-sim: {e}");
            e.exit_code()
        }
    }
}
