//! System-level Monte-Carlo simulator for heterogeneous cloud radio access
//! networks with large-scale antenna RRHs.
//!
//! The crate evaluates, drop by drop, the wireless sum-rate of zero-forcing
//! and conjugate precoding together with the fronthaul bit rate each
//! architecture split needs:
//!
//! * [`topology`]: RRH/user placement, association, scheduling.
//! * [`channel`]: path loss and Rayleigh channels with optional CSI error.
//! * [`precoding`]: MRT, ZF, victim-nulling ZF, SINR and sum-rate.
//! * [`fronthaul`]: IQ, data-symbol, precoder and CSI transport rates.
//! * [`policy`]: centralized/distributed classification for hybrid mode.
//! * [`experiment`]: seeded drops and sweeps over the small-RRH count.

pub mod channel;
pub mod error;
pub mod experiment;
pub mod fronthaul;
pub mod policy;
pub mod precoding;
pub mod topology;

pub use nalgebra;
pub use num_complex;

pub use channel::{ChannelSet, LargeScaleGains, PathLoss, RadioParams};
pub use error::{Error, Result};
pub use experiment::{
    run_drop, run_sweep, DropResult, Flags, Mode, ModeResult, ModeStats, PolicyParams, ScenarioConfig, Summary,
    SweepPoint, SweepResult,
};
pub use fronthaul::{Architecture, BreakdownOptions, CsiOption, FronthaulBreakdown, FronthaulParams};
pub use precoding::{LinkReport, PrecoderSet, RrhPrecoder};
pub use topology::{PrecodingMode, Rrh, RrhId, Tier, Topology, User, UserId};
