//! Link-level simulator of a legitimate multi-antenna monitor overseeing a
//! dual-hop decode-and-forward relay link.
//!
//! The monitor can jam the first slot with a designed beamformer, or listen
//! first and then help, keep listening, or jam with a tuned power, all to
//! maximize the rate at which it reliably decodes the suspicious message.
//! The crate provides the channel model, the closed-form and bisection
//! solvers for both strategies, two non-adaptive reference schemes, and a
//! deterministic Monte-Carlo sweep harness with CSV output.
//!
//! ```
//! use relaymon::channel::{sample_channels, SystemParams, Topology, TrialRng};
//! use relaymon::{eavesdrop_first, jam_first};
//!
//! let params = SystemParams {
//!     ps_w: 10.0,
//!     pr_w: 10.0,
//!     p_max_w: 10.0,
//!     n0_w: 7.96e-14,
//!     tau: 3.0,
//!     n_relay: 4,
//!     m_monitor: 4,
//! };
//! let mut rng = TrialRng::from_master(1, 0);
//! let ch = sample_channels(&params, &Topology::baseline(), &mut rng).unwrap();
//! let jam = jam_first::solve(&ch, &params).unwrap();
//! let adaptive = eavesdrop_first::solve(&ch, &params).unwrap();
//! assert!(jam.outcome.rate >= 0.0 && adaptive.outcome.rate >= 0.0);
//! ```

pub mod benchmarks;
pub mod channel;
pub mod config;
pub mod eavesdrop_first;
pub mod error;
pub mod experiment;
pub mod jam_first;
pub mod linalg;
pub mod rate;

#[cfg(test)]
pub(crate) mod testutil;

pub use channel::{
    derive_seed, distances, path_gain_denominator, sample_channels, ChannelRealization,
    LinkDistances, SystemParams, Topology, TrialRng,
};
pub use config::{parse_config, ConfigError, ExperimentConfig, Scheme, SweepKind, SweepSpec};
pub use error::{Error, Result};
pub use experiment::{run_records, run_records_serial, sweep, SummaryRow, TrialRecord};
pub use linalg::{project, project_orth, CMat, CVec, Cplx};
pub use rate::{
    effective_rate, gammas_eavesdrop_first, gammas_jam_first, phase1_snrs, LinkGammas,
    Phase1Action, Phase2Action, RatePair, StrategyOutcome,
};
