//! Experiment configuration: defaults, `key = value` config files, CLI flags,
//! and the precedence between them (flags over file over defaults).

use crate::channel::{distances, SystemParams, Topology};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Baseline operating point used when nothing is overridden.
pub mod defaults {
    pub const CARRIER_HZ: f64 = 5e9;
    pub const BANDWIDTH_HZ: f64 = 20e6;
    pub const NOISE_DBM_HZ: f64 = -174.0;
    pub const PS_DBM: f64 = 40.0;
    pub const PR_DBM: f64 = 40.0;
    pub const P_DBM: f64 = 40.0;
    pub const TAU: f64 = 3.0;
    pub const N_RELAY: usize = 4;
    pub const M_MONITOR: usize = 4;
    pub const TRIALS: u64 = 1000;
    pub const SEED: u64 = 1;
}

#[derive(Debug, Error)]
pub enum ConfigError {
    /// Help or version was requested; the payload is the text to print.
    #[error("{0}")]
    HelpRequested(String),
    #[error("{0}")]
    Usage(String),
    #[error("unknown config key `{key}`{location}")]
    UnknownKey { key: String, location: String },
    #[error("malformed value for `{key}`: `{value}` ({reason})")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("{what} out of range: {detail}")]
    OutOfRange { what: String, detail: String },
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Watts to dBm.
pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

/// Noise power in watts from a density in dBm/Hz over a bandwidth in Hz.
pub fn noise_watts(density_dbm_hz: f64, bandwidth_hz: f64) -> f64 {
    dbm_to_watts(density_dbm_hz + 10.0 * bandwidth_hz.log10())
}

/// Scheme identifiers, also the CSV vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Strategy1,
    Strategy2,
    BenchEe,
    BenchEj,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::Strategy1,
        Scheme::Strategy2,
        Scheme::BenchEe,
        Scheme::BenchEj,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Scheme::Strategy1 => "strategy1",
            Scheme::Strategy2 => "strategy2",
            Scheme::BenchEe => "bench_ee",
            Scheme::BenchEj => "bench_ej",
        }
    }

    /// Stable order used when sorting records.
    pub fn sort_key(&self) -> u8 {
        match self {
            Scheme::Strategy1 => 0,
            Scheme::Strategy2 => 1,
            Scheme::BenchEe => 2,
            Scheme::BenchEj => 3,
        }
    }

    fn parse(token: &str) -> Result<Scheme, ConfigError> {
        match token.trim().to_ascii_lowercase().as_str() {
            "s1" | "strategy1" => Ok(Scheme::Strategy1),
            "s2" | "strategy2" => Ok(Scheme::Strategy2),
            "ee" | "bench_ee" => Ok(Scheme::BenchEe),
            "ej" | "bench_ej" => Ok(Scheme::BenchEj),
            other => Err(ConfigError::BadValue {
                key: "schemes".into(),
                value: other.into(),
                reason: "expected one of s1, s2, ee, ej".into(),
            }),
        }
    }
}

fn parse_schemes(spec: &str) -> Result<Vec<Scheme>, ConfigError> {
    let mut out = Vec::new();
    for token in spec.split(',').filter(|t| !t.trim().is_empty()) {
        let s = Scheme::parse(token)?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    if out.is_empty() {
        return Err(ConfigError::BadValue {
            key: "schemes".into(),
            value: spec.into(),
            reason: "empty scheme list".into(),
        });
    }
    Ok(out)
}

/// What is swept, and over which grid.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepKind {
    /// One grid point, no sweep variable.
    Single,
    /// Monitor power budget grid in dBm.
    Power { p_dbm: Vec<f64> },
    /// Monitor x-coordinate grid in km at a fixed y.
    PositionX { ex_km: Vec<f64>, ey_km: f64 },
}

impl SweepKind {
    pub fn label(&self) -> &'static str {
        match self {
            SweepKind::Single => "single",
            SweepKind::Power { .. } => "power",
            SweepKind::PositionX { .. } => "position_x",
        }
    }

    /// Grid values in sweep order; `Single` contributes one placeholder.
    pub fn grid(&self) -> Vec<f64> {
        match self {
            SweepKind::Single => vec![0.0],
            SweepKind::Power { p_dbm } => p_dbm.clone(),
            SweepKind::PositionX { ex_km, .. } => ex_km.clone(),
        }
    }
}

/// Sweep definition: the grid and which schemes run on it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub schemes: Vec<Scheme>,
}

/// Fully resolved experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Powers, noise, exponent, antenna counts; `p_max_w` is the budget used
    /// wherever the sweep does not override it.
    pub params: SystemParams,
    pub topology: Topology,
    /// Carried in reports for context; the path-loss model does not use it.
    pub carrier_hz: f64,
    pub trials: u64,
    pub master_seed: u64,
    pub sweep: SweepSpec,
    pub out: Option<PathBuf>,
    pub raw: bool,
}

#[derive(Debug, Parser)]
#[command(
    name = "relaymon",
    about = "Link-level simulator of a monitor overseeing a relay-assisted link",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one channel realization and dump the solver internals.
    Single {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep the monitor power budget in dBm.
    SweepPower {
        /// Lowest budget in dBm.
        #[arg(long)]
        p_dbm_min: Option<f64>,
        /// Highest budget in dBm.
        #[arg(long)]
        p_dbm_max: Option<f64>,
        /// Grid step in dB.
        #[arg(long)]
        p_dbm_step: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep the monitor x-position in km at a fixed y.
    SweepPosition {
        /// Lowest x in km.
        #[arg(long)]
        ex_min: Option<f64>,
        /// Highest x in km.
        #[arg(long)]
        ex_max: Option<f64>,
        /// Grid step in km.
        #[arg(long)]
        ex_step: Option<f64>,
        /// Fixed y in km.
        #[arg(long)]
        ey: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args, Default)]
struct CommonArgs {
    /// Optional `key = value` config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Source transmit power in dBm.
    #[arg(long)]
    ps_dbm: Option<f64>,
    /// Relay transmit power in dBm.
    #[arg(long)]
    pr_dbm: Option<f64>,
    /// Monitor power budget in dBm (fixed value outside power sweeps).
    #[arg(long)]
    p_dbm: Option<f64>,
    /// Noise power density in dBm/Hz.
    #[arg(long)]
    noise_dbm_hz: Option<f64>,
    /// Bandwidth in Hz used to integrate the noise density.
    #[arg(long)]
    bandwidth_hz: Option<f64>,
    /// Direct noise power override in watts.
    #[arg(long)]
    n0_w: Option<f64>,
    /// Carrier frequency in Hz (reported, not used by the model).
    #[arg(long)]
    carrier_hz: Option<f64>,
    /// Path-loss exponent (at least 2).
    #[arg(long)]
    tau: Option<f64>,
    /// Relay antenna count.
    #[arg(long)]
    n: Option<usize>,
    /// Monitor antenna count.
    #[arg(long)]
    m: Option<usize>,
    /// Source position "x,y" in km.
    #[arg(long)]
    pos_s: Option<String>,
    /// Relay position "x,y" in km.
    #[arg(long)]
    pos_r: Option<String>,
    /// Destination position "x,y" in km.
    #[arg(long)]
    pos_d: Option<String>,
    /// Monitor position "x,y" in km.
    #[arg(long)]
    pos_e: Option<String>,
    /// Monte-Carlo trials per grid point.
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed; each trial derives its own stream from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated subset of s1,s2,ee,ej.
    #[arg(long)]
    schemes: Option<String>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit one row per trial instead of the aggregated summary.
    #[arg(long)]
    raw: bool,
}

/// Values picked up from a config file.
#[derive(Debug, Default)]
struct FileValues {
    ps_dbm: Option<f64>,
    pr_dbm: Option<f64>,
    p_dbm: Option<f64>,
    noise_dbm_hz: Option<f64>,
    bandwidth_hz: Option<f64>,
    n0_w: Option<f64>,
    carrier_hz: Option<f64>,
    tau: Option<f64>,
    n: Option<usize>,
    m: Option<usize>,
    pos_s: Option<String>,
    pos_r: Option<String>,
    pos_d: Option<String>,
    pos_e: Option<String>,
    trials: Option<u64>,
    seed: Option<u64>,
    schemes: Option<String>,
    out: Option<PathBuf>,
    raw: Option<bool>,
    p_dbm_min: Option<f64>,
    p_dbm_max: Option<f64>,
    p_dbm_step: Option<f64>,
    ex_min: Option<f64>,
    ex_max: Option<f64>,
    ex_step: Option<f64>,
    ey: Option<f64>,
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.trim().parse().map_err(|e| ConfigError::BadValue {
        key: key.into(),
        value: value.trim().into(),
        reason: format!("{e}"),
    })
}

fn parse_file(path: &Path) -> Result<FileValues, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut vals = FileValues::default();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key_raw, value) = line.split_once('=').ok_or_else(|| ConfigError::BadValue {
            key: format!("{}:{}", path.display(), lineno + 1),
            value: line.into(),
            reason: "expected `key = value`".into(),
        })?;
        let key = key_raw.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "ps_dbm" => vals.ps_dbm = Some(parse_num(&key, value)?),
            "pr_dbm" => vals.pr_dbm = Some(parse_num(&key, value)?),
            "p_dbm" => vals.p_dbm = Some(parse_num(&key, value)?),
            "noise_dbm_hz" => vals.noise_dbm_hz = Some(parse_num(&key, value)?),
            "bandwidth_hz" => vals.bandwidth_hz = Some(parse_num(&key, value)?),
            "n0_w" => vals.n0_w = Some(parse_num(&key, value)?),
            "carrier_hz" => vals.carrier_hz = Some(parse_num(&key, value)?),
            "tau" => vals.tau = Some(parse_num(&key, value)?),
            "n" => vals.n = Some(parse_num(&key, value)?),
            "m" => vals.m = Some(parse_num(&key, value)?),
            "pos_s" => vals.pos_s = Some(value.into()),
            "pos_r" => vals.pos_r = Some(value.into()),
            "pos_d" => vals.pos_d = Some(value.into()),
            "pos_e" => vals.pos_e = Some(value.into()),
            "trials" => vals.trials = Some(parse_num(&key, value)?),
            "seed" => vals.seed = Some(parse_num(&key, value)?),
            "schemes" => vals.schemes = Some(value.into()),
            "out" => vals.out = Some(PathBuf::from(value)),
            "raw" => vals.raw = Some(parse_num(&key, value)?),
            "p_dbm_min" => vals.p_dbm_min = Some(parse_num(&key, value)?),
            "p_dbm_max" => vals.p_dbm_max = Some(parse_num(&key, value)?),
            "p_dbm_step" => vals.p_dbm_step = Some(parse_num(&key, value)?),
            "ex_min" => vals.ex_min = Some(parse_num(&key, value)?),
            "ex_max" => vals.ex_max = Some(parse_num(&key, value)?),
            "ex_step" => vals.ex_step = Some(parse_num(&key, value)?),
            "ey" => vals.ey = Some(parse_num(&key, value)?),
            other => {
                return Err(ConfigError::UnknownKey {
                    key: other.into(),
                    location: format!(" in {}:{}", path.display(), lineno + 1),
                })
            }
        }
    }
    Ok(vals)
}

fn parse_position(key: &str, value: &str) -> Result<(f64, f64), ConfigError> {
    let mut parts = value.split(',');
    let (x, y) = match (parts.next(), parts.next(), parts.next()) {
        (Some(x), Some(y), None) => (x, y),
        _ => {
            return Err(ConfigError::BadValue {
                key: key.into(),
                value: value.into(),
                reason: "expected `x,y`".into(),
            })
        }
    };
    Ok((parse_num(key, x)?, parse_num(key, y)?))
}

fn build_grid(
    what: &str,
    min: f64,
    max: f64,
    step: f64,
) -> Result<Vec<f64>, ConfigError> {
    if !min.is_finite() || !max.is_finite() || !step.is_finite() {
        return Err(ConfigError::OutOfRange {
            what: what.into(),
            detail: "grid bounds must be finite".into(),
        });
    }
    if step <= 0.0 {
        return Err(ConfigError::OutOfRange {
            what: what.into(),
            detail: format!("step must be positive (got {step})"),
        });
    }
    if max < min {
        return Err(ConfigError::OutOfRange {
            what: what.into(),
            detail: format!("max {max} below min {min}"),
        });
    }
    let mut grid = Vec::new();
    let mut i = 0u64;
    loop {
        let v = min + step * i as f64;
        if v > max + step * 1e-9 {
            break;
        }
        grid.push(v.min(max));
        i += 1;
    }
    grid.dedup();
    Ok(grid)
}

struct Resolved {
    common: CommonArgs,
    file: FileValues,
}

impl Resolved {
    fn f64_of(
        &self,
        flag: Option<f64>,
        file: Option<f64>,
        default: f64,
    ) -> f64 {
        flag.or(file).unwrap_or(default)
    }
}

/// Parse command-line arguments (and the optional config file named by
/// `--config`) into a validated [`ExperimentConfig`].
///
/// Precedence: flags over file entries over baseline defaults.
pub fn parse_config<I, S>(args: I) -> Result<ExperimentConfig, ConfigError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            ConfigError::HelpRequested(e.to_string())
        }
        _ => ConfigError::Usage(e.to_string()),
    })?;
    match cli.command {
        Command::Single { common } => finish(common, SweepRequest::Single),
        Command::SweepPower {
            p_dbm_min,
            p_dbm_max,
            p_dbm_step,
            common,
        } => finish(
            common,
            SweepRequest::Power {
                min: p_dbm_min,
                max: p_dbm_max,
                step: p_dbm_step,
            },
        ),
        Command::SweepPosition {
            ex_min,
            ex_max,
            ex_step,
            ey,
            common,
        } => finish(
            common,
            SweepRequest::Position {
                min: ex_min,
                max: ex_max,
                step: ex_step,
                ey,
            },
        ),
    }
}

enum SweepRequest {
    Single,
    Power {
        min: Option<f64>,
        max: Option<f64>,
        step: Option<f64>,
    },
    Position {
        min: Option<f64>,
        max: Option<f64>,
        step: Option<f64>,
        ey: Option<f64>,
    },
}

fn finish(common: CommonArgs, request: SweepRequest) -> Result<ExperimentConfig, ConfigError> {
    let file = match &common.config {
        Some(path) => parse_file(path)?,
        None => FileValues::default(),
    };
    let r = Resolved { common, file };

    let ps_dbm = r.f64_of(r.common.ps_dbm, r.file.ps_dbm, defaults::PS_DBM);
    let pr_dbm = r.f64_of(r.common.pr_dbm, r.file.pr_dbm, defaults::PR_DBM);
    let p_dbm = r.f64_of(r.common.p_dbm, r.file.p_dbm, defaults::P_DBM);
    let noise_dbm_hz = r.f64_of(
        r.common.noise_dbm_hz,
        r.file.noise_dbm_hz,
        defaults::NOISE_DBM_HZ,
    );
    let bandwidth_hz = r.f64_of(
        r.common.bandwidth_hz,
        r.file.bandwidth_hz,
        defaults::BANDWIDTH_HZ,
    );
    let carrier_hz = r.f64_of(r.common.carrier_hz, r.file.carrier_hz, defaults::CARRIER_HZ);
    let tau = r.f64_of(r.common.tau, r.file.tau, defaults::TAU);
    let n = r.common.n.or(r.file.n).unwrap_or(defaults::N_RELAY);
    let m = r.common.m.or(r.file.m).unwrap_or(defaults::M_MONITOR);
    let trials = r.common.trials.or(r.file.trials).unwrap_or(defaults::TRIALS);
    let master_seed = r.common.seed.or(r.file.seed).unwrap_or(defaults::SEED);
    let n0_w = match r.common.n0_w.or(r.file.n0_w) {
        Some(v) => v,
        None => noise_watts(noise_dbm_hz, bandwidth_hz),
    };

    let baseline = Topology::baseline();
    let mut topology = baseline;
    for (key, flag, file_v, slot) in [
        ("pos_s", &r.common.pos_s, &r.file.pos_s, 0usize),
        ("pos_r", &r.common.pos_r, &r.file.pos_r, 1),
        ("pos_d", &r.common.pos_d, &r.file.pos_d, 2),
        ("pos_e", &r.common.pos_e, &r.file.pos_e, 3),
    ] {
        if let Some(text) = flag.as_ref().or(file_v.as_ref()) {
            let p = parse_position(key, text)?;
            match slot {
                0 => topology.pos_s = p,
                1 => topology.pos_r = p,
                2 => topology.pos_d = p,
                _ => topology.pos_e = p,
            }
        }
    }

    let schemes = match r.common.schemes.as_ref().or(r.file.schemes.as_ref()) {
        Some(spec) => parse_schemes(spec)?,
        None => Scheme::ALL.to_vec(),
    };

    let kind = match request {
        SweepRequest::Single => SweepKind::Single,
        SweepRequest::Power { min, max, step } => {
            let min = min.or(r.file.p_dbm_min).unwrap_or(0.0);
            let max = max.or(r.file.p_dbm_max).unwrap_or(60.0);
            let step = step.or(r.file.p_dbm_step).unwrap_or(5.0);
            SweepKind::Power {
                p_dbm: build_grid("power grid (dBm)", min, max, step)?,
            }
        }
        SweepRequest::Position { min, max, step, ey } => {
            let min = min.or(r.file.ex_min).unwrap_or(0.0);
            let max = max.or(r.file.ex_max).unwrap_or(4.0);
            let step = step.or(r.file.ex_step).unwrap_or(0.5);
            let ey = ey.or(r.file.ey).unwrap_or(3.0);
            if !ey.is_finite() {
                return Err(ConfigError::OutOfRange {
                    what: "ey".into(),
                    detail: "must be finite".into(),
                });
            }
            SweepKind::PositionX {
                ex_km: build_grid("position grid (km)", min, max, step)?,
                ey_km: ey,
            }
        }
    };

    let params = SystemParams {
        ps_w: dbm_to_watts(ps_dbm),
        pr_w: dbm_to_watts(pr_dbm),
        p_max_w: dbm_to_watts(p_dbm),
        n0_w,
        tau,
        n_relay: n,
        m_monitor: m,
    };
    params.validate().map_err(|detail| ConfigError::OutOfRange {
        what: "system parameters".into(),
        detail,
    })?;
    if trials < 1 {
        return Err(ConfigError::OutOfRange {
            what: "trials".into(),
            detail: "must be at least 1".into(),
        });
    }
    // Reject co-located nodes up front; position sweeps re-check per point.
    if !matches!(kind, SweepKind::PositionX { .. }) {
        distances(&topology).map_err(|e| ConfigError::OutOfRange {
            what: "topology".into(),
            detail: e.to_string(),
        })?;
    }

    Ok(ExperimentConfig {
        params,
        topology,
        carrier_hz,
        trials,
        master_seed,
        sweep: SweepSpec { kind, schemes },
        out: r.common.out.or(r.file.out),
        raw: r.common.raw || r.file.raw.unwrap_or(false),
    })
}
