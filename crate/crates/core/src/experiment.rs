//! Deterministic Monte-Carlo harness: paired trials, sweeps, aggregation,
//! and CSV output.
//!
//! Every scheme at a given `(sweep_value, trial_index)` sees the same channel
//! draw, so per-trial comparisons are exact. Trials derive independent seeds
//! from the master seed, and records are sorted before aggregation, so serial
//! and parallel runs produce byte-identical output.

use crate::benchmarks::{eval_ee, eval_ej};
use crate::channel::{sample_channels, SystemParams, Topology, TrialRng};
use crate::config::{ExperimentConfig, Scheme, SweepKind};
use crate::rate::Phase1Action;
use crate::{eavesdrop_first, jam_first};
use std::io::{self, Write};
use std::path::Path;

/// Branch label recorded when a solver reports a numerical failure instead
/// of an outcome.
pub const FAILURE_LABEL: &str = "numerical_failure";

/// One scheme evaluated on one channel draw at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub sweep_kind: &'static str,
    pub sweep_value: f64,
    pub scheme: Scheme,
    pub trial_index: u64,
    pub rate_bps_hz: f64,
    pub c_sd: f64,
    pub c_se: f64,
    /// Case or branch label, or [`FAILURE_LABEL`].
    pub branch: &'static str,
    /// Beam power for the jam-first scheme, slot-2 power otherwise.
    pub power_used_w: f64,
}

impl TrialRecord {
    pub fn is_failure(&self) -> bool {
        self.branch == FAILURE_LABEL
    }
}

/// Aggregated view of one `(sweep_value, scheme)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub sweep_kind: &'static str,
    pub sweep_value: f64,
    pub scheme: Scheme,
    pub mean_rate: f64,
    pub stderr: f64,
    pub trials: u64,
}

/// Parameters and topology in effect at one grid point.
pub fn at_sweep_value(cfg: &ExperimentConfig, sweep_value: f64) -> (SystemParams, Topology) {
    let mut params = cfg.params;
    let mut topology = cfg.topology;
    match &cfg.sweep.kind {
        SweepKind::Single => {}
        SweepKind::Power { .. } => {
            params.p_max_w = crate::config::dbm_to_watts(sweep_value);
        }
        SweepKind::PositionX { ey_km, .. } => {
            topology.pos_e = (sweep_value, *ey_km);
        }
    }
    (params, topology)
}

/// Evaluate one scheme on the channel draw shared by all schemes at this
/// `(sweep_value, trial_index)`. Solver failures come back as flagged
/// records rather than errors.
pub fn run_trial(
    cfg: &ExperimentConfig,
    sweep_value: f64,
    scheme: Scheme,
    trial_index: u64,
) -> TrialRecord {
    let (params, topology) = at_sweep_value(cfg, sweep_value);
    let kind = cfg.sweep.kind.label();
    let mut rng = TrialRng::from_master(cfg.master_seed, trial_index);
    let failed = |_e: crate::error::Error| TrialRecord {
        sweep_kind: kind,
        sweep_value,
        scheme,
        trial_index,
        rate_bps_hz: 0.0,
        c_sd: 0.0,
        c_se: 0.0,
        branch: FAILURE_LABEL,
        power_used_w: 0.0,
    };
    let ch = match sample_channels(&params, &topology, &mut rng) {
        Ok(ch) => ch,
        Err(e) => return failed(e),
    };
    let (outcome, branch) = match scheme {
        Scheme::Strategy1 => match jam_first::solve(&ch, &params) {
            Ok(sol) => (sol.outcome, sol.case.label()),
            Err(e) => return failed(e),
        },
        Scheme::Strategy2 => match eavesdrop_first::solve(&ch, &params) {
            Ok(sol) => (sol.outcome, sol.branch.label()),
            Err(e) => return failed(e),
        },
        Scheme::BenchEe => match eval_ee(&ch, &params) {
            Ok(out) => (out, "ee"),
            Err(e) => return failed(e),
        },
        Scheme::BenchEj => match eval_ej(&ch, &params) {
            Ok(out) => (out, "ej"),
            Err(e) => return failed(e),
        },
    };
    let power_used_w = match &outcome.phase1 {
        Phase1Action::JamBeam(w) => w.norm_sq(),
        Phase1Action::Listen => outcome.phase2.power_w(),
    };
    TrialRecord {
        sweep_kind: kind,
        sweep_value,
        scheme,
        trial_index,
        rate_bps_hz: outcome.rate,
        c_sd: outcome.rates.c_sd,
        c_se: outcome.rates.c_se,
        branch,
        power_used_w,
    }
}

fn work_items(cfg: &ExperimentConfig) -> Vec<(f64, Scheme, u64)> {
    let grid = cfg.sweep.kind.grid();
    let mut items = Vec::with_capacity(grid.len() * cfg.sweep.schemes.len() * cfg.trials as usize);
    for &value in &grid {
        for &scheme in &cfg.sweep.schemes {
            for trial in 0..cfg.trials {
                items.push((value, scheme, trial));
            }
        }
    }
    items
}

fn sort_records(records: &mut [TrialRecord]) {
    records.sort_by(|a, b| {
        a.sweep_value
            .total_cmp(&b.sweep_value)
            .then(a.scheme.sort_key().cmp(&b.scheme.sort_key()))
            .then(a.trial_index.cmp(&b.trial_index))
    });
}

/// Run every trial sequentially; always available as the reference path.
pub fn run_records_serial(cfg: &ExperimentConfig) -> Vec<TrialRecord> {
    let mut records: Vec<TrialRecord> = work_items(cfg)
        .iter()
        .map(|&(value, scheme, trial)| run_trial(cfg, value, scheme, trial))
        .collect();
    sort_records(&mut records);
    records
}

/// Run every trial across the rayon pool. Identical output to the serial
/// path because seeds are per-trial and records are sorted afterwards.
#[cfg(feature = "parallel")]
pub fn run_records_parallel(cfg: &ExperimentConfig) -> Vec<TrialRecord> {
    use rayon::prelude::*;
    let mut records: Vec<TrialRecord> = work_items(cfg)
        .par_iter()
        .map(|&(value, scheme, trial)| run_trial(cfg, value, scheme, trial))
        .collect();
    sort_records(&mut records);
    records
}

/// Run every trial, in parallel when the `parallel` feature is enabled.
pub fn run_records(cfg: &ExperimentConfig) -> Vec<TrialRecord> {
    #[cfg(feature = "parallel")]
    {
        run_records_parallel(cfg)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_records_serial(cfg)
    }
}

/// Aggregate sorted records into per-cell mean and standard error.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    let mut i = 0;
    while i < records.len() {
        let head = &records[i];
        let mut j = i;
        while j < records.len()
            && records[j].sweep_value == head.sweep_value
            && records[j].scheme == head.scheme
        {
            j += 1;
        }
        let cell = &records[i..j];
        let n = cell.len() as f64;
        let mean = cell.iter().map(|r| r.rate_bps_hz).sum::<f64>() / n;
        let stderr = if cell.len() > 1 {
            let ss = cell
                .iter()
                .map(|r| {
                    let d = r.rate_bps_hz - mean;
                    d * d
                })
                .sum::<f64>();
            (ss / (n - 1.0)).sqrt() / n.sqrt()
        } else {
            0.0
        };
        rows.push(SummaryRow {
            sweep_kind: head.sweep_kind,
            sweep_value: head.sweep_value,
            scheme: head.scheme,
            mean_rate: mean,
            stderr,
            trials: cell.len() as u64,
        });
        i = j;
    }
    rows
}

/// Run the configured sweep and aggregate it.
pub fn sweep(cfg: &ExperimentConfig) -> Vec<SummaryRow> {
    summarize(&run_records(cfg))
}

/// Decimal float formatting used in every CSV cell.
fn fmt_float(x: f64) -> String {
    format!("{x:.9e}")
}

pub const RAW_HEADER: &str =
    "sweep_kind,sweep_value,scheme,trial,rate_bps_hz,c_sd,c_se,branch,power_used_w";
pub const SUMMARY_HEADER: &str = "sweep_kind,sweep_value,scheme,mean_rate,stderr,trials";

/// Render raw records as CSV (UTF-8, LF line endings).
pub fn raw_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from(RAW_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.sweep_kind,
            fmt_float(r.sweep_value),
            r.scheme.label(),
            r.trial_index,
            fmt_float(r.rate_bps_hz),
            fmt_float(r.c_sd),
            fmt_float(r.c_se),
            r.branch,
            fmt_float(r.power_used_w),
        ));
    }
    out
}

/// Render summary rows as CSV (UTF-8, LF line endings).
pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.sweep_kind,
            fmt_float(r.sweep_value),
            r.scheme.label(),
            fmt_float(r.mean_rate),
            fmt_float(r.stderr),
            r.trials,
        ));
    }
    out
}

/// Write CSV text to a file, reporting the path on failure.
pub fn write_csv(text: &str, path: &Path) -> io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    f.flush()
}

/// One parsed summary row: scheme label, sweep value, mean, stderr, trials.
pub type ParsedSummaryRow = (String, f64, f64, f64, u64);

/// Parse a summary CSV produced by [`summary_csv`] back into numbers.
pub fn parse_summary_csv(text: &str) -> Result<Vec<ParsedSummaryRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == SUMMARY_HEADER => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    let mut rows = Vec::new();
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            return Err(format!("expected 6 columns, got {}", cols.len()));
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|e| format!("bad float {s}: {e}"));
        rows.push((
            cols[2].to_string(),
            parse(cols[1])?,
            parse(cols[3])?,
            parse(cols[4])?,
            cols[5].parse::<u64>().map_err(|e| format!("bad count: {e}"))?,
        ));
    }
    Ok(rows)
}
