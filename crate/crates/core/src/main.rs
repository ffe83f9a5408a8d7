//! Command-line front end: `single`, `sweep-power`, `sweep-position`.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 when a solver
//! reports a numerical failure.

use relaymon::channel::{sample_channels, TrialRng};
use relaymon::config::{watts_to_dbm, ConfigError, ExperimentConfig, Scheme, SweepKind};
use relaymon::experiment::{
    at_sweep_value, raw_csv, run_records, summarize, summary_csv, write_csv,
};
use relaymon::jam_first::{compute_thetas, f_extremes};
use relaymon::{benchmarks, eavesdrop_first, jam_first, parse_config};

const EXIT_CONFIG: i32 = 2;
const EXIT_NUMERICAL: i32 = 3;

fn main() {
    let cfg = match parse_config(std::env::args()) {
        Ok(cfg) => cfg,
        Err(ConfigError::HelpRequested(text)) => {
            println!("{text}");
            std::process::exit(0);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_CONFIG);
        }
    };

    let code = match cfg.sweep.kind {
        SweepKind::Single => run_single(&cfg),
        _ => run_sweep(&cfg),
    };
    std::process::exit(code);
}

fn run_single(cfg: &ExperimentConfig) -> i32 {
    if let Err(e) = dump_realization(cfg) {
        eprintln!("error: {e}");
        return EXIT_NUMERICAL;
    }
    if cfg.out.is_some() {
        return run_sweep(cfg);
    }
    0
}

/// Verbose view of trial 0: constants, solver internals, outcomes.
fn dump_realization(cfg: &ExperimentConfig) -> relaymon::Result<()> {
    let (params, topology) = at_sweep_value(cfg, 0.0);
    let mut rng = TrialRng::from_master(cfg.master_seed, 0);
    let ch = sample_channels(&params, &topology, &mut rng)?;

    println!("# one realization (seed {}, trial 0)", cfg.master_seed);
    println!(
        "carrier {:.3e} Hz (not used by the path-loss model), noise {:.6e} W",
        cfg.carrier_hz, params.n0_w
    );
    println!(
        "powers: source {:.3} dBm, relay {:.3} dBm, monitor budget {:.3} dBm",
        watts_to_dbm(params.ps_w),
        watts_to_dbm(params.pr_w),
        watts_to_dbm(params.p_max_w)
    );
    println!(
        "distances km: d1={:.6} d2={:.6} d3={:.6} d4={:.6} d5={:.6} d6={:.6}",
        ch.dist.d1, ch.dist.d2, ch.dist.d3, ch.dist.d4, ch.dist.d5, ch.dist.d6
    );

    let thetas = compute_thetas(&ch, &params);
    println!(
        "theta: 1={:.6e} 2={:.6e} 3={:.6e} 4={:.6e} 5={:.6e} 6={:.6e}",
        thetas.theta1, thetas.theta2, thetas.theta3, thetas.theta4, thetas.theta5, thetas.theta6
    );
    let ext = f_extremes(&ch, &thetas, params.p_max_w);
    println!("f_max={:.6e} f_min={:.6e}", ext.f_max, ext.f_min);

    for scheme in &cfg.sweep.schemes {
        match scheme {
            Scheme::Strategy1 => {
                let sol = jam_first::solve(&ch, &params)?;
                println!(
                    "strategy1: case={} |w|^2={:.6e} W rate={:.6} c_sd={:.6} c_se={:.6}",
                    sol.case.label(),
                    sol.w.norm_sq(),
                    sol.outcome.rate,
                    sol.outcome.rates.c_sd,
                    sol.outcome.rates.c_se
                );
            }
            Scheme::Strategy2 => {
                let sol = eavesdrop_first::solve(&ch, &params)?;
                println!(
                    "strategy2: branch={} pe={:.6e} W rate={:.6} c_sd={:.6} c_se={:.6}",
                    sol.branch.label(),
                    sol.pe_w,
                    sol.outcome.rate,
                    sol.outcome.rates.c_sd,
                    sol.outcome.rates.c_se
                );
            }
            Scheme::BenchEe => {
                let out = benchmarks::eval_ee(&ch, &params)?;
                println!(
                    "bench_ee: rate={:.6} c_sd={:.6} c_se={:.6}",
                    out.rate, out.rates.c_sd, out.rates.c_se
                );
            }
            Scheme::BenchEj => {
                let out = benchmarks::eval_ej(&ch, &params)?;
                println!(
                    "bench_ej: pe={:.6e} W rate={:.6} c_sd={:.6} c_se={:.6}",
                    params.p_max_w, out.rate, out.rates.c_sd, out.rates.c_se
                );
            }
        }
    }
    Ok(())
}

fn run_sweep(cfg: &ExperimentConfig) -> i32 {
    let records = run_records(cfg);
    let any_failed = records.iter().any(|r| r.is_failure());
    let text = if cfg.raw {
        raw_csv(&records)
    } else {
        summary_csv(&summarize(&records))
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = write_csv(&text, path) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_CONFIG;
            }
        }
        None => print!("{text}"),
    }
    if any_failed {
        eprintln!("warning: some trials were flagged as numerical failures");
        EXIT_NUMERICAL
    } else {
        0
    }
}
