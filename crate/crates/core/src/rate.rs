//! Per-action SNR/SINR triples and the effective eavesdropping rate.
//!
//! Rates are spectral efficiencies in bits/s/Hz, base-2 logarithm, with the
//! 1/2 pre-log because one message occupies two slots.

use crate::channel::{path_gain_denominator, ChannelRealization, SystemParams};
use crate::error::{Error, Result};
use crate::linalg::CVec;

/// Monitor action in the first slot, while the source transmits.
#[derive(Debug, Clone, PartialEq)]
pub enum Phase1Action {
    /// Receive only.
    Listen,
    /// Transmit the jamming beam `w` (squared norm bounded by the budget).
    JamBeam(CVec),
}

/// Monitor action in the second slot, while the relay transmits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase2Action {
    /// Receive the relay transmission and combine it with the slot-1 copy.
    Listen,
    /// Transmit toward the destination with this power, reinforcing the relay.
    Help(f64),
    /// Jam the destination with this power.
    JamPower(f64),
    /// Neither transmit nor combine; keep only the slot-1 observation.
    Silent,
}

impl Phase2Action {
    /// Transmit power spent in the second slot.
    pub fn power_w(&self) -> f64 {
        match self {
            Phase2Action::Help(p) | Phase2Action::JamPower(p) => *p,
            Phase2Action::Listen | Phase2Action::Silent => 0.0,
        }
    }
}

/// The SNR/SINR triple: decoding SINR at the relay, post-combining SINR at
/// the destination, and the monitor's eavesdropping SINR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGammas {
    pub gamma_r: f64,
    pub gamma_d: f64,
    pub gamma_e: f64,
}

/// Achievable spectral efficiencies of the suspicious link and of the
/// monitor's tap on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub c_sd: f64,
    pub c_se: f64,
}

/// Everything a solver reports for one channel realization.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyOutcome {
    pub phase1: Phase1Action,
    pub phase2: Phase2Action,
    pub gammas: LinkGammas,
    pub rates: RatePair,
    /// Effective eavesdropping rate: `c_sd` when the monitor decodes, else 0.
    pub rate: f64,
}

impl StrategyOutcome {
    pub fn from_gammas(phase1: Phase1Action, phase2: Phase2Action, gammas: LinkGammas) -> Self {
        let (rates, rate) = effective_rate(&gammas);
        StrategyOutcome {
            phase1,
            phase2,
            gammas,
            rates,
            rate,
        }
    }
}

fn norm_sq_safe_unit_image(ch: &ChannelRealization) -> f64 {
    // |H4 h5/|h5||^2; zero when h5 vanishes (probability-zero draw).
    let n5 = ch.h5.norm();
    if n5 > 0.0 {
        ch.h4.mul_vec(&ch.h5.scaled(1.0 / n5)).norm_sq()
    } else {
        0.0
    }
}

/// Slot-1 SNRs at the relay and at the monitor when nobody jams.
pub fn phase1_snrs(ch: &ChannelRealization, params: &SystemParams) -> (f64, f64) {
    let tau = params.tau;
    let snr_r = params.ps_w * ch.h1.norm_sq()
        / (path_gain_denominator(ch.dist.d1, tau) * params.n0_w);
    let snr_e = params.ps_w * ch.h3.norm_sq()
        / (path_gain_denominator(ch.dist.d3, tau) * params.n0_w);
    (snr_r, snr_e)
}

/// SINR triple when the monitor jams with beam `w` in slot 1 and listens in
/// slot 2.
pub fn gammas_jam_first(
    ch: &ChannelRealization,
    params: &SystemParams,
    w: &CVec,
) -> Result<LinkGammas> {
    if w.len() != params.m_monitor {
        return Err(Error::DimensionMismatch {
            what: "jamming beamformer",
            expected: params.m_monitor,
            got: w.len(),
        });
    }
    debug_assert!(
        w.norm_sq() <= params.p_max_w * (1.0 + 1e-9),
        "beamformer exceeds the power budget"
    );
    let tau = params.tau;
    let n0 = params.n0_w;
    let g1 = path_gain_denominator(ch.dist.d1, tau);
    let g2 = path_gain_denominator(ch.dist.d2, tau);
    let g4 = path_gain_denominator(ch.dist.d4, tau);
    let g5 = path_gain_denominator(ch.dist.d5, tau);
    let g6 = path_gain_denominator(ch.dist.d6, tau);

    // Jamming power that leaks into the relay's matched filter.
    let h1_sq = ch.h1.norm_sq();
    let jam_r = if h1_sq > 0.0 {
        ch.h4.mul_vec(&ch.h1).dot(w).norm_sqr() / h1_sq
    } else {
        0.0
    };
    let gamma_r = params.ps_w * g4 * h1_sq / (g1 * jam_r + g1 * g4 * n0);

    // Destination combines the jammed slot-1 copy with the clean relay copy.
    let jam_d = ch.h6.dot(w).norm_sqr();
    let gamma_d = params.pr_w * ch.h5.norm_sq() / (g5 * n0)
        + params.ps_w * g6 * ch.h2.norm_sqr() / (g2 * jam_d + g2 * g6 * n0);

    let gamma_e = params.pr_w * norm_sq_safe_unit_image(ch) / (g4 * n0);
    Ok(LinkGammas {
        gamma_r,
        gamma_d,
        gamma_e,
    })
}

/// SINR triple when the monitor listens in slot 1 and takes `phase2` in
/// slot 2. `Silent` evaluates like zero-power helping or jamming: the
/// destination sees the plain relay transmission and the monitor keeps only
/// its slot-1 observation.
pub fn gammas_eavesdrop_first(
    ch: &ChannelRealization,
    params: &SystemParams,
    phase2: &Phase2Action,
) -> Result<LinkGammas> {
    let tau = params.tau;
    let n0 = params.n0_w;
    let g2 = path_gain_denominator(ch.dist.d2, tau);
    let g4 = path_gain_denominator(ch.dist.d4, tau);
    let g5 = path_gain_denominator(ch.dist.d5, tau);
    let g6 = path_gain_denominator(ch.dist.d6, tau);
    let (snr_r, snr_e) = phase1_snrs(ch, params);
    let direct = params.ps_w * ch.h2.norm_sqr() / (g2 * n0);
    let relay_amp = (params.pr_w / g5).sqrt() * ch.h5.norm();

    let (gamma_d, gamma_e) = match phase2 {
        Phase2Action::Listen => {
            let gd = direct + relay_amp * relay_amp / n0;
            let ge = snr_e + params.pr_w * norm_sq_safe_unit_image(ch) / (g4 * n0);
            (gd, ge)
        }
        Phase2Action::Silent => (direct + relay_amp * relay_amp / n0, snr_e),
        Phase2Action::Help(pe) => {
            if *pe < 0.0 {
                return Err(Error::NegativePower(*pe));
            }
            let help_amp = (pe / g6).sqrt() * ch.h6.norm();
            let combined = relay_amp + help_amp;
            (direct + combined * combined / n0, snr_e)
        }
        Phase2Action::JamPower(pe) => {
            if *pe < 0.0 {
                return Err(Error::NegativePower(*pe));
            }
            let gd = direct
                + params.pr_w * g6 * ch.h5.norm_sq()
                    / (pe * g5 * ch.h6.norm_sq() + g5 * g6 * n0);
            (gd, snr_e)
        }
    };
    Ok(LinkGammas {
        gamma_r: snr_r,
        gamma_d,
        gamma_e,
    })
}

/// Spectral efficiencies and the effective eavesdropping rate.
///
/// The monitor decodes reliably whenever its tap rate is at least the link
/// rate; ties count as success. Otherwise the effective rate is zero.
pub fn effective_rate(g: &LinkGammas) -> (RatePair, f64) {
    let c_sd = 0.5 * (1.0 + g.gamma_r.min(g.gamma_d)).log2();
    let c_se = 0.5 * (1.0 + g.gamma_e).log2();
    let rate = if c_se >= c_sd { c_sd } else { 0.0 };
    (RatePair { c_sd, c_se }, rate)
}
