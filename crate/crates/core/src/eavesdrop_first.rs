//! Eavesdrop-first strategy: listen in slot 1, then adaptively help, keep
//! listening, or jam in slot 2 with the closed-form optimal power.
//!
//! The decision tree splits on whether slot-1 decoding is guaranteed
//! (monitor SNR at least the relay's). On the helping side the monitor lifts
//! the second hop up to the first; on the other side it either decodes as-is,
//! is forced to keep listening, or jams the destination down to its own tap.

use crate::channel::{path_gain_denominator, ChannelRealization, SystemParams};
use crate::error::{Error, Result};
use crate::rate::{
    gammas_eavesdrop_first, phase1_snrs, Phase1Action, Phase2Action, StrategyOutcome,
};

/// Branch taken by the eavesdrop-first decision tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Decoding guaranteed and the second hop is already the stronger one.
    HelpSilent,
    /// Second hop too weak even with the full budget: help with everything.
    HelpFull,
    /// Help with just enough power to equalize the two hops.
    HelpTuned,
    /// The slot-1 tap alone beats the link: stay silent and decode.
    SilentDecode,
    /// Even full-power jamming cannot pull the link below the tap: keep
    /// listening and combine both slots.
    ForcedEavesdrop,
    /// Combined listening decodes on its own, and pays more rate than jamming.
    EavesdropChosen,
    /// Jam with just enough power to pull the link down to the slot-1 tap.
    JamTuned,
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::HelpSilent => "help_silent",
            Branch::HelpFull => "help_full",
            Branch::HelpTuned => "help_tuned",
            Branch::SilentDecode => "silent_decode",
            Branch::ForcedEavesdrop => "forced_eavesdrop",
            Branch::EavesdropChosen => "eavesdrop_chosen",
            Branch::JamTuned => "jam_tuned",
        }
    }
}

/// Eavesdrop-first solution: branch, slot-2 power, realized outcome.
#[derive(Debug, Clone)]
pub struct EavesdropFirstSolution {
    pub branch: Branch,
    pub pe_w: f64,
    pub outcome: StrategyOutcome,
}

/// Helping power that equalizes the relay SNR and the helped destination
/// SINR. Only valid strictly inside the tuned-helping bracket.
pub fn helper_power(ch: &ChannelRealization, params: &SystemParams) -> Result<f64> {
    let tau = params.tau;
    let g1 = path_gain_denominator(ch.dist.d1, tau);
    let g2 = path_gain_denominator(ch.dist.d2, tau);
    let g5 = path_gain_denominator(ch.dist.d5, tau);
    let g6 = path_gain_denominator(ch.dist.d6, tau);
    let h6_sq = ch.h6.norm_sq();
    if h6_sq <= 0.0 {
        return Err(Error::BracketViolated("helper with a dead link to D"));
    }
    let radicand = params.ps_w * ch.h1.norm_sq() / g1 - params.ps_w * ch.h2.norm_sqr() / g2;
    if radicand < 0.0 {
        return Err(Error::BracketViolated(
            "first hop below the direct link alone",
        ));
    }
    let root = radicand.sqrt() - (params.pr_w / g5).sqrt() * ch.h5.norm();
    if root < 0.0 {
        return Err(Error::BracketViolated(
            "second hop already beats the first without help",
        ));
    }
    Ok(g6 / h6_sq * root * root)
}

/// Jamming power that equalizes the monitor's slot-1 tap and the jammed
/// destination SINR. Only valid strictly inside the tuned-jamming bracket.
pub fn jammer_power(ch: &ChannelRealization, params: &SystemParams) -> Result<f64> {
    let tau = params.tau;
    let g2 = path_gain_denominator(ch.dist.d2, tau);
    let g3 = path_gain_denominator(ch.dist.d3, tau);
    let g5 = path_gain_denominator(ch.dist.d5, tau);
    let g6 = path_gain_denominator(ch.dist.d6, tau);
    let h6_sq = ch.h6.norm_sq();
    if h6_sq <= 0.0 {
        return Err(Error::BracketViolated("jammer with a dead link to D"));
    }
    let denom = params.ps_w * g2 * ch.h3.norm_sq() - params.ps_w * g3 * ch.h2.norm_sqr();
    if denom <= 0.0 {
        return Err(Error::BracketViolated(
            "tap below the unjammable direct link",
        ));
    }
    let inner = params.pr_w * g2 * g3 * ch.h5.norm_sq() / denom - g5;
    if inner < 0.0 {
        return Err(Error::BracketViolated(
            "tap above the unjammed second hop",
        ));
    }
    Ok(g6 * params.n0_w * inner / (g5 * h6_sq))
}

/// Relative upward nudge applied to the tuned jamming power so the realized
/// destination SINR lands on the decodable side of the tie. Well inside the
/// 1e-9 equalization tolerance.
const JAM_TIE_MARGIN: f64 = 1e-10;

/// Solve the eavesdrop-first design for one realization.
pub fn solve(ch: &ChannelRealization, params: &SystemParams) -> Result<EavesdropFirstSolution> {
    let p = params.p_max_w;
    let (snr_r, snr_e) = phase1_snrs(ch, params);

    let (branch, phase2) = if snr_r <= snr_e {
        let unhelped = gammas_eavesdrop_first(ch, params, &Phase2Action::Silent)?;
        if snr_r <= unhelped.gamma_d {
            (Branch::HelpSilent, Phase2Action::Silent)
        } else {
            let full = gammas_eavesdrop_first(ch, params, &Phase2Action::Help(p))?;
            if snr_r >= full.gamma_d {
                (Branch::HelpFull, Phase2Action::Help(p))
            } else {
                let pe = helper_power(ch, params)?.clamp(0.0, p);
                (Branch::HelpTuned, Phase2Action::Help(pe))
            }
        }
    } else {
        let combined = gammas_eavesdrop_first(ch, params, &Phase2Action::Listen)?;
        if snr_e >= combined.gamma_d {
            (Branch::SilentDecode, Phase2Action::Silent)
        } else {
            let jammed_full = gammas_eavesdrop_first(ch, params, &Phase2Action::JamPower(p))?;
            if snr_e < jammed_full.gamma_d {
                (Branch::ForcedEavesdrop, Phase2Action::Listen)
            } else if combined.gamma_e >= combined.gamma_r.min(combined.gamma_d) {
                (Branch::EavesdropChosen, Phase2Action::Listen)
            } else {
                let pe = (jammer_power(ch, params)? * (1.0 + JAM_TIE_MARGIN)).clamp(0.0, p);
                (Branch::JamTuned, Phase2Action::JamPower(pe))
            }
        }
    };

    let gammas = gammas_eavesdrop_first(ch, params, &phase2)?;
    let outcome = StrategyOutcome::from_gammas(Phase1Action::Listen, phase2, gammas);
    Ok(EavesdropFirstSolution {
        branch,
        pe_w: phase2.power_w(),
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rate::effective_rate;
    use crate::testutil::{scalar_channel, scalar_params};
    use approx::assert_relative_eq;

    #[test]
    fn helper_power_desk_instance() {
        let ch = scalar_channel(1.0, 0.0, 1.0, 1.0, 0.5, 1.0);
        let p = scalar_params();
        let pe = helper_power(&ch, &p).unwrap();
        assert_relative_eq!(pe, 0.25, epsilon = 1e-12);
        let g = gammas_eavesdrop_first(&ch, &p, &Phase2Action::Help(pe)).unwrap();
        assert_relative_eq!(g.gamma_d, g.gamma_r, max_relative = 1e-12);
        assert_relative_eq!(g.gamma_d, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn helper_power_hits_zero_at_lower_bracket_edge() {
        // Second hop exactly equal to the first without help.
        let ch = scalar_channel(1.0, 0.0, 2.0, 1.0, 1.0, 1.0);
        let pe = helper_power(&ch, &scalar_params()).unwrap();
        assert_relative_eq!(pe, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn helper_power_reaches_budget_at_upper_bracket_edge() {
        // Full help exactly equalizes: |h5| = 0.5, |h6| = 1, P = 1 gives
        // a combined amplitude of 1.5, so |h1|^2 = 2.25.
        let ch = scalar_channel(1.5, 0.0, 2.0, 1.0, 0.5, 1.0);
        let pe = helper_power(&ch, &scalar_params()).unwrap();
        assert_relative_eq!(pe, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn helper_power_rejects_out_of_bracket() {
        // Second hop already stronger: root would be negative.
        let ch = scalar_channel(0.5, 0.0, 1.0, 1.0, 1.0, 1.0);
        assert!(matches!(
            helper_power(&ch, &scalar_params()),
            Err(Error::BracketViolated(_))
        ));
    }

    #[test]
    fn jammer_power_desk_instance() {
        let ch = scalar_channel(10.0, 0.0, 1.0, 1.0, 2.0, 1.0);
        let mut p = scalar_params();
        p.p_max_w = 10.0;
        let pe = jammer_power(&ch, &p).unwrap();
        assert_relative_eq!(pe, 3.0, epsilon = 1e-12);
        let g = gammas_eavesdrop_first(&ch, &p, &Phase2Action::JamPower(pe)).unwrap();
        assert_relative_eq!(g.gamma_d, 1.0, max_relative = 1e-12);
        assert_relative_eq!(g.gamma_d, g.gamma_e, max_relative = 1e-12);
    }

    #[test]
    fn jammer_power_vanishes_as_tap_meets_unjammed_hop() {
        // snr_e just below the unjammed second hop: pe -> 0+.
        let ch = scalar_channel(10.0, 0.0, (4.0 - 1e-6f64).sqrt(), 1.0, 2.0, 1.0);
        let pe = jammer_power(&ch, &scalar_params()).unwrap();
        assert!(pe > 0.0 && pe < 1e-5, "pe = {pe}");
    }

    #[test]
    fn jammer_power_rejects_out_of_bracket() {
        // Tap above the unjammed hop: inner term negative.
        let ch = scalar_channel(10.0, 0.0, 3.0, 1.0, 2.0, 1.0);
        assert!(matches!(
            jammer_power(&ch, &scalar_params()),
            Err(Error::BracketViolated(_))
        ));
        // Direct link alone already above the tap: denominator negative.
        let ch = scalar_channel(10.0, 2.0, 1.0, 1.0, 2.0, 1.0);
        assert!(matches!(
            jammer_power(&ch, &scalar_params()),
            Err(Error::BracketViolated(_))
        ));
    }

    #[test]
    fn solve_all_ones_stays_silent() {
        let ch = scalar_channel(1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        let sol = solve(&ch, &scalar_params()).unwrap();
        assert_eq!(sol.branch, Branch::HelpSilent);
        assert_eq!(sol.pe_w, 0.0);
        assert_relative_eq!(sol.outcome.rate, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn solve_weak_second_hop_helps_with_full_power() {
        // |h1|^2 = |h3|^2 = 4, |h2|^2 = 0.01, |h5|^2 = |h6|^2 = 0.25.
        let ch = scalar_channel(2.0, 0.1, 2.0, 1.0, 0.5, 0.5);
        let sol = solve(&ch, &scalar_params()).unwrap();
        assert_eq!(sol.branch, Branch::HelpFull);
        assert_relative_eq!(sol.pe_w, 1.0, max_relative = 1e-15);
        assert_relative_eq!(sol.outcome.rate, 0.5 * 2.01f64.log2(), max_relative = 1e-12);
    }

    #[test]
    fn solve_tuned_helper_equalizes_hops() {
        // Bracket: unhelped 0.25 < snr_r 1 < full help 2.25.
        let ch = scalar_channel(1.0, 0.0, 2.0, 1.0, 0.5, 1.0);
        let sol = solve(&ch, &scalar_params()).unwrap();
        assert_eq!(sol.branch, Branch::HelpTuned);
        assert_relative_eq!(sol.pe_w, 0.25, epsilon = 1e-12);
        assert_relative_eq!(
            sol.outcome.gammas.gamma_d,
            sol.outcome.gammas.gamma_r,
            max_relative = 1e-9
        );
        assert_relative_eq!(sol.outcome.rate, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn solve_jammer_desk_instance_tunes_jamming() {
        let ch = scalar_channel(10.0, 0.0, 1.0, 1.0, 2.0, 1.0);
        let mut p = scalar_params();
        p.p_max_w = 10.0;
        let sol = solve(&ch, &p).unwrap();
        assert_eq!(sol.branch, Branch::JamTuned);
        assert_relative_eq!(sol.pe_w, 3.0, max_relative = 1e-9);
        assert_relative_eq!(sol.outcome.rate, 0.5, max_relative = 1e-9);
        // The realized triple must decode on its own.
        let (_, r) = effective_rate(&sol.outcome.gammas);
        assert_eq!(r, sol.outcome.rate);
    }

    #[test]
    fn solve_silent_decode_branch() {
        // snr_r > snr_e >= combined gamma_d.
        let ch = scalar_channel(10.0, 0.0, 3.0, 1.0, 2.0, 1.0);
        let sol = solve(&ch, &scalar_params()).unwrap();
        assert_eq!(sol.branch, Branch::SilentDecode);
        assert_eq!(sol.pe_w, 0.0);
        assert_relative_eq!(sol.outcome.rate, 0.5 * 5.0f64.log2(), max_relative = 1e-12);
    }

    #[test]
    fn solve_forced_eavesdrop_when_jamming_cannot_reach() {
        // Tap below even the fully jammed hop: P small, h6 weak.
        let ch = scalar_channel(10.0, 0.0, 0.5, 1.0, 2.0, 0.1);
        let mut p = scalar_params();
        p.p_max_w = 0.1;
        let sol = solve(&ch, &p).unwrap();
        assert_eq!(sol.branch, Branch::ForcedEavesdrop);
        // MRC tap: 0.25 + 1 = 1.25 < min(100, 4): cannot decode, rate zero.
        assert_eq!(sol.outcome.rate, 0.0);
    }

    #[test]
    fn solve_prefers_eavesdropping_when_it_decodes() {
        // In the tuned-jam bracket but the combined tap already decodes:
        // H4 large makes the slot-2 tap strong.
        let ch = scalar_channel(10.0, 0.0, 1.0, 3.0, 2.0, 1.0);
        let mut p = scalar_params();
        p.p_max_w = 10.0;
        let sol = solve(&ch, &p).unwrap();
        assert_eq!(sol.branch, Branch::EavesdropChosen);
        // rate = half log2(1 + min(100, 4)).
        assert_relative_eq!(sol.outcome.rate, 0.5 * 5.0f64.log2(), max_relative = 1e-12);
    }

    #[test]
    fn rate_is_continuous_across_helping_boundaries() {
        // h1/h3 boundary: snr_r = unhelped gamma_d (= 1 at these gains).
        for scale in [1.0 - 1e-6, 1.0 + 1e-6] {
            let ch = scalar_channel(scale, 0.0, 2.0, 1.0, 1.0, 1.0);
            let sol = solve(&ch, &scalar_params()).unwrap();
            assert_relative_eq!(sol.outcome.rate, 0.5, max_relative = 1e-4);
        }
        // h3/h2 boundary: snr_r = full-help gamma_d (= 2.25).
        for scale in [1.0 - 1e-6, 1.0 + 1e-6] {
            let ch = scalar_channel(1.5 * scale, 0.0, 2.0, 1.0, 0.5, 1.0);
            let sol = solve(&ch, &scalar_params()).unwrap();
            assert_relative_eq!(
                sol.outcome.rate,
                0.5 * 3.25f64.log2(),
                max_relative = 1e-4
            );
        }
    }

    #[test]
    fn rate_is_continuous_across_listen_boundary() {
        // e1/e3 boundary: snr_e = combined gamma_d = 4. Both sides decode at
        // the same link rate.
        for scale in [1.0 - 1e-6, 1.0 + 1e-6] {
            let ch = scalar_channel(10.0, 0.0, 2.0 * scale, 1.0, 2.0, 1.0);
            let sol = solve(&ch, &scalar_params()).unwrap();
            assert_relative_eq!(sol.outcome.rate, 0.5 * 5.0f64.log2(), max_relative = 1e-4);
        }
    }

    #[test]
    fn jammer_power_reaches_budget_at_upper_bracket_edge() {
        // snr_e exactly equal to the fully jammed hop 4/(P + 1): pe = P.
        let mut p = scalar_params();
        p.p_max_w = 10.0;
        let ch = scalar_channel(10.0, 0.0, (4.0 / 11.0f64).sqrt(), 0.2, 2.0, 1.0);
        let pe = jammer_power(&ch, &p).unwrap();
        assert_relative_eq!(pe, 10.0, max_relative = 1e-12);
    }

    #[test]
    fn jamming_feasibility_edge_behaviour() {
        // Around snr_e = fully-jammed gamma_d the tree switches between
        // forced listening (slot-combined tap too weak here, rate 0) and
        // just-feasible jamming at essentially full power.
        let boundary_h3 = (4.0 / 11.0f64).sqrt();
        let mut p = scalar_params();
        p.p_max_w = 10.0;

        let below = scalar_channel(10.0, 0.0, boundary_h3 * (1.0 - 1e-6), 0.2, 2.0, 1.0);
        let sol = solve(&below, &p).unwrap();
        assert_eq!(sol.branch, Branch::ForcedEavesdrop);
        assert_eq!(sol.outcome.rate, 0.0);

        let above = scalar_channel(10.0, 0.0, boundary_h3 * (1.0 + 1e-6), 0.2, 2.0, 1.0);
        let sol = solve(&above, &p).unwrap();
        assert_eq!(sol.branch, Branch::JamTuned);
        assert!(sol.pe_w <= 10.0 && sol.pe_w > 10.0 * (1.0 - 1e-4));
        assert_relative_eq!(
            sol.outcome.rate,
            0.5 * (1.0 + 4.0 / 11.0f64).log2(),
            max_relative = 1e-4
        );
    }
}
