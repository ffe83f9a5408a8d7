//! Jam-first strategy: pick the slot-1 jamming beamformer that maximizes the
//! effective eavesdropping rate.
//!
//! The link quality under a beam `w` is `f(w)`, the minimum of the two
//! suspicious-link SINRs, and the monitor decodes iff its own slot-2 SNR
//! (`theta6`) is at least `f(w)`. `f` is largest at `w = 0` and smallest at a
//! full-power member of a two-direction family: one unit direction aimed at
//! the destination's channel, one at the relay's matched filter. Between the
//! two extremes the solver finds an exactly feasible beam by bisecting the
//! scale `t` of `t * w_star`, along which `f` is continuous and nonincreasing.

use crate::channel::{path_gain_denominator, ChannelRealization, SystemParams};
use crate::error::{Error, Result};
use crate::linalg::CVec;
use crate::rate::{gammas_jam_first, Phase1Action, Phase2Action, StrategyOutcome};

/// Channel-and-power constants of the jam-first problem.
///
/// `theta1` is the destination's unjammable relay-path SNR, `theta4/theta5`
/// the relay's clean slot-1 SNR, `theta6` the monitor's slot-2 tap SNR;
/// `theta2`, `theta3` (destination) and `theta4`, `theta5` (relay) form the
/// jammed-SINR quotients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSet {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub theta4: f64,
    pub theta5: f64,
    pub theta6: f64,
}

/// The six constants, straight from the channel realization.
pub fn compute_thetas(ch: &ChannelRealization, params: &SystemParams) -> ThetaSet {
    let tau = params.tau;
    let n0 = params.n0_w;
    let g1 = path_gain_denominator(ch.dist.d1, tau);
    let g2 = path_gain_denominator(ch.dist.d2, tau);
    let g4 = path_gain_denominator(ch.dist.d4, tau);
    let g5 = path_gain_denominator(ch.dist.d5, tau);
    let g6 = path_gain_denominator(ch.dist.d6, tau);
    let h5_sq = ch.h5.norm_sq();
    let tap = if h5_sq > 0.0 {
        ch.h4.mul_vec(&ch.h5.scaled(1.0 / h5_sq.sqrt())).norm_sq()
    } else {
        0.0
    };
    ThetaSet {
        theta1: params.pr_w * h5_sq / (g5 * n0),
        theta2: params.ps_w * g6 * ch.h2.norm_sqr() / g2,
        theta3: g6 * n0,
        theta4: params.ps_w * g4 * ch.h1.norm_sq() / g1,
        theta5: g4 * n0,
        theta6: params.pr_w * tap / (g4 * n0),
    }
}

/// `f(w)`: the smaller of the two suspicious-link SINRs under beam `w`.
pub fn f_of(w: &CVec, ch: &ChannelRealization, thetas: &ThetaSet) -> f64 {
    let jam_d = ch.h6.dot(w).norm_sqr();
    let h1_sq = ch.h1.norm_sq();
    let jam_r = if h1_sq > 0.0 {
        ch.h4.mul_vec(&ch.h1).dot(w).norm_sqr() / h1_sq
    } else {
        0.0
    };
    let term_d = thetas.theta1 + thetas.theta2 / (jam_d + thetas.theta3);
    let term_r = thetas.theta4 / (jam_r + thetas.theta5);
    term_d.min(term_r)
}

/// Two-direction beamformer family at full budget.
///
/// `u_par` points along the destination channel component of the relay-filter
/// image `H4 h1` and `u_perp` along its orthogonal complement; a member
/// splits the budget as `w(x) = sqrt(x) u_par + sqrt(P - x) u_perp`, so
/// `|w(x)|^2 = P` for every `x`. When one direction degenerates to zero the
/// family collapses onto the survivor at full power.
#[derive(Debug, Clone)]
pub struct BeamformerFamily {
    pub u_par: Option<CVec>,
    pub u_perp: Option<CVec>,
    pub p_budget: f64,
    beam_len: usize,
}

impl BeamformerFamily {
    /// Build the family for one realization. `u_par` stays well defined even
    /// when `H4 h1` is orthogonal to `h6` (it is the `h6` direction itself,
    /// and the cross term vanishes), which keeps the closed-form minimum
    /// attainable for every draw.
    pub fn for_channel(ch: &ChannelRealization, p_budget: f64) -> Self {
        let u = ch.h4.mul_vec(&ch.h1);
        let u_sq = u.norm_sq();
        let h6_sq = ch.h6.norm_sq();
        let (u_par, u_perp) = if h6_sq > 0.0 {
            // Projection of u onto span(h6) is h6 (h6^H u)/|h6|^2.
            let coef = ch.h6.dot(&u) / h6_sq;
            let par = ch.h6.scaled_c(coef);
            let perp = u.sub(&par);
            let par_dir = if par.norm_sq() > u_sq * 1e-28 {
                par.unit()
            } else {
                ch.h6.unit()
            };
            let perp_dir = if perp.norm_sq() > u_sq * 1e-28 {
                perp.unit()
            } else {
                None
            };
            (par_dir, perp_dir)
        } else {
            (None, u.unit())
        };
        BeamformerFamily {
            u_par,
            u_perp,
            p_budget,
            beam_len: ch.h6.len(),
        }
    }

    /// Member with `x` watts on the parallel direction. A collapsed family
    /// spends the whole budget on its single direction regardless of `x`.
    pub fn member(&self, x: f64) -> CVec {
        let p = self.p_budget;
        let x = x.clamp(0.0, p);
        match (&self.u_par, &self.u_perp) {
            (Some(par), Some(perp)) => par.scaled(x.sqrt()).add(&perp.scaled((p - x).sqrt())),
            (Some(par), None) => par.scaled(p.sqrt()),
            (None, Some(perp)) => perp.scaled(p.sqrt()),
            (None, None) => CVec::zeros(self.beam_len),
        }
    }

    fn has_direction(&self) -> bool {
        self.u_par.is_some() || self.u_perp.is_some()
    }
}

/// Extreme values of `f` over the feasible set, plus the minimizing beam.
#[derive(Debug, Clone)]
pub struct FExtremes {
    pub f_max: f64,
    pub f_min: f64,
    pub w_star: CVec,
}

/// `f_max` (attained at `w = 0`), `f_min` (attained at one of two candidate
/// family members: full budget on the destination direction, or the split
/// that maximizes leakage into the relay filter), and the attaining member.
pub fn f_extremes(ch: &ChannelRealization, thetas: &ThetaSet, p_budget: f64) -> FExtremes {
    let f_max = (thetas.theta1 + thetas.theta2 / thetas.theta3).min(thetas.theta4 / thetas.theta5);
    let family = BeamformerFamily::for_channel(ch, p_budget);
    if !family.has_direction() || p_budget == 0.0 {
        return FExtremes {
            f_max,
            f_min: f_max,
            w_star: CVec::zeros(ch.h6.len()),
        };
    }
    let u = ch.h4.mul_vec(&ch.h1);
    let u_sq = u.norm_sq();
    let x_split = if u_sq > 0.0 {
        let coef = if ch.h6.norm_sq() > 0.0 {
            ch.h6.dot(&u).norm_sqr() / ch.h6.norm_sq()
        } else {
            0.0
        };
        p_budget * coef / u_sq
    } else {
        0.0
    };
    let candidates = [family.member(p_budget), family.member(x_split)];
    let f_vals = [
        f_of(&candidates[0], ch, thetas),
        f_of(&candidates[1], ch, thetas),
    ];
    let pick = if f_vals[0] <= f_vals[1] { 0 } else { 1 };
    FExtremes {
        f_max,
        f_min: f_vals[pick],
        w_star: candidates[pick].clone(),
    }
}

/// Case taken by the jam-first solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JamFirstCase {
    /// The monitor's tap already beats the unjammed link; listen only.
    EavesdropOnly,
    /// Even full-power jamming cannot bring the link down to the tap; idle.
    Hopeless,
    /// A beam with `f(w) = theta6` exists; jam just hard enough.
    Feasible,
}

impl JamFirstCase {
    pub fn label(&self) -> &'static str {
        match self {
            JamFirstCase::EavesdropOnly => "eavesdrop_only",
            JamFirstCase::Hopeless => "hopeless",
            JamFirstCase::Feasible => "feasible",
        }
    }
}

/// Jam-first solution: the case, the chosen beam, and the realized outcome.
#[derive(Debug, Clone)]
pub struct JamFirstSolution {
    pub case: JamFirstCase,
    pub w: CVec,
    pub outcome: StrategyOutcome,
}

const BISECT_T_TOL: f64 = 1e-10;
const BISECT_MAX_ITERS: usize = 200;
const FEASIBLE_REL_TOL: f64 = 1e-6;

/// Solve the jam-first design for one realization.
pub fn solve(ch: &ChannelRealization, params: &SystemParams) -> Result<JamFirstSolution> {
    let thetas = compute_thetas(ch, params);
    let ext = f_extremes(ch, &thetas, params.p_max_w);
    let m = params.m_monitor;

    let (case, w) = if thetas.theta6 > ext.f_max {
        (JamFirstCase::EavesdropOnly, CVec::zeros(m))
    } else if thetas.theta6 < ext.f_min {
        (JamFirstCase::Hopeless, CVec::zeros(m))
    } else {
        // f(t w_star) falls continuously from f_max at t = 0 to f_min at
        // t = 1, so the target is bracketed. Return the jammed side of the
        // final bracket: f(w) <= theta6 guarantees the decode condition.
        let target = thetas.theta6;
        let tol = FEASIBLE_REL_TOL * (1.0 + target);
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        let mut iters = 0;
        while iters < BISECT_MAX_ITERS {
            let resid = (f_of(&ext.w_star.scaled(hi), ch, &thetas) - target).abs();
            if hi - lo <= BISECT_T_TOL && resid <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if f_of(&ext.w_star.scaled(mid), ch, &thetas) >= target {
                lo = mid;
            } else {
                hi = mid;
            }
            iters += 1;
        }
        let w = ext.w_star.scaled(hi);
        let resid = (f_of(&w, ch, &thetas) - target).abs();
        if resid > tol {
            return Err(Error::BisectionFailed {
                iterations: iters,
                residual: resid,
            });
        }
        (JamFirstCase::Feasible, w)
    };

    let gammas = gammas_jam_first(ch, params, &w)?;
    let outcome = StrategyOutcome::from_gammas(
        Phase1Action::JamBeam(w.clone()),
        Phase2Action::Listen,
        gammas,
    );
    Ok(JamFirstSolution { case, w, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_channels, Topology, TrialRng};
    use crate::linalg::{CMat, Cplx};
    use crate::testutil::{scalar_channel, scalar_params, unit_distances};
    use approx::assert_relative_eq;

    fn all_ones() -> ChannelRealization {
        scalar_channel(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    }

    fn random_instance(trial: u64) -> (ChannelRealization, SystemParams) {
        let mut params = SystemParams {
            n_relay: 4,
            m_monitor: 4,
            ..scalar_params()
        };
        let mut rng = TrialRng::from_master(0xFADE, trial);
        let mut ch = sample_channels(&params, &Topology::baseline(), &mut rng).unwrap();
        params.p_max_w = 0.5 + 1.5 * rng.uniform();
        ch.dist = unit_distances();
        (ch, params)
    }

    #[test]
    fn thetas_all_ones() {
        let t = compute_thetas(&all_ones(), &scalar_params());
        for v in [t.theta1, t.theta2, t.theta3, t.theta4, t.theta5, t.theta6] {
            assert_relative_eq!(v, 1.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn doubling_relay_power_scales_theta1_and_theta6_only() {
        let ch = all_ones();
        let p = scalar_params();
        let mut p2 = p;
        p2.pr_w = 2.0;
        let a = compute_thetas(&ch, &p);
        let b = compute_thetas(&ch, &p2);
        assert_relative_eq!(b.theta1, 2.0 * a.theta1, max_relative = 1e-15);
        assert_relative_eq!(b.theta6, 2.0 * a.theta6, max_relative = 1e-15);
        assert_eq!(a.theta2, b.theta2);
        assert_eq!(a.theta3, b.theta3);
        assert_eq!(a.theta4, b.theta4);
        assert_eq!(a.theta5, b.theta5);
    }

    #[test]
    fn zero_direct_link_zeroes_theta2() {
        let ch = scalar_channel(1.0, 0.0, 1.0, 1.0, 1.0, 1.0);
        let t = compute_thetas(&ch, &scalar_params());
        assert_eq!(t.theta2, 0.0);
    }

    #[test]
    fn f_at_zero_is_f_max() {
        let ch = all_ones();
        let t = compute_thetas(&ch, &scalar_params());
        let f0 = f_of(&CVec::zeros(1), &ch, &t);
        assert_relative_eq!(f0, 1.0, max_relative = 1e-15); // min(1 + 1, 1)
    }

    #[test]
    fn f_scalar_hand_value() {
        let ch = all_ones();
        let t = compute_thetas(&ch, &scalar_params());
        let f = f_of(&CVec::from_reals(&[1.0]), &ch, &t);
        assert_relative_eq!(f, 0.5, max_relative = 1e-15); // min(1.5, 0.5)
    }

    #[test]
    fn f_ignores_beam_phase() {
        let (ch, params) = random_instance(1);
        let t = compute_thetas(&ch, &params);
        let mut rng = TrialRng::from_master(2, 2);
        let w = CVec::new((0..4).map(|_| rng.sample_cn01().scale(0.4)).collect());
        let rotated = w.scaled_c(Cplx::from_polar(1.0, 0.7));
        assert_relative_eq!(f_of(&w, &ch, &t), f_of(&rotated, &ch, &t), max_relative = 1e-12);
    }

    #[test]
    fn extremes_scalar_hand_values() {
        let ch = all_ones();
        let t = compute_thetas(&ch, &scalar_params());
        let ext = f_extremes(&ch, &t, 1.0);
        assert_relative_eq!(ext.f_max, 1.0, max_relative = 1e-15);
        assert_relative_eq!(ext.f_min, 0.5, max_relative = 1e-15);
        assert_relative_eq!(ext.w_star.norm_sq(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn zero_budget_collapses_extremes() {
        let (ch, params) = random_instance(3);
        let t = compute_thetas(&ch, &params);
        let ext = f_extremes(&ch, &t, 0.0);
        assert_relative_eq!(ext.f_min, ext.f_max, max_relative = 1e-15);
    }

    #[test]
    fn closed_form_f_min_matches_formula() {
        for trial in 0..200 {
            let (ch, params) = random_instance(trial);
            let t = compute_thetas(&ch, &params);
            let p = params.p_max_w;
            let u = ch.h4.mul_vec(&ch.h1);
            let expect = (t.theta1 + t.theta2 / (p * ch.h6.norm_sq() + t.theta3))
                .min(t.theta4 / (p * u.norm_sq() / ch.h1.norm_sq() + t.theta5));
            let ext = f_extremes(&ch, &t, p);
            assert_relative_eq!(ext.f_min, expect, max_relative = 1e-10);
        }
    }

    #[test]
    fn family_members_hold_full_budget() {
        for trial in 0..50 {
            let (ch, params) = random_instance(trial);
            let fam = BeamformerFamily::for_channel(&ch, params.p_max_w);
            for k in 0..=20 {
                let x = params.p_max_w * k as f64 / 20.0;
                assert_relative_eq!(
                    fam.member(x).norm_sq(),
                    params.p_max_w,
                    max_relative = 1e-10
                );
            }
        }
    }

    #[test]
    fn f_nonincreasing_along_ray() {
        for trial in 0..50 {
            let (ch, params) = random_instance(trial);
            let t = compute_thetas(&ch, &params);
            let ext = f_extremes(&ch, &t, params.p_max_w);
            let mut prev = f64::INFINITY;
            for k in 0..=100 {
                let f = f_of(&ext.w_star.scaled(k as f64 / 100.0), &ch, &t);
                assert!(f <= prev * (1.0 + 1e-12));
                prev = f;
            }
        }
    }

    #[test]
    fn solve_scalar_feasible_at_boundary() {
        // theta6 = f_max = 1: feasible with the crossing at t = 0.
        let ch = all_ones();
        let sol = solve(&ch, &scalar_params()).unwrap();
        assert_eq!(sol.case, JamFirstCase::Feasible);
        assert!(sol.w.norm_sq() < 1e-12);
        assert_relative_eq!(sol.outcome.rate, 0.5, max_relative = 1e-9);
    }

    #[test]
    fn solve_scalar_eavesdrop_only() {
        // H4 scaled by sqrt(2): theta6 = 2 > f_max = 1.
        let ch = scalar_channel(1.0, 1.0, 1.0, std::f64::consts::SQRT_2, 1.0, 1.0);
        let sol = solve(&ch, &scalar_params()).unwrap();
        assert_eq!(sol.case, JamFirstCase::EavesdropOnly);
        assert_eq!(sol.w.norm_sq(), 0.0);
        assert_relative_eq!(sol.outcome.rate, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn solve_scalar_hopeless() {
        // H4 scaled by 0.5: theta6 = 0.25 below the jammed floor.
        let ch = scalar_channel(1.0, 1.0, 1.0, 0.5, 1.0, 1.0);
        let sol = solve(&ch, &scalar_params()).unwrap();
        assert_eq!(sol.case, JamFirstCase::Hopeless);
        assert_eq!(sol.w.norm_sq(), 0.0);
        assert_eq!(sol.outcome.rate, 0.0);
    }

    #[test]
    fn feasible_solutions_hit_target_and_budget() {
        for trial in 0..500 {
            let (ch, params) = random_instance(trial);
            let t = compute_thetas(&ch, &params);
            let sol = solve(&ch, &params).unwrap();
            if sol.case == JamFirstCase::Feasible {
                let f = f_of(&sol.w, &ch, &t);
                assert!((f - t.theta6).abs() <= 1e-6 * (1.0 + t.theta6));
                assert!(sol.w.norm_sq() <= params.p_max_w * (1.0 + 1e-9));
                assert!(sol.outcome.rate > 0.0);
            }
        }
    }

    #[test]
    fn zero_budget_solves_as_pure_listening() {
        for trial in 0..50 {
            let (ch, mut params) = random_instance(trial);
            params.p_max_w = 0.0;
            let sol = solve(&ch, &params).unwrap();
            assert_eq!(sol.w.norm_sq(), 0.0);
            let zero = crate::rate::gammas_jam_first(&ch, &params, &CVec::zeros(4)).unwrap();
            let (_, rate) = crate::rate::effective_rate(&zero);
            assert_eq!(sol.outcome.rate, rate);
        }
    }

    #[test]
    fn degenerate_h6_still_solves() {
        // Monitor-destination link gone: only the relay filter can be jammed.
        let mut ch = scalar_channel(1.0, 1.0, 1.0, 1.0, 1.0, 0.0);
        ch.h6 = CVec::zeros(1);
        let sol = solve(&ch, &scalar_params()).unwrap();
        assert!(sol.outcome.rate >= 0.0);
    }

    #[test]
    fn degenerate_relay_image_still_solves() {
        // H4 h1 = 0: jamming can only touch the destination's direct copy.
        let mut ch = scalar_channel(1.0, 1.0, 1.0, 0.0, 1.0, 1.0);
        ch.h4 = CMat::zeros(1, 1);
        let sol = solve(&ch, &scalar_params()).unwrap();
        // theta6 = 0 here, below any f value: hopeless.
        assert_eq!(sol.case, JamFirstCase::Hopeless);
    }
}
