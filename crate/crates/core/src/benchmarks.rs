//! Non-adaptive reference schemes the adaptive strategies are compared
//! against: listen in both slots, or listen then jam with the full budget.

use crate::channel::{ChannelRealization, SystemParams};
use crate::error::Result;
use crate::rate::{gammas_eavesdrop_first, Phase1Action, Phase2Action, StrategyOutcome};

/// Listen in slot 1, listen and combine in slot 2.
pub fn eval_ee(ch: &ChannelRealization, params: &SystemParams) -> Result<StrategyOutcome> {
    let gammas = gammas_eavesdrop_first(ch, params, &Phase2Action::Listen)?;
    Ok(StrategyOutcome::from_gammas(
        Phase1Action::Listen,
        Phase2Action::Listen,
        gammas,
    ))
}

/// Listen in slot 1, jam the destination with the whole budget in slot 2.
pub fn eval_ej(ch: &ChannelRealization, params: &SystemParams) -> Result<StrategyOutcome> {
    let phase2 = Phase2Action::JamPower(params.p_max_w);
    let gammas = gammas_eavesdrop_first(ch, params, &phase2)?;
    Ok(StrategyOutcome::from_gammas(
        Phase1Action::Listen,
        phase2,
        gammas,
    ))
}
