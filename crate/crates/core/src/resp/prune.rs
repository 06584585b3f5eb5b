use super::PlayerSet;
use crate::game::{Mode, Setting};
use crate::model::{StateId, StateSet};

/// States that can have positive responsibility. Every dropped state is a
/// null player:
/// - it has a single successor, so neither control nor engraving matters;
/// - in optimistic mode it is off the run and already owned by Sat;
/// - Sat wins from it with no help at all;
/// - Sat loses from it even when controlling everything.
pub fn prune_dummies(setting: &Setting<'_>) -> PlayerSet {
    PlayerSet::states(
        setting.ts,
        candidate_states(setting).ones().map(StateId::from),
    )
}

pub(crate) fn candidate_states(setting: &Setting<'_>) -> StateSet {
    let ts = setting.ts;
    let helpless = setting.solve(&ts.empty_set()).sat_wins;
    let almighty = setting.solve(&ts.full_set()).sat_wins;
    let mut keep = ts.empty_set();
    for s in ts.states() {
        let i = s.index();
        let off_run = setting.run.is_some_and(|r| !r.contains(s));
        if ts.successors(s).len() < 2
            || (setting.mode == Mode::Optimistic && off_run)
            || helpless.contains(i)
            || !almighty.contains(i)
        {
            continue;
        }
        keep.insert(i);
    }
    keep
}

/// Drops players (blocks or states) whose members are all null states.
pub fn prune_blocks(setting: &Setting<'_>, players: &PlayerSet) -> PlayerSet {
    let keep = candidate_states(setting);
    let idx = (0..players.len()).filter(|&i| {
        players
            .get(i)
            .members
            .iter()
            .any(|s| keep.contains(s.index()))
    });
    players.restrict(idx)
}
