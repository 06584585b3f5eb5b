use std::collections::VecDeque;

use super::{GameArena, Player};
use crate::model::{StateId, StateSet};

/// States from which `player` can force a visit to `target`.
pub fn attractor(arena: &GameArena, target: &StateSet, player: Player) -> StateSet {
    attract(arena, target, player, None, None)
}

/// Attractor restricted to the subgame `within`. When `strategy` is given, the
/// attracting successor of every newly added `player` state is recorded.
pub(crate) fn attract(
    arena: &GameArena,
    target: &StateSet,
    player: Player,
    within: Option<&StateSet>,
    mut strategy: Option<&mut Vec<Option<StateId>>>,
) -> StateSet {
    let n = arena.num_states();
    let inside = |s: StateId| within.is_none_or(|w| w.contains(s.index()));
    let mut result = StateSet::with_capacity(n);
    let mut queue = VecDeque::new();
    for t in target.ones() {
        if inside(StateId::from(t)) {
            result.insert(t);
            queue.push_back(StateId::from(t));
        }
    }
    // Remaining successors an opponent state can still escape to.
    let mut escapes: Vec<u32> = vec![u32::MAX; n];
    while let Some(t) = queue.pop_front() {
        for &p in arena.predecessors(t) {
            if result.contains(p.index()) || !inside(p) {
                continue;
            }
            let attracted = if arena.owner(p) == player {
                if let Some(strategy) = strategy.as_deref_mut() {
                    strategy[p.index()] = Some(t);
                }
                true
            } else {
                let left = &mut escapes[p.index()];
                if *left == u32::MAX {
                    *left = arena.successors(p).iter().filter(|&&q| inside(q)).count() as u32;
                }
                *left -= 1;
                *left == 0
            };
            if attracted {
                result.insert(p.index());
                queue.push_back(p);
            }
        }
    }
    result
}
