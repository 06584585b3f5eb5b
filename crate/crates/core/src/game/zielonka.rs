//! Recursive parity solver. Max-parity: Sat wins when the largest colour seen
//! infinitely often is even.

use super::attractor::attract;
use super::{GameArena, Player};
use crate::model::{StateId, StateSet};

fn player_of(colour: u32) -> Player {
    if colour.is_multiple_of(2) {
        Player::Sat
    } else {
        Player::Unsat
    }
}

/// Returns Sat's region and a strategy entry for every state that is winning
/// for its owner.
pub(super) fn zielonka(arena: &GameArena, colours: &[u32]) -> (StateSet, Vec<Option<StateId>>) {
    let n = arena.num_states();
    let mut all = StateSet::with_capacity(n);
    all.insert_range(..);
    let mut strategy = vec![None; n];
    let [sat, _] = solve_sub(arena, colours, &all, &mut strategy);
    (sat, strategy)
}

fn index(p: Player) -> usize {
    match p {
        Player::Sat => 0,
        Player::Unsat => 1,
    }
}

fn solve_sub(
    arena: &GameArena,
    colours: &[u32],
    within: &StateSet,
    strategy: &mut Vec<Option<StateId>>,
) -> [StateSet; 2] {
    let n = arena.num_states();
    let Some(top) = within.ones().map(|s| colours[s]).max() else {
        return [StateSet::with_capacity(n), StateSet::with_capacity(n)];
    };
    let p = player_of(top);
    let q = p.opponent();
    let mut peak = StateSet::with_capacity(n);
    for s in within.ones().filter(|&s| colours[s] == top) {
        peak.insert(s);
    }
    let attracted = attract(arena, &peak, p, Some(within), Some(strategy));
    let mut rest = within.clone();
    rest.difference_with(&attracted);
    let first = solve_sub(arena, colours, &rest, strategy);
    if first[index(q)].is_clear() {
        for s in peak.ones() {
            let id = StateId::from(s);
            if arena.owner(id) == p {
                strategy[s] = arena
                    .successors(id)
                    .iter()
                    .copied()
                    .find(|t| within.contains(t.index()));
            }
        }
        let mut out = [StateSet::with_capacity(n), StateSet::with_capacity(n)];
        out[index(p)] = within.clone();
        return out;
    }
    let lost = attract(arena, &first[index(q)], q, Some(within), Some(strategy));
    let mut rest = within.clone();
    rest.difference_with(&lost);
    let mut second = solve_sub(arena, colours, &rest, strategy);
    second[index(q)].union_with(&lost);
    second
}
