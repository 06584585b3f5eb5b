use super::attractor::attract;
use super::zielonka::zielonka;
use super::{Game, GameArena, Player};
use crate::model::{Objective, StateId, StateSet};

/// Sat's winning region with a positional strategy for the Sat states in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinningRegion {
    pub sat_wins: StateSet,
    pub strategy: Vec<Option<StateId>>,
}

impl WinningRegion {
    pub fn contains(&self, s: StateId) -> bool {
        self.sat_wins.contains(s.index())
    }
}

pub fn solve(game: &Game<'_>) -> WinningRegion {
    solve_arena(&game.arena, game.objective)
}

pub fn solve_arena(arena: &GameArena, objective: &Objective) -> WinningRegion {
    let n = arena.num_states();
    let mut strategy = vec![None; n];
    let sat_wins = match objective {
        Objective::Safety(bad) => {
            let mut win = attract(arena, bad, Player::Unsat, None, None);
            win.toggle_range(..);
            win
        }
        Objective::Reachability(goal) => {
            attract(arena, goal, Player::Sat, None, Some(&mut strategy))
        }
        Objective::Buechi(accepting) => buechi(arena, accepting, &mut strategy),
        Objective::Parity(colours) => {
            let (win, s) = zielonka(arena, colours);
            strategy = s;
            win
        }
    };
    // Sat states without an attractor move just stay inside the region.
    for s in sat_wins.ones() {
        let id = StateId::from(s);
        if arena.owner(id) != Player::Sat {
            strategy[s] = None;
            continue;
        }
        let keep = strategy[s].is_some_and(|t| sat_wins.contains(t.index()));
        if !keep {
            strategy[s] = arena
                .successors(id)
                .iter()
                .copied()
                .find(|t| sat_wins.contains(t.index()));
        }
    }
    for (s, entry) in strategy.iter_mut().enumerate() {
        if !sat_wins.contains(s) {
            *entry = None;
        }
    }
    WinningRegion { sat_wins, strategy }
}

/// Recurrence fixpoint: repeatedly discard the Unsat attractor of states that
/// cannot revisit the accepting set.
fn buechi(
    arena: &GameArena,
    accepting: &StateSet,
    strategy: &mut Vec<Option<StateId>>,
) -> StateSet {
    let n = arena.num_states();
    let mut region = StateSet::with_capacity(n);
    region.insert_range(..);
    loop {
        let mut targets = accepting.clone();
        targets.intersect_with(&region);
        strategy.iter_mut().for_each(|e| *e = None);
        let recur = attract(arena, &targets, Player::Sat, Some(&region), Some(strategy));
        let mut trap = region.clone();
        trap.difference_with(&recur);
        if trap.is_clear() {
            return region;
        }
        let lost = attract(arena, &trap, Player::Unsat, Some(&region), None);
        region.difference_with(&lost);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::game::{Mode, Setting};

    #[test]
    fn fig8_regions_for_empty_and_full_coalitions() {
        let inst = fixtures::fig8();
        let run = inst.run_index().unwrap();
        let s = Setting::new(&inst.ts, &inst.objective, Some(&run), Mode::Pessimistic).unwrap();
        let empty = s.solve(&inst.ts.empty_set());
        assert_eq!(inst.ts.format_set(&empty.sat_wins), "{s4, s7}");
        let full = s.solve(&inst.ts.full_set());
        assert_eq!(
            inst.ts.format_set(&full.sat_wins),
            "{s0, s1, s2, s3, s4, s5, s6, s7, s8}"
        );
    }

    #[test]
    fn single_even_self_loop_wins() {
        let ts = crate::model::TransitionSystem::from_names(&["a"], "a", &[("a", "a")]).unwrap();
        let arena = GameArena::from_system(&ts, ts.empty_set());
        let w = solve_arena(&arena, &Objective::Parity(vec![2]));
        assert!(w.contains(StateId(0)));
    }

    #[test]
    fn fig10_buechi_regions() {
        let inst = fixtures::fig10();
        let run = inst.run_index().unwrap();
        let s = Setting::new(&inst.ts, &inst.objective, Some(&run), Mode::Pessimistic).unwrap();
        assert!(s.solve(&inst.ts.empty_set()).sat_wins.is_clear());
        assert_eq!(s.solve(&inst.ts.full_set()).sat_wins, inst.ts.full_set());
    }

    #[test]
    fn reachability_of_initial_target_always_wins() {
        let inst = fixtures::fig3();
        let obj = Objective::Reachability(inst.ts.set_of([inst.ts.initial()]));
        let run = inst.run_index().unwrap();
        for mode in [Mode::Optimistic, Mode::Pessimistic, Mode::Forward] {
            let s = Setting::new(&inst.ts, &obj, Some(&run), mode).unwrap();
            assert!(s.value(&inst.ts.empty_set()));
        }
    }
}
