//! Two-player games over (engraved) transition systems.
//!
//! Player Sat tries to satisfy the objective, Player Unsat to violate it. A
//! coalition is the set of states Sat controls; everything else follows the
//! mode's ownership rule.

mod attractor;
pub mod dot;
mod solve;
mod zielonka;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use attractor::attractor;
pub use solve::{solve, solve_arena, WinningRegion};

use crate::graph::Successors;
use crate::model::{ModelError, Objective, RunIndex, StateId, StateSet, TransitionSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    Sat,
    Unsat,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Sat => Player::Unsat,
            Player::Unsat => Player::Sat,
        }
    }
}

/// How non-coalition states are owned and whether the run is engraved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Engraved; Sat owns the coalition and every state off the run.
    Optimistic,
    /// Engraved; Sat owns the coalition only.
    Pessimistic,
    /// Not engraved; Sat owns the coalition only.
    Forward,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Optimistic => "optimistic",
            Mode::Pessimistic => "pessimistic",
            Mode::Forward => "forward",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "optimistic" | "opt" => Ok(Mode::Optimistic),
            "pessimistic" | "pes" => Ok(Mode::Pessimistic),
            "forward" | "fwd" => Ok(Mode::Forward),
            other => Err(format!("unknown mode {other}")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("{0} mode needs a counterexample run")]
    MissingRun(Mode),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Ownership partition plus successor and predecessor lists in compressed
/// form. Every state has at least one successor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameArena {
    initial: StateId,
    sat: StateSet,
    succ_off: Vec<u32>,
    succ: Vec<StateId>,
    pred_off: Vec<u32>,
    pred: Vec<StateId>,
}

impl GameArena {
    /// Arena over the transitions of `ts`, with Sat owning `sat`.
    pub fn from_system(ts: &TransitionSystem, sat: StateSet) -> Self {
        GameArena::build(ts.num_states(), ts.initial(), sat, |s, out| {
            out.extend_from_slice(ts.successors(s))
        })
    }

    fn build(
        n: usize,
        initial: StateId,
        mut sat: StateSet,
        mut successors: impl FnMut(StateId, &mut Vec<StateId>),
    ) -> Self {
        sat.grow(n);
        let mut succ_off = Vec::with_capacity(n + 1);
        let mut succ = Vec::new();
        let mut indeg = vec![0u32; n + 1];
        succ_off.push(0);
        for s in 0..n {
            successors(StateId::from(s), &mut succ);
            succ_off.push(succ.len() as u32);
        }
        for t in &succ {
            indeg[t.index() + 1] += 1;
        }
        for i in 0..n {
            indeg[i + 1] += indeg[i];
        }
        let pred_off = indeg.clone();
        let mut fill = indeg;
        let mut pred = vec![StateId(0); succ.len()];
        for s in 0..n {
            for t in &succ[succ_off[s] as usize..succ_off[s + 1] as usize] {
                let slot = &mut fill[t.index()];
                pred[*slot as usize] = StateId::from(s);
                *slot += 1;
            }
        }
        GameArena {
            initial,
            sat,
            succ_off,
            succ,
            pred_off,
            pred,
        }
    }

    pub fn num_states(&self) -> usize {
        self.succ_off.len() - 1
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn successors(&self, s: StateId) -> &[StateId] {
        let i = s.index();
        &self.succ[self.succ_off[i] as usize..self.succ_off[i + 1] as usize]
    }

    pub fn predecessors(&self, s: StateId) -> &[StateId] {
        let i = s.index();
        &self.pred[self.pred_off[i] as usize..self.pred_off[i + 1] as usize]
    }

    pub fn owner(&self, s: StateId) -> Player {
        if self.sat.contains(s.index()) {
            Player::Sat
        } else {
            Player::Unsat
        }
    }

    pub fn sat_states(&self) -> &StateSet {
        &self.sat
    }

    pub fn unsat_states(&self) -> StateSet {
        let mut u = self.sat.clone();
        u.toggle_range(..);
        u
    }

    pub fn states_of(&self, player: Player) -> StateSet {
        match player {
            Player::Sat => self.sat.clone(),
            Player::Unsat => self.unsat_states(),
        }
    }
}

impl Successors for GameArena {
    fn num_states(&self) -> usize {
        GameArena::num_states(self)
    }
    fn succ(&self, s: StateId) -> &[StateId] {
        self.successors(s)
    }
}

/// An arena with an objective.
#[derive(Clone, Debug)]
pub struct Game<'o> {
    pub arena: GameArena,
    pub objective: &'o Objective,
}

/// Keeps only the run transition at run states outside the coalition.
pub fn engrave(ts: &TransitionSystem, run: &RunIndex, coalition: &StateSet) -> TransitionSystem {
    let edges = ts.edges().filter(|&(s, t)| {
        !run.contains(s) || coalition.contains(s.index()) || run.successor(s) == Some(t)
    });
    TransitionSystem::new(ts.names().to_vec(), ts.initial(), edges.collect::<Vec<_>>())
        .expect("engraving keeps every state total")
}

/// Sat's states for a coalition under `mode`.
pub fn sat_owned(
    ts: &TransitionSystem,
    run: Option<&RunIndex>,
    coalition: &StateSet,
    mode: Mode,
) -> StateSet {
    let mut sat = coalition.clone();
    sat.grow(ts.num_states());
    if mode == Mode::Optimistic {
        let run = run.expect("optimistic mode needs a run");
        let mut off = run.on_run().clone();
        off.grow(ts.num_states());
        off.toggle_range(..);
        sat.union_with(&off);
    }
    sat
}

/// The objective, system, run and mode shared by every coalition game of one
/// analysis.
#[derive(Clone, Copy, Debug)]
pub struct Setting<'a> {
    pub ts: &'a TransitionSystem,
    pub objective: &'a Objective,
    pub run: Option<&'a RunIndex>,
    pub mode: Mode,
}

impl<'a> Setting<'a> {
    pub fn new(
        ts: &'a TransitionSystem,
        objective: &'a Objective,
        run: Option<&'a RunIndex>,
        mode: Mode,
    ) -> Result<Self, GameError> {
        objective.check(ts)?;
        if mode != Mode::Forward && run.is_none() {
            return Err(GameError::MissingRun(mode));
        }
        Ok(Setting {
            ts,
            objective,
            run,
            mode,
        })
    }

    /// Arena of the coalition game, engraving on the fly.
    pub fn arena(&self, coalition: &StateSet) -> GameArena {
        let sat = sat_owned(self.ts, self.run, coalition, self.mode);
        let ts = self.ts;
        match (self.mode, self.run) {
            (Mode::Forward, _) | (_, None) => GameArena::from_system(ts, sat),
            (_, Some(run)) => GameArena::build(ts.num_states(), ts.initial(), sat, |s, out| {
                match run.successor(s) {
                    Some(t) if !coalition.contains(s.index()) => out.push(t),
                    _ => out.extend_from_slice(ts.successors(s)),
                }
            }),
        }
    }

    pub fn game(&self, coalition: &StateSet) -> Game<'a> {
        Game {
            arena: self.arena(coalition),
            objective: self.objective,
        }
    }

    pub fn solve(&self, coalition: &StateSet) -> WinningRegion {
        solve_arena(&self.arena(coalition), self.objective)
    }

    pub fn value(&self, coalition: &StateSet) -> bool {
        let arena = self.arena(coalition);
        solve_arena(&arena, self.objective)
            .sat_wins
            .contains(arena.initial().index())
    }
}

/// Builds the coalition game for `mode`. Engraved modes need `run`.
pub fn build_game<'o>(
    ts: &TransitionSystem,
    objective: &'o Objective,
    run: Option<&RunIndex>,
    coalition: &StateSet,
    mode: Mode,
) -> Result<Game<'o>, GameError> {
    let setting = Setting::new(ts, objective, run, mode)?;
    Ok(Game {
        arena: setting.arena(coalition),
        objective,
    })
}

/// 1 iff Sat wins from the initial state.
pub fn game_value(game: &Game<'_>) -> bool {
    solve(game).sat_wins.contains(game.arena.initial().index())
}
