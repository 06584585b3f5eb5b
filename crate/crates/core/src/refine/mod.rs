//! Partition refinement: finds the players with positive responsibility by
//! splitting blocks that can switch a losing coalition to a winning one,
//! without enumerating all coalitions of players.

mod bsp;
mod partition;
#[cfg(test)]
mod tests;
mod trace;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use bsp::{compute_has_bsp, frontier, BspWitness, RefineLimits};
pub use partition::{Block, BlockId, Partition};
pub use trace::{trace_jsonl, TraceBlock, TraceRecord, TraceSplit, TraceWitness};

use crate::model::StateId;
use crate::resp::{shapley_exact, PayoffGame, RespError, ResponsibilityReport, Stats};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RefineError {
    #[error(
        "witness search would range over {blocks} blocks (cap {cap}); \
         raise --block-cap or start from fewer blocks"
    )]
    BlockCap { blocks: usize, cap: usize },
    #[error("game budget of {budget} solved games exhausted")]
    GameBudget { budget: u64 },
    #[error("block {0} has a switching witness but no state changes sides")]
    EmptyDelta(BlockId),
    #[error(transparent)]
    Resp(#[from] RespError),
}

macro_rules! named_enum {
    ($name:ident, $what:literal, { $($variant:ident => $text:literal),* $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum $name {
            $($variant),*
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),*
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                $name::ALL
                    .iter()
                    .copied()
                    .find(|v| v.as_str() == s)
                    .ok_or_else(|| {
                        let names: Vec<&str> = $name::ALL.iter().map(|v| v.as_str()).collect();
                        format!("unknown {} `{}`; expected one of {}", $what, s, names.join(", "))
                    })
            }
        }
    };
}

named_enum!(SelectHeuristic, "block selection", {
    Random => "random",
    MaxDelta => "max-delta",
    MinDelta => "min-delta",
    MinFrontier => "min-frontier",
});

named_enum!(RefineHeuristic, "refinement heuristic", {
    Random => "random",
    FrontierRandom => "frontier-random",
    FrontierMax => "frontier-max",
    FrontierLosing => "frontier-losing",
    FrontierWinning => "frontier-winning",
    FrontierLowest => "frontier-lowest",
});

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeuristicsConfig {
    pub initial_blocks: usize,
    pub select: SelectHeuristic,
    pub refine: RefineHeuristic,
    pub seed: u64,
}

impl Default for HeuristicsConfig {
    fn default() -> Self {
        HeuristicsConfig {
            initial_blocks: 1,
            select: SelectHeuristic::Random,
            refine: RefineHeuristic::FrontierRandom,
            seed: 0,
        }
    }
}

/// Picks the block to refine among non-singleton witness blocks, with ties
/// going to the lowest block id.
pub fn select_blocks(
    candidates: &[&BspWitness],
    heuristic: SelectHeuristic,
    rng: &mut ChaCha8Rng,
) -> Option<BlockId> {
    let key = |w: &&BspWitness| -> usize {
        match heuristic {
            SelectHeuristic::MaxDelta | SelectHeuristic::MinDelta => w.delta.count_ones(..),
            _ => w.frontier.count_ones(..),
        }
    };
    let mut sorted: Vec<&BspWitness> = candidates.to_vec();
    sorted.sort_by_key(|w| w.block);
    match heuristic {
        SelectHeuristic::Random => sorted.choose(rng).map(|w| w.block),
        SelectHeuristic::MaxDelta => {
            let best = sorted.iter().map(key).max()?;
            sorted.iter().find(|w| key(w) == best).map(|w| w.block)
        }
        SelectHeuristic::MinDelta | SelectHeuristic::MinFrontier => {
            let best = sorted.iter().map(key).min()?;
            sorted.iter().find(|w| key(w) == best).map(|w| w.block)
        }
    }
}

/// Chooses the state to split off the witness block.
pub fn refine_block(
    pg: &PayoffGame<'_>,
    witness: &BspWitness,
    heuristic: RefineHeuristic,
    rng: &mut ChaCha8Rng,
) -> Result<StateId, RefineError> {
    let mut in_delta = witness.block_states.clone();
    in_delta.intersect_with(&witness.delta);
    let pool: Vec<usize> = in_delta.ones().collect();
    if pool.is_empty() {
        return Err(RefineError::EmptyDelta(witness.block));
    }
    let front: Vec<usize> = witness.frontier.ones().collect();
    let uniform = |v: &[usize], rng: &mut ChaCha8Rng| *v.choose(rng).expect("non-empty");
    let chosen = match heuristic {
        RefineHeuristic::Random => uniform(&pool, rng),
        _ if front.is_empty() => match heuristic {
            RefineHeuristic::FrontierLowest => pool[0],
            _ => uniform(&pool, rng),
        },
        RefineHeuristic::FrontierRandom => uniform(&front, rng),
        RefineHeuristic::FrontierLowest => front[0],
        RefineHeuristic::FrontierMax
        | RefineHeuristic::FrontierLosing
        | RefineHeuristic::FrontierWinning => {
            let setting = pg.setting();
            let mut with = witness.coalition.clone();
            with.union_with(&witness.block_states);
            let arena = setting.arena(&with);
            let counts = |s: usize| -> usize {
                arena
                    .successors(StateId::from(s))
                    .iter()
                    .filter(|t| {
                        let i = t.index();
                        let losing = !witness.win_with.contains(i);
                        let winning = witness.win_without.contains(i);
                        match heuristic {
                            RefineHeuristic::FrontierLosing => losing,
                            RefineHeuristic::FrontierWinning => winning,
                            _ => losing || winning,
                        }
                    })
                    .count()
            };
            let best = front.iter().map(|&s| counts(s)).max().unwrap_or(0);
            *front
                .iter()
                .find(|&&s| counts(s) == best)
                .expect("non-empty")
        }
    };
    Ok(StateId::from(chosen))
}

#[derive(Clone, Debug)]
pub struct RefineOutcome {
    /// Player indices with positive responsibility, ascending.
    pub responsible: Vec<usize>,
    pub partition: Partition,
    pub witnesses: BTreeMap<BlockId, BspWitness>,
    /// Loop iterations, the last one being the one that found nothing to split.
    pub iterations: usize,
    pub trace: Vec<TraceRecord>,
    pub stats: Stats,
}

/// Splits witness blocks until every witness block is a single player; the
/// players of those blocks are exactly the responsible ones.
pub fn refine_loop(
    pg: &PayoffGame<'_>,
    config: &HeuristicsConfig,
    limits: RefineLimits,
) -> Result<RefineOutcome, RefineError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut part = Partition::random(pg.players().len(), config.initial_blocks, &mut rng);
    let mut known = BTreeMap::new();
    let mut trace = Vec::new();
    let ts = pg.setting().ts;
    loop {
        let witnesses = if part.is_empty() {
            BTreeMap::new()
        } else {
            compute_has_bsp(pg, &part, &known, limits)?
        };
        let candidates: Vec<&BspWitness> = witnesses
            .values()
            .filter(|w| part.get(w.block).is_some_and(|b| !b.is_singleton()))
            .collect();
        let mut record = TraceRecord::new(trace.len() + 1, pg.players(), ts, &part, &witnesses);
        let Some(chosen) = select_blocks(&candidates, config.select, &mut rng) else {
            trace.push(record);
            let mut responsible: Vec<usize> = witnesses
                .keys()
                .filter_map(|id| part.get(*id))
                .flat_map(|b| b.members.iter().copied())
                .collect();
            responsible.sort_unstable();
            return Ok(RefineOutcome {
                responsible,
                iterations: trace.len(),
                partition: part,
                witnesses,
                trace,
                stats: pg.stats(),
            });
        };
        let witness = &witnesses[&chosen];
        let state = refine_block(pg, witness, config.refine, &mut rng)?;
        let block = part.get(chosen).expect("selected block exists");
        let player = block
            .members
            .iter()
            .copied()
            .find(|&p| pg.players().get(p).members.contains(&state))
            .expect("chosen state belongs to the block");
        let (single, rest) = part.split(chosen, player);
        record.selected = Some(chosen);
        record.split = Some(TraceSplit {
            block: chosen,
            state: ts.name(state).to_string(),
            player: pg.players().get(player).name.clone(),
            single,
            rest,
        });
        trace.push(record);
        known = witnesses
            .into_iter()
            .filter(|(id, _)| part.get(*id).is_some_and(Block::is_singleton))
            .collect();
    }
}

/// Refinement followed by exact values over the responsible players only;
/// every other player gets 0.
pub fn responsibility_via_refinement(
    pg: &PayoffGame<'_>,
    config: &HeuristicsConfig,
    limits: RefineLimits,
    shapley_cap: usize,
) -> Result<(ResponsibilityReport, RefineOutcome), RefineError> {
    let outcome = refine_loop(pg, config, limits)?;
    let reduced = pg.with_players(pg.players().restrict(outcome.responsible.iter().copied()));
    let report = shapley_exact(&reduced, shapley_cap)?;
    let mut padded = report.padded(pg.players());
    let stats = pg.stats();
    padded.stats = Stats {
        games_solved: stats.games_solved + report.stats.games_solved,
        memo_hits: stats.memo_hits + report.stats.memo_hits,
    };
    Ok((padded, outcome))
}
