use std::collections::BTreeMap;

use super::{Block, BlockId, Partition, RefineError};
use crate::game::Setting;
use crate::model::{StateId, StateSet};
use crate::resp::PayoffGame;

/// `block` turns the losing coalition `coalition` into a winning one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BspWitness {
    pub block: BlockId,
    pub block_states: StateSet,
    /// Flattened coalition of other blocks.
    pub coalition: StateSet,
    pub win_with: StateSet,
    pub win_without: StateSet,
    /// `win_with \ win_without`.
    pub delta: StateSet,
    pub frontier: StateSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RefineLimits {
    /// Most candidate blocks an exhaustive witness search may range over.
    pub block_cap: usize,
    /// Total games the payoff game may solve before giving up.
    pub max_games: Option<u64>,
}

impl Default for RefineLimits {
    fn default() -> Self {
        RefineLimits {
            block_cap: 24,
            max_games: None,
        }
    }
}

/// Delta states of `block_states` with a move leaving delta in the arena of
/// the winning coalition.
pub fn frontier(
    setting: &Setting<'_>,
    winning_coalition: &StateSet,
    delta: &StateSet,
    block_states: &StateSet,
) -> StateSet {
    let arena = setting.arena(winning_coalition);
    let mut out = StateSet::with_capacity(setting.ts.num_states());
    for s in delta.intersection(block_states) {
        let leaves = arena
            .successors(StateId::from(s))
            .iter()
            .any(|t| !delta.contains(t.index()));
        if leaves {
            out.insert(s);
        }
    }
    out
}

struct Search<'p, 'a> {
    pg: &'p PayoffGame<'a>,
    limits: RefineLimits,
}

impl Search<'_, '_> {
    fn gamma(&self, states: &StateSet) -> Result<bool, RefineError> {
        if let Some(budget) = self.limits.max_games {
            if self.pg.stats().games_solved >= budget {
                return Err(RefineError::GameBudget { budget });
            }
        }
        Ok(self.pg.gamma_states(states))
    }

    fn states(&self, blocks: &[&Block]) -> StateSet {
        self.pg
            .players()
            .flatten(blocks.iter().flat_map(|b| b.members.iter().copied()))
    }

    fn witness(&self, block: &Block, coalition: StateSet) -> BspWitness {
        let setting = self.pg.setting();
        let block_states = self.states(&[block]);
        let mut with = coalition.clone();
        with.union_with(&block_states);
        let win_with = self.pg.region(&with).sat_wins;
        let win_without = self.pg.region(&coalition).sat_wins;
        let mut delta = win_with.clone();
        delta.difference_with(&win_without);
        let frontier = frontier(setting, &with, &delta, &block_states);
        BspWitness {
            block: block.id,
            block_states,
            coalition,
            win_with,
            win_without,
            delta,
            frontier,
        }
    }

    /// Drops coalition blocks (in id order) that the switch does not need.
    fn shrink(&self, block: &Block, mut chosen: Vec<&Block>) -> Result<StateSet, RefineError> {
        let mut k = 0;
        while k < chosen.len() {
            let mut trial = chosen.clone();
            trial.remove(k);
            trial.push(block);
            if self.gamma(&self.states(&trial))? {
                chosen.remove(k);
            } else {
                k += 1;
            }
        }
        Ok(self.states(&chosen))
    }

    fn find(&self, part: &Partition, block: &Block) -> Result<Option<StateSet>, RefineError> {
        let others: Vec<&Block> = part.blocks().iter().filter(|b| b.id != block.id).collect();
        if !self.gamma(&self.states(&others))? {
            return self.shrink(block, others).map(Some);
        }
        // a block winning alone sits in no losing coalition
        let mut candidates = Vec::new();
        for &b in &others {
            if !self.gamma(&self.states(&[b]))? {
                candidates.push(b);
            }
        }
        if !self.gamma(&self.states(&candidates))? {
            // the unique maximal losing coalition decides the block
            let mut with = candidates.clone();
            with.push(block);
            if !self.gamma(&self.states(&with))? {
                return Ok(None);
            }
            return self.shrink(block, candidates).map(Some);
        }
        if candidates.len() > self.limits.block_cap {
            return Err(RefineError::BlockCap {
                blocks: candidates.len(),
                cap: self.limits.block_cap,
            });
        }
        // losing coalitions by ascending size, each extended only upwards
        let mut level: Vec<Vec<usize>> = vec![Vec::new()];
        while !level.is_empty() {
            for c in &level {
                let mut with: Vec<&Block> = c.iter().map(|&i| candidates[i]).collect();
                with.push(block);
                if self.gamma(&self.states(&with))? {
                    let chosen: Vec<&Block> = c.iter().map(|&i| candidates[i]).collect();
                    return Ok(Some(self.states(&chosen)));
                }
            }
            let mut next = Vec::new();
            for c in &level {
                let from = c.last().map_or(0, |&i| i + 1);
                for i in from..candidates.len() {
                    let mut grown = c.clone();
                    grown.push(i);
                    let blocks: Vec<&Block> = grown.iter().map(|&j| candidates[j]).collect();
                    if !self.gamma(&self.states(&blocks))? {
                        next.push(grown);
                    }
                }
            }
            level = next;
        }
        Ok(None)
    }
}

/// A witness for every block that has one. Singleton blocks listed in
/// `known` keep their earlier witness without a new search.
pub fn compute_has_bsp(
    pg: &PayoffGame<'_>,
    part: &Partition,
    known: &BTreeMap<BlockId, BspWitness>,
    limits: RefineLimits,
) -> Result<BTreeMap<BlockId, BspWitness>, RefineError> {
    let search = Search { pg, limits };
    let mut out = BTreeMap::new();
    let all: Vec<&Block> = part.blocks().iter().collect();
    if !search.gamma(&search.states(&all))? || search.gamma(&search.states(&[]))? {
        return Ok(out);
    }
    for block in part.blocks() {
        if block.is_singleton() {
            if let Some(w) = known.get(&block.id) {
                out.insert(block.id, w.clone());
                continue;
            }
        }
        if let Some(coalition) = search.find(part, block)? {
            out.insert(block.id, search.witness(block, coalition));
        }
    }
    Ok(out)
}
