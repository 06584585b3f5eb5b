use std::fmt;

use crate::model::{StateId, StateSet, TransitionSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlayerKind {
    States,
    Blocks,
}

impl fmt::Display for PlayerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlayerKind::States => "states",
            PlayerKind::Blocks => "blocks",
        })
    }
}

/// A player controls all of its member states at once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Player {
    pub name: String,
    pub members: Vec<StateId>,
}

/// Ordered, duplicate-free players. State players are sorted by id, blocks
/// by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayerSet {
    kind: PlayerKind,
    players: Vec<Player>,
    num_states: usize,
}

impl PlayerSet {
    pub fn states(ts: &TransitionSystem, ids: impl IntoIterator<Item = StateId>) -> Self {
        let mut ids: Vec<StateId> = ids.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        PlayerSet {
            kind: PlayerKind::States,
            players: ids
                .into_iter()
                .map(|s| Player {
                    name: ts.name(s).to_string(),
                    members: vec![s],
                })
                .collect(),
            num_states: ts.num_states(),
        }
    }

    pub fn all_states(ts: &TransitionSystem) -> Self {
        PlayerSet::states(ts, ts.states())
    }

    /// Blocks given as (name, members); sorted by name.
    pub fn blocks(ts: &TransitionSystem, blocks: Vec<(String, Vec<StateId>)>) -> Self {
        let mut players: Vec<Player> = blocks
            .into_iter()
            .map(|(name, mut members)| {
                members.sort_unstable();
                Player { name, members }
            })
            .collect();
        players.sort_by(|a, b| a.name.cmp(&b.name));
        PlayerSet {
            kind: PlayerKind::Blocks,
            players,
            num_states: ts.num_states(),
        }
    }

    pub fn kind(&self) -> PlayerKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.players.len()
    }

    pub fn is_empty(&self) -> bool {
        self.players.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Player> {
        self.players.iter()
    }

    pub fn get(&self, i: usize) -> &Player {
        &self.players[i]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.players.iter().position(|p| p.name == name)
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    /// Union of the member states of the players selected by `mask`.
    pub fn flatten_mask(&self, mask: u64) -> StateSet {
        let mut set = StateSet::with_capacity(self.num_states);
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            for s in &self.players[i].members {
                set.insert(s.index());
            }
        }
        set
    }

    pub fn flatten(&self, players: impl IntoIterator<Item = usize>) -> StateSet {
        let mut set = StateSet::with_capacity(self.num_states);
        for i in players {
            for s in &self.players[i].members {
                set.insert(s.index());
            }
        }
        set
    }

    /// Every state covered by some player.
    pub fn covered(&self) -> StateSet {
        self.flatten(0..self.len())
    }

    /// The subset of players whose indices are listed, same kind and order.
    pub fn restrict(&self, keep: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = keep.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        PlayerSet {
            kind: self.kind,
            players: idx.into_iter().map(|i| self.players[i].clone()).collect(),
            num_states: self.num_states,
        }
    }
}
