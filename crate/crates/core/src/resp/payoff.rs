use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{PlayerSet, RespError};
use crate::game::{Setting, WinningRegion};
use crate::model::StateSet;

/// Bitmask over the player order of a [`PlayerSet`].
pub type Coalition = FixedBitSet;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub games_solved: u64,
    pub memo_hits: u64,
}

/// γ: coalitions to {0, 1}, memoised on the flattened state set.
///
/// The memo is shared between threads. γ is deterministic, so two threads
/// racing on one entry write the same value.
#[derive(Debug)]
pub struct PayoffGame<'a> {
    setting: Setting<'a>,
    players: PlayerSet,
    memo: Mutex<HashMap<StateSet, bool>>,
    solved: AtomicU64,
    hits: AtomicU64,
}

impl<'a> PayoffGame<'a> {
    pub fn new(setting: Setting<'a>, players: PlayerSet) -> Self {
        PayoffGame {
            setting,
            players,
            memo: Mutex::new(HashMap::new()),
            solved: AtomicU64::new(0),
            hits: AtomicU64::new(0),
        }
    }

    /// Same setting and memo statistics reset, different players.
    pub fn with_players(&self, players: PlayerSet) -> PayoffGame<'a> {
        PayoffGame::new(self.setting, players)
    }

    pub fn setting(&self) -> &Setting<'a> {
        &self.setting
    }

    pub fn players(&self) -> &PlayerSet {
        &self.players
    }

    pub fn stats(&self) -> Stats {
        Stats {
            games_solved: self.solved.load(Ordering::Relaxed),
            memo_hits: self.hits.load(Ordering::Relaxed),
        }
    }

    pub(crate) fn add_stats(&self, solved: u64, hits: u64) {
        self.solved.fetch_add(solved, Ordering::Relaxed);
        self.hits.fetch_add(hits, Ordering::Relaxed);
    }

    pub fn gamma(&self, c: &Coalition) -> bool {
        self.gamma_states(&self.players.flatten(c.ones()))
    }

    /// γ of the coalition controlling exactly `states`.
    pub fn gamma_states(&self, states: &StateSet) -> bool {
        let mut key = states.clone();
        key.grow(self.setting.ts.num_states());
        if let Some(&v) = self.memo.lock().expect("memo lock").get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return v;
        }
        let v = self.value_uncached(&key);
        self.memo.lock().expect("memo lock").insert(key, v);
        v
    }

    /// Solves without touching the memo.
    pub fn value_uncached(&self, states: &StateSet) -> bool {
        self.solved.fetch_add(1, Ordering::Relaxed);
        self.setting.value(states)
    }

    /// Sat's winning region for the coalition `states`; also feeds the memo.
    pub fn region(&self, states: &StateSet) -> WinningRegion {
        self.solved.fetch_add(1, Ordering::Relaxed);
        let region = self.setting.solve(states);
        let mut key = states.clone();
        key.grow(self.setting.ts.num_states());
        let v = region.contains(self.setting.ts.initial());
        self.memo.lock().expect("memo lock").insert(key, v);
        region
    }

    /// γ(c) = 0 and γ(c ∪ {p}) = 1.
    pub fn is_switching_pair(&self, c: &Coalition, p: usize) -> Result<bool, RespError> {
        if c.contains(p) {
            return Err(RespError::PlayerInCoalition(
                self.players.get(p).name.clone(),
            ));
        }
        if self.gamma(c) {
            return Ok(false);
        }
        let mut with = c.clone();
        with.grow(self.players.len());
        with.insert(p);
        Ok(self.gamma(&with))
    }

    /// Coalition holding the named players.
    pub fn coalition(&self, names: &[&str]) -> Result<Coalition, RespError> {
        let mut c = Coalition::with_capacity(self.players.len());
        for n in names {
            let i = self
                .players
                .position(n)
                .ok_or_else(|| RespError::UnknownPlayer(n.to_string()))?;
            c.insert(i);
        }
        Ok(c)
    }
}
