//! Per-iteration audit records; the layout is documented in `docs/trace.md`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{BlockId, BspWitness, Partition};
use crate::model::{StateId, StateSet, TransitionSystem};
use crate::resp::PlayerSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceBlock {
    pub id: BlockId,
    /// Player names.
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceWitness {
    pub block: BlockId,
    /// States of the losing coalition.
    pub coalition: Vec<String>,
    pub delta: Vec<String>,
    pub frontier: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceSplit {
    pub block: BlockId,
    pub state: String,
    pub player: String,
    pub single: BlockId,
    pub rest: BlockId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub partition: Vec<TraceBlock>,
    pub witnesses: Vec<TraceWitness>,
    pub selected: Option<BlockId>,
    pub split: Option<TraceSplit>,
}

fn names(ts: &TransitionSystem, set: &StateSet) -> Vec<String> {
    set.ones()
        .map(|s| ts.name(StateId::from(s)).to_string())
        .collect()
}

impl TraceRecord {
    pub(super) fn new(
        iteration: usize,
        players: &PlayerSet,
        ts: &TransitionSystem,
        part: &Partition,
        witnesses: &BTreeMap<BlockId, BspWitness>,
    ) -> Self {
        TraceRecord {
            iteration,
            partition: part
                .blocks()
                .iter()
                .map(|b| TraceBlock {
                    id: b.id,
                    members: b
                        .members
                        .iter()
                        .map(|&p| players.get(p).name.clone())
                        .collect(),
                })
                .collect(),
            witnesses: witnesses
                .values()
                .map(|w| TraceWitness {
                    block: w.block,
                    coalition: names(ts, &w.coalition),
                    delta: names(ts, &w.delta),
                    frontier: names(ts, &w.frontier),
                })
                .collect(),
            selected: None,
            split: None,
        }
    }

    /// Frontier of the witness of `block`, if it has one.
    pub fn frontier_of(&self, block: BlockId) -> Option<&[String]> {
        self.witnesses
            .iter()
            .find(|w| w.block == block)
            .map(|w| w.frontier.as_slice())
    }
}

/// One JSON object per line.
pub fn trace_jsonl(trace: &[TraceRecord]) -> String {
    let mut out = String::new();
    for r in trace {
        out.push_str(&serde_json::to_string(r).expect("trace serialises"));
        out.push('\n');
    }
    out
}
