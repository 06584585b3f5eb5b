//! Analysis results. The records layout is documented in `docs/report.md`.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::{PlayerKind, PlayerSet, RespError, Stats};
use crate::game::Mode;
use crate::model::{StateId, TransitionSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportEntry {
    pub name: String,
    pub members: Vec<StateId>,
    pub value: BigRational,
}

impl ReportEntry {
    pub fn is_positive(&self) -> bool {
        self.value.is_positive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResponsibilityReport {
    pub mode: Mode,
    pub kind: PlayerKind,
    /// One entry per player, in player order.
    pub entries: Vec<ReportEntry>,
    pub stats: Stats,
}

impl ResponsibilityReport {
    pub fn entry(&self, name: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn value(&self, name: &str) -> Option<&BigRational> {
        self.entry(name).map(|e| &e.value)
    }

    /// Names of the players with positive value, in player order.
    pub fn positive(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.is_positive())
            .map(|e| e.name.as_str())
            .collect()
    }

    pub fn total(&self) -> BigRational {
        self.entries.iter().map(|e| &e.value).sum()
    }

    /// Adds zero entries for players of `all` that are missing (pruned), then
    /// restores the order of `all`.
    pub fn padded(&self, all: &PlayerSet) -> ResponsibilityReport {
        let entries = all
            .iter()
            .map(|p| {
                self.entry(&p.name).cloned().unwrap_or_else(|| ReportEntry {
                    name: p.name.clone(),
                    members: p.members.clone(),
                    value: BigRational::zero(),
                })
            })
            .collect();
        ResponsibilityReport {
            entries,
            ..self.clone()
        }
    }

    /// Display order: descending value, ties by player order.
    pub fn ranked(&self) -> Vec<&ReportEntry> {
        let mut v: Vec<&ReportEntry> = self.entries.iter().collect();
        v.sort_by(|a, b| b.value.cmp(&a.value));
        v
    }

    pub fn to_records_json(&self, ts: &TransitionSystem, trace: Option<Value>) -> Value {
        let records: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "members": e.members.iter().map(|&s| ts.name(s)).collect::<Vec<_>>(),
                    "numerator": e.value.numer().to_string(),
                    "denominator": e.value.denom().to_string(),
                    "positive": e.is_positive(),
                })
            })
            .collect();
        let mut doc = json!({
            "mode": self.mode.to_string(),
            "player_kind": self.kind.to_string(),
            "records": records,
            "stats": self.stats,
        });
        if let Some(t) = trace {
            doc["trace"] = t;
        }
        doc
    }

    /// Fixed-width table for the terminal.
    pub fn to_table(&self) -> String {
        let width = self
            .entries
            .iter()
            .map(|e| e.name.len())
            .max()
            .unwrap_or(0)
            .max(6);
        let mut out = format!("{:<width$}  {:>12}  {:>10}\n", "player", "value", "decimal");
        for e in self.ranked() {
            out.push_str(&format!(
                "{:<width$}  {:>12}  {:>10.6}\n",
                e.name,
                e.value.to_string(),
                e.value.to_f64().unwrap_or(f64::NAN)
            ));
        }
        out
    }
}

/// Whether the named player's value strictly exceeds `t`.
pub fn threshold(
    report: &ResponsibilityReport,
    player: &str,
    t: &BigRational,
) -> Result<bool, RespError> {
    let v = report
        .value(player)
        .ok_or_else(|| RespError::UnknownPlayer(player.to_string()))?;
    Ok(v > t)
}
