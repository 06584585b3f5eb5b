//! Responsibility as the Shapley value of the coalition game whose payoff is
//! the value of the induced graph game.

mod buechi_opt;
mod oracle;
mod payoff;
mod players;
mod prune;
mod reach_opt;
mod report;
mod shapley;

use thiserror::Error;

pub use buechi_opt::{
    positivity_buechi_opt, positivity_set_buechi_opt, BuechiOptions, BuechiPositivity,
    PreorderReading, RhoOrder,
};
pub use oracle::{oracle_minimal_winning, oracle_shapley, ORACLE_CAP};
pub use payoff::{Coalition, PayoffGame, Stats};
pub use players::{Player, PlayerKind, PlayerSet};
pub use prune::{prune_blocks, prune_dummies};
pub use reach_opt::{positivity_reach_opt, values_reach_opt};
pub use report::{threshold, ReportEntry, ResponsibilityReport};
pub use shapley::{shapley_exact, shapley_weights, DEFAULT_SHAPLEY_CAP};

use crate::game::GameError;
use crate::model::ObjectiveKind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RespError {
    #[error(
        "{players} players exceed the exact Shapley cap of {cap}; \
         use `refine` to find the responsible states first"
    )]
    CapExceeded { players: usize, cap: usize },
    #[error("this computation needs a {expected} objective, got {found}")]
    WrongObjective {
        expected: ObjectiveKind,
        found: ObjectiveKind,
    },
    #[error("this computation needs optimistic mode")]
    WrongMode,
    #[error("unknown player {0}")]
    UnknownPlayer(String),
    #[error("player {0} is already in the coalition")]
    PlayerInCoalition(String),
    #[error(transparent)]
    Game(#[from] GameError),
}
