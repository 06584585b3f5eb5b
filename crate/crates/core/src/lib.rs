//! Backward responsibility for states of finite transition systems.
//!
//! Given a system, an objective and a lasso-shaped run violating it, each
//! state (or block of states) is a player in a simple cooperative game whose
//! payoff is the value of a two-player graph game. Responsibility is the
//! Shapley value of that game.

pub mod counterexample;
pub mod fixtures;
pub mod game;
pub mod generate;
mod graph;
pub mod ingest;
pub mod model;
pub mod refine;
pub mod resp;

pub use counterexample::{find_violating_run, FindRunError};
pub use game::{Mode, Setting};
pub use model::{
    validate_run, violates, Instance, LassoRun, ModelError, Objective, ObjectiveKind,
    RunDiagnostic, RunIndex, StateId, StateSet, TransitionSystem,
};
