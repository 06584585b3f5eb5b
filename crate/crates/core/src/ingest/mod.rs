//! Model inputs: explicit JSON graphs, guarded-command programs, objectives
//! given on the command line and state groupings.

mod expand;
mod explicit;
mod lang;

use indexmap::IndexMap;
use thiserror::Error;

pub use expand::{expand_program, DEFAULT_STATE_CAP};
pub use explicit::{parse_explicit, serialize_explicit, ExplicitModelDoc, ObjectiveDoc, RunDoc};
pub use lang::{
    parse_program, BinOp, Command, ConstDecl, ConstType, Expr, ExprKind, FormulaDecl, LabelDecl,
    ModuleDecl, ModuleLangProgram, Pos, UnOp, VarDecl, VarType,
};

use crate::model::{
    Instance, LassoRun, ModelError, Objective, StateId, StateSet, TransitionSystem,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IngestError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: {message}")]
    Semantic {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("parity colouring misses states: {}", .0.join(", "))]
    Colours(Vec<String>),
    #[error("groups are not a partition: {0}")]
    Groups(String),
    #[error(
        "{line}:{column}: command of module {module} sets {var} to {value}, out of bounds (in state {state})"
    )]
    OutOfBounds {
        line: usize,
        column: usize,
        module: String,
        var: String,
        value: i64,
        state: String,
    },
    #[error("deadlock: no command enabled in state {0}")]
    DeadlockState(String),
    #[error("state space exceeds the cap of {cap} states")]
    StateCap { cap: usize },
    #[error("objective: {0}")]
    Objective(String),
    #[error("grouping: {0}")]
    Grouping(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl IngestError {
    /// Resource limits, as opposed to malformed input.
    pub fn is_limit(&self) -> bool {
        matches!(self, IngestError::StateCap { .. })
    }
}

/// Named blocks of states.
pub type Groups = Vec<(String, Vec<StateId>)>;

/// A system plus whatever the input carried besides it.
#[derive(Clone, Debug)]
pub struct LoadedModel {
    pub ts: TransitionSystem,
    pub objective: Option<Objective>,
    pub run: Option<LassoRun>,
    pub groups: Option<Groups>,
    /// Label name to the states satisfying it.
    pub labels: IndexMap<String, StateSet>,
    /// Module name to the states its owner predicate holds in.
    pub owners: Option<Vec<(String, StateSet)>>,
    /// Values of integer-valued formulas, per state.
    pub int_formulas: IndexMap<String, Vec<i64>>,
}

impl LoadedModel {
    /// The model as an analysis instance, when it carries an objective and a run.
    pub fn instance(&self) -> Option<Instance> {
        Some(Instance {
            ts: self.ts.clone(),
            objective: self.objective.clone()?,
            run: self.run.clone()?,
        })
    }
}

/// Explicit documents start with `{`; anything else is a program.
pub fn load_model(text: &str, max_states: usize) -> Result<LoadedModel, IngestError> {
    if text.trim_start().starts_with('{') {
        parse_explicit(text)?.into_model()
    } else {
        expand_program(&parse_program(text)?, max_states)
    }
}

pub(crate) fn check_partition(
    ts: &TransitionSystem,
    groups: &IndexMap<String, Vec<String>>,
) -> Result<Groups, IngestError> {
    let mut owner: Vec<Option<&str>> = vec![None; ts.num_states()];
    let mut out = Vec::with_capacity(groups.len());
    for (block, names) in groups {
        let mut members = Vec::with_capacity(names.len());
        for n in names {
            let s = ts
                .id(n)
                .ok_or_else(|| IngestError::UnknownState(n.clone()))?;
            if let Some(other) = owner[s.index()] {
                return Err(IngestError::Groups(format!(
                    "{n} is in both {other} and {block}"
                )));
            }
            owner[s.index()] = Some(block);
            members.push(s);
        }
        if members.is_empty() {
            return Err(IngestError::Groups(format!("block {block} is empty")));
        }
        out.push((block.clone(), members));
    }
    let missing: Vec<&str> = ts
        .states()
        .filter(|s| owner[s.index()].is_none())
        .map(|s| ts.name(s))
        .collect();
    if !missing.is_empty() {
        return Err(IngestError::Groups(format!(
            "states in no block: {}",
            missing.join(", ")
        )));
    }
    Ok(out)
}

/// How states are grouped into players.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupingSpec {
    Singleton,
    Explicit(IndexMap<String, Vec<String>>),
    /// Block per module, by the modules' `owner` predicates.
    ByModule,
    /// Block per combination of label values.
    ByLabel(Vec<String>),
}

/// Parses a grouping file: an object mapping block names to state names.
pub fn parse_groups(text: &str) -> Result<IndexMap<String, Vec<String>>, IngestError> {
    serde_json::from_str(text).map_err(json_error)
}

/// JSON errors carry their position in the message too; keep it only once.
pub(crate) fn json_error(e: serde_json::Error) -> IngestError {
    let suffix = format!(" at line {} column {}", e.line(), e.column());
    let message = e.to_string();
    IngestError::Syntax {
        line: e.line(),
        column: e.column(),
        message: message
            .strip_suffix(&suffix)
            .unwrap_or(&message)
            .to_string(),
    }
}

pub fn resolve_grouping(spec: &GroupingSpec, model: &LoadedModel) -> Result<Groups, IngestError> {
    let ts = &model.ts;
    match spec {
        GroupingSpec::Singleton => Ok(ts
            .states()
            .map(|s| (ts.name(s).to_string(), vec![s]))
            .collect()),
        GroupingSpec::Explicit(groups) => check_partition(ts, groups),
        GroupingSpec::ByModule => {
            let owners = model.owners.as_ref().ok_or_else(|| {
                IngestError::Grouping("by-module grouping needs `owner` declarations".into())
            })?;
            let keyed = ts.states().map(|s| {
                owners
                    .iter()
                    .find(|(_, set)| set.contains(s.index()))
                    .map_or("unowned".to_string(), |(m, _)| m.clone())
            });
            Ok(group_by_key(ts, keyed))
        }
        GroupingSpec::ByLabel(names) => {
            if names.is_empty() {
                return Err(IngestError::Grouping(
                    "by-label grouping needs a label".into(),
                ));
            }
            let sets = names
                .iter()
                .map(|n| {
                    model
                        .labels
                        .get(n)
                        .ok_or_else(|| IngestError::Grouping(format!("unknown label {n}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let keyed = ts.states().map(|s| {
                names
                    .iter()
                    .zip(&sets)
                    .map(|(n, set)| {
                        if set.contains(s.index()) {
                            n.clone()
                        } else {
                            format!("!{n}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("&")
            });
            Ok(group_by_key(ts, keyed))
        }
    }
}

fn group_by_key(ts: &TransitionSystem, keys: impl Iterator<Item = String>) -> Groups {
    let mut blocks: IndexMap<String, Vec<StateId>> = IndexMap::new();
    for (s, key) in ts.states().zip(keys) {
        blocks.entry(key).or_default().push(s);
    }
    blocks.into_iter().collect()
}

/// Objective from `kind:argument`. Kinds are `safety`, `reach`, `buechi`
/// (argument: a label or comma-separated state names) and `parity`
/// (argument: an integer-valued formula giving the colour).
pub fn parse_objective(spec: &str, model: &LoadedModel) -> Result<Objective, IngestError> {
    let bad = |m: String| IngestError::Objective(m);
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| bad(format!("`{spec}` is not of the form kind:argument")))?;
    let ts = &model.ts;
    let target = || -> Result<StateSet, IngestError> {
        if let Some(set) = model.labels.get(arg) {
            return Ok(set.clone());
        }
        let mut set = ts.empty_set();
        for name in arg.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            let s = ts
                .id(name)
                .ok_or_else(|| bad(format!("`{name}` is neither a label nor a state")))?;
            set.insert(s.index());
        }
        Ok(set)
    };
    match kind {
        "safety" => Ok(Objective::Safety(target()?)),
        "reach" | "reachability" => Ok(Objective::Reachability(target()?)),
        "buechi" => Ok(Objective::Buechi(target()?)),
        "parity" => {
            let values = model
                .int_formulas
                .get(arg)
                .ok_or_else(|| bad(format!("no integer formula named {arg}")))?;
            let colours = values
                .iter()
                .map(|&v| u32::try_from(v).map_err(|_| bad(format!("negative colour {v}"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Objective::Parity(colours))
        }
        other => Err(bad(format!(
            "unknown kind `{other}`; expected safety, reach, buechi or parity"
        ))),
    }
}
