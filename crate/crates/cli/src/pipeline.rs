//! Input loading and the analyses behind each subcommand.

use std::fs;
use std::path::Path;

use backresp::ingest::{
    load_model, parse_groups, parse_objective, resolve_grouping, GroupingSpec, Groups, IngestError,
    LoadedModel,
};
use backresp::model::{LassoRun, Objective, RunIndex, StateSet};
use backresp::refine::RefineError;
use backresp::resp::{prune_blocks, prune_dummies, PlayerKind, PlayerSet, RespError};
use backresp::{find_violating_run, violates, Mode, Setting};
use thiserror::Error;

use crate::args::InputArgs;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Ingest { path: String, source: IngestError },
    #[error("{0}")]
    Input(String),
    /// The input is fine but the analysis hit a cap, budget or timeout.
    #[error("{0}")]
    Refused(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Refused(_) => 1,
            CliError::Ingest { source, .. } if source.is_limit() => 1,
            _ => 2,
        }
    }
}

impl From<RespError> for CliError {
    fn from(e: RespError) -> Self {
        match e {
            RespError::CapExceeded { .. } => CliError::Refused(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<RefineError> for CliError {
    fn from(e: RefineError) -> Self {
        match e {
            RefineError::Resp(r) => r.into(),
            other => CliError::Refused(other.to_string()),
        }
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// A loaded model with its objective, run and players settled.
pub struct Prepared {
    pub model: LoadedModel,
    pub objective: Objective,
    pub run: Option<RunIndex>,
    pub groups: Option<Groups>,
    pub mode: Mode,
    pub prune: bool,
}

impl Prepared {
    pub fn load(args: &InputArgs) -> Result<Self, CliError> {
        let path = args.input.display().to_string();
        let at = |source| CliError::Ingest {
            path: path.clone(),
            source,
        };
        let text = read(&args.input)?;
        let model = load_model(&text, args.max_states).map_err(at)?;
        let objective = match (&args.objective, &model.objective) {
            (Some(spec), _) => parse_objective(spec, &model)
                .map_err(|e| CliError::Input(format!("--objective: {e}")))?,
            (None, Some(obj)) => obj.clone(),
            (None, None) => {
                return Err(CliError::Input(format!(
                    "{path}: no objective; pass --objective"
                )))
            }
        };
        let ts = &model.ts;
        let run = if let Some(text) = &args.run {
            Some(parse_run(ts, text).map_err(|e| CliError::Input(format!("--run: {e}")))?)
        } else if args.find_run {
            Some(find_violating_run(ts, &objective).map_err(|e| CliError::Input(e.to_string()))?)
        } else {
            model.run.clone()
        };
        let run = match run {
            Some(run) => {
                let index = RunIndex::new(ts, &run)
                    .map_err(|e| CliError::Input(format!("{path}: run: {e}")))?;
                if !violates(ts, &objective, &run) {
                    return Err(CliError::Input(format!(
                        "{path}: run {} satisfies the objective; nothing to explain",
                        run.display(ts)
                    )));
                }
                Some(index)
            }
            None if args.mode == Mode::Forward => None,
            None => {
                return Err(CliError::Input(format!(
                    "{path}: no run; pass --run or --find-run"
                )))
            }
        };
        let spec = if let Some(file) = &args.groups {
            Some(GroupingSpec::Explicit(parse_groups(&read(file)?).map_err(
                |source| CliError::Ingest {
                    path: file.display().to_string(),
                    source,
                },
            )?))
        } else if args.group_by_module {
            Some(GroupingSpec::ByModule)
        } else {
            args.group_by_label.clone().map(GroupingSpec::ByLabel)
        };
        let groups = match spec {
            Some(spec) => Some(resolve_grouping(&spec, &model).map_err(at)?),
            None if args.no_groups => None,
            None => model.groups.clone(),
        };
        Ok(Prepared {
            model,
            objective,
            run,
            groups,
            mode: args.mode,
            prune: !args.no_prune,
        })
    }

    pub fn setting(&self) -> Setting<'_> {
        Setting::new(
            &self.model.ts,
            &self.objective,
            self.run.as_ref(),
            self.mode,
        )
        .expect("objective checked and run present outside forward mode")
    }

    /// Every player, before pruning.
    pub fn all_players(&self) -> PlayerSet {
        match &self.groups {
            Some(g) => PlayerSet::blocks(&self.model.ts, g.clone()),
            None => PlayerSet::all_states(&self.model.ts),
        }
    }

    /// Players entering the analysis.
    pub fn players(&self) -> PlayerSet {
        let all = self.all_players();
        if !self.prune {
            return all;
        }
        let setting = self.setting();
        match all.kind() {
            PlayerKind::States => prune_dummies(&setting),
            PlayerKind::Blocks => prune_blocks(&setting, &all),
        }
    }

    /// Why every value is 0, when the game is decided without any player.
    pub fn degenerate_note(&self) -> Option<&'static str> {
        let setting = self.setting();
        let ts = &self.model.ts;
        if !setting.value(&ts.full_set()) {
            Some("objective unsatisfiable; all responsibilities 0")
        } else if setting.value(&ts.empty_set()) {
            Some("objective won without any player; all responsibilities 0")
        } else {
            None
        }
    }
}

/// `s0 s1 (s2 s3)`: prefix states, then the loop in parentheses. A trailing
/// `^w` is accepted.
pub fn parse_run(ts: &backresp::TransitionSystem, text: &str) -> Result<LassoRun, String> {
    let text = text.trim().trim_end_matches("^w");
    let open = text.find('(').ok_or("expected the loop in parentheses")?;
    let close = text.rfind(')').ok_or("missing `)`")?;
    if close < open || !text[close + 1..].trim().is_empty() {
        return Err("the loop must come last".into());
    }
    let names = |s: &str| -> Result<Vec<_>, String> {
        s.split_whitespace()
            .filter(|n| !n.is_empty())
            .map(|n| ts.id(n).ok_or_else(|| format!("unknown state {n}")))
            .collect()
    };
    Ok(LassoRun::new(
        names(&text[..open])?,
        names(&text[open + 1..close])?,
    ))
}

/// States of every player in `names`.
pub fn member_states(
    players: &PlayerSet,
    ts: &backresp::TransitionSystem,
    names: &[&str],
) -> StateSet {
    let mut out = ts.empty_set();
    for p in players.iter().filter(|p| names.contains(&p.name.as_str())) {
        p.members.iter().for_each(|s| out.insert(s.index()));
    }
    out
}
