use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{IngestError, LoadedModel};
use crate::model::{LassoRun, Objective, StateId, StateSet, TransitionSystem};

/// Explicit-graph document. Field names are the on-disk schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitModelDoc {
    pub states: Vec<String>,
    pub initial: String,
    pub transitions: Vec<(String, String)>,
    pub objective: ObjectiveDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<IndexMap<String, Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObjectiveDoc {
    Safety { target: Vec<String> },
    Reachability { target: Vec<String> },
    Buechi { target: Vec<String> },
    Parity { colours: IndexMap<String, u32> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunDoc {
    pub prefix: Vec<String>,
    #[serde(rename = "loop")]
    pub cycle: Vec<String>,
}

pub fn parse_explicit(text: &str) -> Result<ExplicitModelDoc, IngestError> {
    serde_json::from_str(text).map_err(super::json_error)
}

/// Pretty-printed document; parsing it back gives an equal document.
pub fn serialize_explicit(doc: &ExplicitModelDoc) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("document serialises");
    out.push('\n');
    out
}

fn resolve(ts: &TransitionSystem, name: &str) -> Result<StateId, IngestError> {
    ts.id(name)
        .ok_or_else(|| IngestError::UnknownState(name.to_string()))
}

fn resolve_set(ts: &TransitionSystem, names: &[String]) -> Result<StateSet, IngestError> {
    let mut set = ts.empty_set();
    for n in names {
        set.insert(resolve(ts, n)?.index());
    }
    Ok(set)
}

impl ExplicitModelDoc {
    /// Resolves every name and checks groups and colours against the states.
    pub fn into_model(&self) -> Result<LoadedModel, IngestError> {
        let mut ids = IndexMap::with_capacity(self.states.len());
        for (i, s) in self.states.iter().enumerate() {
            if ids.insert(s.as_str(), StateId::from(i)).is_some() {
                return Err(IngestError::Model(crate::model::ModelError::DuplicateName(
                    s.clone(),
                )));
            }
        }
        let lookup = |name: &str| {
            ids.get(name)
                .copied()
                .ok_or_else(|| IngestError::UnknownState(name.to_string()))
        };
        let initial = lookup(&self.initial)?;
        let edges = self
            .transitions
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, IngestError>>()?;
        let ts = TransitionSystem::new(self.states.clone(), initial, edges)?;
        let objective = match &self.objective {
            ObjectiveDoc::Safety { target } => Objective::Safety(resolve_set(&ts, target)?),
            ObjectiveDoc::Reachability { target } => {
                Objective::Reachability(resolve_set(&ts, target)?)
            }
            ObjectiveDoc::Buechi { target } => Objective::Buechi(resolve_set(&ts, target)?),
            ObjectiveDoc::Parity { colours } => {
                let mut c = vec![None; ts.num_states()];
                for (name, &colour) in colours {
                    c[resolve(&ts, name)?.index()] = Some(colour);
                }
                let missing: Vec<String> = ts
                    .states()
                    .filter(|s| c[s.index()].is_none())
                    .map(|s| ts.name(s).to_string())
                    .collect();
                if !missing.is_empty() {
                    return Err(IngestError::Colours(missing));
                }
                Objective::Parity(c.into_iter().map(|x| x.expect("checked")).collect())
            }
        };
        let run = match &self.run {
            Some(r) => {
                let ids = |names: &[String]| {
                    names
                        .iter()
                        .map(|n| resolve(&ts, n))
                        .collect::<Result<Vec<_>, _>>()
                };
                Some(LassoRun::new(ids(&r.prefix)?, ids(&r.cycle)?))
            }
            None => None,
        };
        let groups = match &self.groups {
            Some(g) => Some(super::check_partition(&ts, g)?),
            None => None,
        };
        Ok(LoadedModel {
            ts,
            objective: Some(objective),
            run,
            groups,
            labels: IndexMap::new(),
            owners: None,
            int_formulas: IndexMap::new(),
        })
    }

    /// Document describing `ts` with `objective` and optional run and groups.
    pub fn from_model(
        ts: &TransitionSystem,
        objective: &Objective,
        run: Option<&LassoRun>,
        groups: Option<&[(String, Vec<StateId>)]>,
    ) -> Self {
        let names = |set: &StateSet| -> Vec<String> {
            set.ones()
                .map(|i| ts.name(StateId::from(i)).to_string())
                .collect()
        };
        let list =
            |v: &[StateId]| -> Vec<String> { v.iter().map(|&s| ts.name(s).to_string()).collect() };
        let objective = match objective {
            Objective::Safety(f) => ObjectiveDoc::Safety { target: names(f) },
            Objective::Reachability(f) => ObjectiveDoc::Reachability { target: names(f) },
            Objective::Buechi(f) => ObjectiveDoc::Buechi { target: names(f) },
            Objective::Parity(c) => ObjectiveDoc::Parity {
                colours: ts
                    .states()
                    .map(|s| (ts.name(s).to_string(), c[s.index()]))
                    .collect(),
            },
        };
        ExplicitModelDoc {
            states: ts.names().to_vec(),
            initial: ts.name(ts.initial()).to_string(),
            transitions: ts
                .edges()
                .map(|(a, b)| (ts.name(a).to_string(), ts.name(b).to_string()))
                .collect(),
            objective,
            run: run.map(|r| RunDoc {
                prefix: list(&r.prefix),
                cycle: list(&r.cycle),
            }),
            groups: groups.map(|g| {
                g.iter()
                    .map(|(name, members)| (name.clone(), list(members)))
                    .collect()
            }),
        }
    }
}
