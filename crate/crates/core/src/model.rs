//! Transition systems, objectives and lasso-shaped runs.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Dense set of states, indexed by [`StateId`].
pub type StateSet = FixedBitSet;

/// Dense state index. Names live in the owning [`TransitionSystem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for StateId {
    fn from(i: usize) -> Self {
        StateId(u32::try_from(i).expect("state index exceeds u32"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("model has no states")]
    Empty,
    #[error("duplicate state name {0}")]
    DuplicateName(String),
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("transition endpoint {0} out of range")]
    EndpointOutOfRange(usize),
    #[error("deadlocked states (no successor): {}", .0.join(", "))]
    Deadlock(Vec<String>),
    #[error("objective refers to state index {0} out of range")]
    ObjectiveOutOfRange(usize),
    #[error("parity colouring has {found} entries, expected {expected}")]
    ColouringSize { found: usize, expected: usize },
}

/// Finite directed graph with one initial state. Every state has at least one
/// successor; successor lists are sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSystem {
    names: Vec<String>,
    by_name: HashMap<String, StateId>,
    initial: StateId,
    succ: Vec<Vec<StateId>>,
    pred: Vec<Vec<StateId>>,
}

impl TransitionSystem {
    pub fn new(
        names: Vec<String>,
        initial: StateId,
        edges: impl IntoIterator<Item = (StateId, StateId)>,
    ) -> Result<Self, ModelError> {
        let n = names.len();
        if n == 0 {
            return Err(ModelError::Empty);
        }
        if initial.index() >= n {
            return Err(ModelError::EndpointOutOfRange(initial.index()));
        }
        let mut by_name = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if by_name.insert(name.clone(), StateId::from(i)).is_some() {
                return Err(ModelError::DuplicateName(name.clone()));
            }
        }
        let mut succ = vec![Vec::new(); n];
        for (a, b) in edges {
            for s in [a, b] {
                if s.index() >= n {
                    return Err(ModelError::EndpointOutOfRange(s.index()));
                }
            }
            succ[a.index()].push(b);
        }
        for list in &mut succ {
            list.sort_unstable();
            list.dedup();
        }
        let dead: Vec<String> = (0..n)
            .filter(|&i| succ[i].is_empty())
            .map(|i| names[i].clone())
            .collect();
        if !dead.is_empty() {
            return Err(ModelError::Deadlock(dead));
        }
        let mut pred = vec![Vec::new(); n];
        for (s, list) in succ.iter().enumerate() {
            for t in list {
                pred[t.index()].push(StateId::from(s));
            }
        }
        Ok(TransitionSystem {
            names,
            by_name,
            initial,
            succ,
            pred,
        })
    }

    /// Convenience constructor from names; the first name in `edges` order does
    /// not matter, state numbering follows `states`.
    pub fn from_names(
        states: &[&str],
        initial: &str,
        edges: &[(&str, &str)],
    ) -> Result<Self, ModelError> {
        let names: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let lookup = |name: &str| {
            states
                .iter()
                .position(|s| *s == name)
                .map(StateId::from)
                .ok_or_else(|| ModelError::UnknownState(name.to_string()))
        };
        let init = lookup(initial)?;
        let edges = edges
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, ModelError>>()?;
        TransitionSystem::new(names, init, edges)
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.names.len()).map(StateId::from)
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<StateId> {
        self.by_name.get(name).copied()
    }

    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.succ[s.index()]
    }

    pub fn predecessors(&self, s: StateId) -> &[StateId] {
        &self.pred[s.index()]
    }

    pub fn edges(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, l)| l.iter().map(move |&t| (StateId::from(s), t)))
    }

    pub fn has_edge(&self, s: StateId, t: StateId) -> bool {
        self.succ[s.index()].binary_search(&t).is_ok()
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::with_capacity(self.num_states())
    }

    pub fn full_set(&self) -> StateSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_of(&self, states: impl IntoIterator<Item = StateId>) -> StateSet {
        let mut set = self.empty_set();
        for s in states {
            set.insert(s.index());
        }
        set
    }

    /// Resolves state names into a set; the first unknown name is an error.
    pub fn set_of_names<'a>(
        &self,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<StateSet, ModelError> {
        let mut set = self.empty_set();
        for n in names {
            let id = self
                .id(n)
                .ok_or_else(|| ModelError::UnknownState(n.to_string()))?;
            set.insert(id.index());
        }
        Ok(set)
    }

    pub fn format_set(&self, set: &StateSet) -> String {
        let names: Vec<&str> = set.ones().map(|i| self.names[i].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    Safety,
    Reachability,
    Buechi,
    Parity,
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObjectiveKind::Safety => "safety",
            ObjectiveKind::Reachability => "reachability",
            ObjectiveKind::Buechi => "buechi",
            ObjectiveKind::Parity => "parity",
        })
    }
}

/// Winning condition for the satisfying player.
///
/// Safety never visits the target, reachability eventually does, Büchi visits
/// it infinitely often. Parity wins when the largest colour seen infinitely
/// often is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    Safety(StateSet),
    Reachability(StateSet),
    Buechi(StateSet),
    Parity(Vec<u32>),
}

impl Objective {
    pub fn kind(&self) -> ObjectiveKind {
        match self {
            Objective::Safety(_) => ObjectiveKind::Safety,
            Objective::Reachability(_) => ObjectiveKind::Reachability,
            Objective::Buechi(_) => ObjectiveKind::Buechi,
            Objective::Parity(_) => ObjectiveKind::Parity,
        }
    }

    pub fn target(&self) -> Option<&StateSet> {
        match self {
            Objective::Safety(f) | Objective::Reachability(f) | Objective::Buechi(f) => Some(f),
            Objective::Parity(_) => None,
        }
    }

    pub fn colours(&self) -> Option<&[u32]> {
        match self {
            Objective::Parity(c) => Some(c),
            _ => None,
        }
    }

    /// Checks that the payload ranges over exactly the states of `ts`.
    pub fn check(&self, ts: &TransitionSystem) -> Result<(), ModelError> {
        let n = ts.num_states();
        match self {
            Objective::Parity(c) if c.len() != n => Err(ModelError::ColouringSize {
                found: c.len(),
                expected: n,
            }),
            Objective::Parity(_) => Ok(()),
            _ => {
                let f = self.target().expect("target objective");
                match f.ones().find(|&i| i >= n) {
                    Some(i) => Err(ModelError::ObjectiveOutOfRange(i)),
                    None => Ok(()),
                }
            }
        }
    }

    /// Resizes the target set to the system's state count, so set operations
    /// line up even when a caller built it with a smaller capacity.
    pub fn normalised(mut self, ts: &TransitionSystem) -> Self {
        if let Objective::Safety(f) | Objective::Reachability(f) | Objective::Buechi(f) = &mut self
        {
            f.grow(ts.num_states());
        }
        self
    }
}

/// A lasso `prefix · cycle^ω`. The cycle is written `loop` in documents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoRun {
    pub prefix: Vec<StateId>,
    pub cycle: Vec<StateId>,
}

impl LassoRun {
    pub fn new(prefix: Vec<StateId>, cycle: Vec<StateId>) -> Self {
        LassoRun { prefix, cycle }
    }

    pub fn from_names(
        ts: &TransitionSystem,
        prefix: &[&str],
        cycle: &[&str],
    ) -> Result<Self, ModelError> {
        let resolve = |names: &[&str]| {
            names
                .iter()
                .map(|n| {
                    ts.id(n)
                        .ok_or_else(|| ModelError::UnknownState(n.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(LassoRun::new(resolve(prefix)?, resolve(cycle)?))
    }

    /// Prefix followed by one traversal of the cycle.
    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.prefix.iter().chain(self.cycle.iter()).copied()
    }

    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn display(&self, ts: &TransitionSystem) -> String {
        let join = |v: &[StateId]| v.iter().map(|&s| ts.name(s)).collect::<Vec<_>>().join(" ");
        if self.prefix.is_empty() {
            format!("({})^w", join(&self.cycle))
        } else {
            format!("{} ({})^w", join(&self.prefix), join(&self.cycle))
        }
    }
}

/// A system together with an objective and a run violating it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub ts: TransitionSystem,
    pub objective: Objective,
    pub run: LassoRun,
}

impl Instance {
    pub fn run_index(&self) -> Result<RunIndex, RunDiagnostic> {
        RunIndex::new(&self.ts, &self.run)
    }
}

/// First violated run invariant, with the offending position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunDiagnostic {
    #[error("loop is empty")]
    EmptyLoop,
    #[error("position {position}: state index {index} out of range")]
    OutOfRange { position: usize, index: usize },
    #[error("run starts at {found}, expected the initial state {initial}")]
    WrongStart { found: String, initial: String },
    #[error("prefix repeats {0}")]
    PrefixRepeat(String),
    #[error("loop repeats {0}")]
    LoopRepeat(String),
    #[error("{0} occurs in both prefix and loop")]
    PrefixLoopOverlap(String),
    #[error("position {position}: no transition {from} -> {to}")]
    MissingTransition {
        position: usize,
        from: String,
        to: String,
    },
}

/// Checks every run invariant against `ts`, reporting the first failure.
pub fn validate_run(ts: &TransitionSystem, run: &LassoRun) -> Result<(), RunDiagnostic> {
    if run.cycle.is_empty() {
        return Err(RunDiagnostic::EmptyLoop);
    }
    let n = ts.num_states();
    if let Some((position, s)) = run.states().enumerate().find(|(_, s)| s.index() >= n) {
        return Err(RunDiagnostic::OutOfRange {
            position,
            index: s.index(),
        });
    }
    let first = run.states().next().expect("non-empty");
    if first != ts.initial() {
        return Err(RunDiagnostic::WrongStart {
            found: ts.name(first).to_string(),
            initial: ts.name(ts.initial()).to_string(),
        });
    }
    let mut seen = ts.empty_set();
    for &s in &run.prefix {
        if seen.put(s.index()) {
            return Err(RunDiagnostic::PrefixRepeat(ts.name(s).to_string()));
        }
    }
    let mut in_loop = ts.empty_set();
    for &s in &run.cycle {
        if in_loop.put(s.index()) {
            return Err(RunDiagnostic::LoopRepeat(ts.name(s).to_string()));
        }
    }
    if let Some(s) = run.cycle.iter().find(|s| seen.contains(s.index())) {
        return Err(RunDiagnostic::PrefixLoopOverlap(ts.name(*s).to_string()));
    }
    let seq: Vec<StateId> = run.states().chain(std::iter::once(run.cycle[0])).collect();
    for (position, w) in seq.windows(2).enumerate() {
        if !ts.has_edge(w[0], w[1]) {
            return Err(RunDiagnostic::MissingTransition {
                position,
                from: ts.name(w[0]).to_string(),
                to: ts.name(w[1]).to_string(),
            });
        }
    }
    Ok(())
}

/// Position data for a validated run: index along the run and the unique
/// successor of every run state.
#[derive(Clone, Debug)]
pub struct RunIndex {
    order: Vec<StateId>,
    prefix_len: usize,
    position: Vec<Option<u32>>,
    on_run: StateSet,
    run: LassoRun,
}

impl RunIndex {
    pub fn new(ts: &TransitionSystem, run: &LassoRun) -> Result<Self, RunDiagnostic> {
        validate_run(ts, run)?;
        let order: Vec<StateId> = run.states().collect();
        let mut position = vec![None; ts.num_states()];
        for (i, s) in order.iter().enumerate() {
            position[s.index()] = Some(i as u32);
        }
        Ok(RunIndex {
            on_run: ts.set_of(order.iter().copied()),
            order,
            prefix_len: run.prefix.len(),
            position,
            run: run.clone(),
        })
    }

    pub fn run(&self) -> &LassoRun {
        &self.run
    }

    /// Run states: prefix positions first, then loop positions.
    pub fn states(&self) -> &[StateId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.on_run.contains(s.index())
    }

    pub fn on_run(&self) -> &StateSet {
        &self.on_run
    }

    pub fn position(&self, s: StateId) -> Option<usize> {
        self.position
            .get(s.index())
            .copied()
            .flatten()
            .map(|p| p as usize)
    }

    pub fn is_loop_position(&self, p: usize) -> bool {
        p >= self.prefix_len
    }

    pub fn at(&self, p: usize) -> StateId {
        self.order[p]
    }

    /// Successor along the run, `None` off the run.
    pub fn successor(&self, s: StateId) -> Option<StateId> {
        let p = self.position(s)?;
        Some(if p + 1 < self.order.len() {
            self.order[p + 1]
        } else {
            self.order[self.prefix_len]
        })
    }
}

/// True iff the infinite word `prefix · cycle^ω` does not satisfy `obj`.
pub fn violates(ts: &TransitionSystem, obj: &Objective, run: &LassoRun) -> bool {
    let _ = ts;
    match obj {
        Objective::Safety(f) => run.states().any(|s| f.contains(s.index())),
        Objective::Reachability(f) => !run.states().any(|s| f.contains(s.index())),
        Objective::Buechi(f) => !run.cycle.iter().any(|s| f.contains(s.index())),
        Objective::Parity(c) => {
            let top = run.cycle.iter().map(|s| c[s.index()]).max().unwrap_or(0);
            top % 2 == 1
        }
    }
}
