//! Deterministic search for a simple lasso run that violates an objective.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{cycle_through, on_cycle, reachable, shortest_path};
use crate::model::{LassoRun, Objective, StateId, StateSet, TransitionSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FindRunError {
    #[error("every run satisfies the objective; nothing to explain")]
    NoViolation,
}

/// Finds a violating simple lasso, searching successors in index order.
pub fn find_violating_run(
    ts: &TransitionSystem,
    obj: &Objective,
) -> Result<LassoRun, FindRunError> {
    match obj {
        Objective::Safety(f) => safety_run(ts, f),
        Objective::Reachability(f) => {
            if f.contains(ts.initial().index()) {
                return Err(FindRunError::NoViolation);
            }
            let avoid = complement(ts, f);
            let start = reachable(ts, [ts.initial()], Some(&avoid));
            let mut candidates = on_cycle(ts, &avoid);
            candidates.intersect_with(&start);
            let w = candidates.ones().next().ok_or(FindRunError::NoViolation)?;
            lasso_via_cycle(ts, StateId::from(w), &avoid, Some(&avoid))
        }
        Objective::Buechi(f) => {
            let avoid = complement(ts, f);
            let start = reachable(ts, [ts.initial()], None);
            let mut candidates = on_cycle(ts, &avoid);
            candidates.intersect_with(&start);
            let w = candidates.ones().next().ok_or(FindRunError::NoViolation)?;
            lasso_via_cycle(ts, StateId::from(w), &avoid, None)
        }
        Objective::Parity(colours) => {
            let start = reachable(ts, [ts.initial()], None);
            let mut cache: HashMap<u32, StateSet> = HashMap::new();
            for w in start.ones() {
                let c = colours[w];
                if c % 2 == 0 {
                    continue;
                }
                let allowed = cache
                    .entry(c)
                    .or_insert_with(|| {
                        let mut a = ts.empty_set();
                        for (i, &ci) in colours.iter().enumerate() {
                            if ci <= c {
                                a.insert(i);
                            }
                        }
                        a
                    })
                    .clone();
                if on_cycle(ts, &allowed).contains(w) {
                    return lasso_via_cycle(ts, StateId::from(w), &allowed, None);
                }
            }
            Err(FindRunError::NoViolation)
        }
    }
}

fn complement(ts: &TransitionSystem, f: &StateSet) -> StateSet {
    let mut c = ts.full_set();
    c.difference_with(f);
    c
}

/// Shortest path into the target, then the lowest-successor walk until a
/// state repeats; the first repeat fixes the loop.
fn safety_run(ts: &TransitionSystem, f: &StateSet) -> Result<LassoRun, FindRunError> {
    let path = shortest_path(ts, ts.initial(), None, |s| f.contains(s.index()))
        .ok_or(FindRunError::NoViolation)?;
    let mut pos: HashMap<StateId, usize> = path.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut seq = path;
    loop {
        let next = ts.successors(*seq.last().expect("non-empty path"))[0];
        if let Some(&p) = pos.get(&next) {
            let cycle = seq.split_off(p);
            return Ok(LassoRun::new(seq, cycle));
        }
        pos.insert(next, seq.len());
        seq.push(next);
    }
}

/// Loop = a cycle through `w` inside `cycle_allowed`, rotated to start where a
/// shortest path from the initial state first touches it.
fn lasso_via_cycle(
    ts: &TransitionSystem,
    w: StateId,
    cycle_allowed: &StateSet,
    prefix_allowed: Option<&StateSet>,
) -> Result<LassoRun, FindRunError> {
    let cycle = cycle_through(ts, w, cycle_allowed).ok_or(FindRunError::NoViolation)?;
    let on = ts.set_of(cycle.iter().copied());
    let mut path = shortest_path(ts, ts.initial(), prefix_allowed, |s| on.contains(s.index()))
        .ok_or(FindRunError::NoViolation)?;
    let entry = path.pop().expect("path ends in cycle");
    let k = cycle
        .iter()
        .position(|&s| s == entry)
        .expect("entry on cycle");
    let mut rotated = cycle[k..].to_vec();
    rotated.extend_from_slice(&cycle[..k]);
    Ok(LassoRun::new(path, rotated))
}
