//! Seeded random instances shared by the integration suites.
#![allow(dead_code)]

use backresp::model::{Instance, LassoRun, Objective, ObjectiveKind, StateId, TransitionSystem};
use backresp::{find_violating_run, violates};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_system(rng: &mut ChaCha8Rng, n: usize) -> TransitionSystem {
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut edges = Vec::new();
    for s in 0..n {
        let out = rng.gen_range(1..=3.min(n));
        let mut targets: Vec<usize> = (0..n).collect();
        targets.shuffle(rng);
        for &t in &targets[..out] {
            edges.push((StateId::from(s), StateId::from(t)));
        }
    }
    TransitionSystem::new(names, StateId(0), edges).expect("random system")
}

fn random_objective(rng: &mut ChaCha8Rng, ts: &TransitionSystem, kind: ObjectiveKind) -> Objective {
    let n = ts.num_states();
    let mut target = ts.empty_set();
    for s in 0..n {
        if rng.gen_bool(0.3) {
            target.insert(s);
        }
    }
    match kind {
        ObjectiveKind::Safety => Objective::Safety(target),
        ObjectiveKind::Reachability => Objective::Reachability(target),
        ObjectiveKind::Buechi => Objective::Buechi(target),
        ObjectiveKind::Parity => Objective::Parity((0..n).map(|_| rng.gen_range(0..5)).collect()),
    }
}

/// Random walk from the initial state until a state repeats.
fn random_lasso(rng: &mut ChaCha8Rng, ts: &TransitionSystem) -> LassoRun {
    let mut path = vec![ts.initial()];
    loop {
        let last = *path.last().unwrap();
        let next = *ts.successors(last).choose(rng).unwrap();
        if let Some(p) = path.iter().position(|&s| s == next) {
            let cycle = path.split_off(p);
            return LassoRun::new(path, cycle);
        }
        path.push(next);
    }
}

/// A system with `min_states..=max_states` states, an objective of `kind`
/// and a violating run. Retries until a violation exists.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    min_states: usize,
    max_states: usize,
    kind: ObjectiveKind,
) -> Instance {
    loop {
        let n = rng.gen_range(min_states..=max_states);
        let ts = random_system(rng, n);
        let objective = random_objective(rng, &ts, kind);
        let mut run = None;
        for _ in 0..20 {
            let cand = random_lasso(rng, &ts);
            if violates(&ts, &objective, &cand) {
                run = Some(cand);
                break;
            }
        }
        let run = match run {
            Some(r) => r,
            None => match find_violating_run(&ts, &objective) {
                Ok(r) => r,
                Err(_) => continue,
            },
        };
        return Instance { ts, objective, run };
    }
}

pub fn instances(seed: u64, count: usize, max_states: usize, kind: ObjectiveKind) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_instance(&mut rng, 2, max_states, kind))
        .collect()
}
