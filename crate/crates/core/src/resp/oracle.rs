//! Deliberately naive reference implementation used to cross-check the fast
//! paths. Shares only the solver with them.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{PlayerSet, ReportEntry, RespError, ResponsibilityReport, Stats};
use crate::game::{solve_arena, GameArena, GameError, Mode};
use crate::model::{LassoRun, Objective, StateId, StateSet, TransitionSystem};

pub const ORACLE_CAP: usize = 20;

struct Naive<'a> {
    ts: &'a TransitionSystem,
    objective: &'a Objective,
    run: Option<&'a LassoRun>,
    mode: Mode,
}

impl Naive<'_> {
    fn value(&self, coalition: &StateSet) -> bool {
        let ts = self.ts;
        let n = ts.num_states();
        let mut on_run = vec![false; n];
        let mut run_succ: Vec<Option<StateId>> = vec![None; n];
        if let (Some(run), true) = (self.run, self.mode != Mode::Forward) {
            let seq: Vec<StateId> = run.states().collect();
            for (k, &s) in seq.iter().enumerate() {
                on_run[s.index()] = true;
                let next = if k + 1 < seq.len() {
                    seq[k + 1]
                } else {
                    seq[run.prefix.len()]
                };
                run_succ[s.index()] = Some(next);
            }
        }
        let mut names = Vec::with_capacity(n);
        let mut edges = Vec::new();
        for s in ts.states() {
            names.push(ts.name(s).to_string());
            let keep_all = coalition.contains(s.index()) || run_succ[s.index()].is_none();
            if keep_all {
                for &t in ts.successors(s) {
                    edges.push((s, t));
                }
            } else if let Some(t) = run_succ[s.index()] {
                edges.push((s, t));
            }
        }
        let engraved =
            TransitionSystem::new(names, ts.initial(), edges).expect("engraving keeps validity");
        let mut sat = StateSet::with_capacity(n);
        for s in ts.states() {
            let i = s.index();
            let owned = coalition.contains(i) || (self.mode == Mode::Optimistic && !on_run[i]);
            if owned {
                sat.insert(i);
            }
        }
        let arena = GameArena::from_system(&engraved, sat);
        solve_arena(&arena, self.objective)
            .sat_wins
            .contains(ts.initial().index())
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

fn setup<'a>(
    ts: &'a TransitionSystem,
    objective: &'a Objective,
    run: Option<&'a LassoRun>,
    mode: Mode,
    players: &PlayerSet,
) -> Result<Naive<'a>, RespError> {
    if players.len() > ORACLE_CAP {
        return Err(RespError::CapExceeded {
            players: players.len(),
            cap: ORACLE_CAP,
        });
    }
    objective.check(ts).map_err(GameError::from)?;
    if mode != Mode::Forward && run.is_none() {
        return Err(GameError::MissingRun(mode).into());
    }
    Ok(Naive {
        ts,
        objective,
        run,
        mode,
    })
}

/// Shapley values by the textbook formula, solving two games per term.
pub fn oracle_shapley(
    ts: &TransitionSystem,
    objective: &Objective,
    run: Option<&LassoRun>,
    mode: Mode,
    players: &PlayerSet,
) -> Result<ResponsibilityReport, RespError> {
    let naive = setup(ts, objective, run, mode, players)?;
    let n = players.len();
    let n_fact = factorial(n);
    let mut solved = 0u64;
    let mut entries = Vec::with_capacity(n);
    for p in 0..n {
        let others: Vec<usize> = (0..n).filter(|&q| q != p).collect();
        let mut total = BigRational::zero();
        for mask in 0u64..(1u64 << others.len()) {
            let chosen: Vec<usize> = others
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &q)| q)
                .collect();
            let without = players.flatten(chosen.iter().copied());
            let with = players.flatten(chosen.iter().copied().chain([p]));
            solved += 2;
            let gain = i32::from(naive.value(&with)) - i32::from(naive.value(&without));
            if gain != 0 {
                let k = chosen.len();
                let weight = BigRational::new(
                    BigInt::from(factorial(k) * factorial(n - k - 1)),
                    BigInt::from(n_fact.clone()),
                );
                total += weight * BigRational::from_integer(BigInt::from(gain));
            }
        }
        let player = players.get(p);
        entries.push(ReportEntry {
            name: player.name.clone(),
            members: player.members.clone(),
            value: total,
        });
    }
    Ok(ResponsibilityReport {
        mode,
        kind: players.kind(),
        entries,
        stats: Stats {
            games_solved: solved,
            memo_hits: 0,
        },
    })
}

/// Every inclusion-minimal winning coalition, as sorted player indices.
pub fn oracle_minimal_winning(
    ts: &TransitionSystem,
    objective: &Objective,
    run: Option<&LassoRun>,
    mode: Mode,
    players: &PlayerSet,
) -> Result<Vec<Vec<usize>>, RespError> {
    let naive = setup(ts, objective, run, mode, players)?;
    let n = players.len();
    let wins: Vec<bool> = (0u64..(1u64 << n))
        .map(|m| naive.value(&players.flatten_mask(m)))
        .collect();
    let mut out = Vec::new();
    for m in 0u64..(1u64 << n) {
        if !wins[m as usize] {
            continue;
        }
        let minimal = (0..n)
            .filter(|&i| m >> i & 1 == 1)
            .all(|i| !wins[(m & !(1u64 << i)) as usize]);
        if minimal {
            out.push((0..n).filter(|&i| m >> i & 1 == 1).collect());
        }
    }
    Ok(out)
}
