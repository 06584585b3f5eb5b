//! Acceptance criteria. Every test writes one `criterion N PASS|FAIL` line to
//! stderr (uncaptured) and then asserts its verdict.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use backresp::fixtures;
use backresp::generate::{generate, GeneratorSpec};
use backresp::model::{Instance, ObjectiveKind, StateId};
use backresp::refine::{
    refine_loop, responsibility_via_refinement, HeuristicsConfig, RefineHeuristic, RefineLimits,
    SelectHeuristic,
};
use backresp::resp::{
    oracle_minimal_winning, oracle_shapley, positivity_reach_opt, positivity_set_buechi_opt,
    prune_blocks, prune_dummies, shapley_exact, BuechiOptions, PayoffGame, PlayerSet, RespError,
    ResponsibilityReport, DEFAULT_SHAPLEY_CAP,
};
use backresp::{Mode, Setting};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Wall-clock budget for the figure-sized checks.
const FIGURE_BUDGET: Duration = Duration::from_secs(1);
/// Wall-clock budget for the positivity equivalence suite.
const SUITE_BUDGET: Duration = Duration::from_secs(300);
/// Wall-clock budget for refinement on the large clouds model.
const CLOUDS_BUDGET: Duration = Duration::from_secs(60);
const CLOUDS_SIZE: usize = 10_000;
const STRESS_SIZE: usize = 50;
/// Random instances per objective kind; each is analysed in all three modes.
const POSITIVITY_INSTANCES: usize = 500;
const POSITIVITY_MAX_STATES: usize = 9;
const VALUE_INSTANCES: usize = 70;
const VALUE_MAX_STATES: usize = 8;

const KINDS: [ObjectiveKind; 4] = [
    ObjectiveKind::Safety,
    ObjectiveKind::Reachability,
    ObjectiveKind::Buechi,
    ObjectiveKind::Parity,
];
const MODES: [Mode; 3] = [Mode::Optimistic, Mode::Pessimistic, Mode::Forward];

fn verdict(id: u32, title: &str, pass: bool, detail: &str) {
    let line = format!(
        "criterion {id} {}: {title} [{detail}]",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = writeln!(std::io::stderr(), "{line}");
    assert!(pass, "{line}");
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn values(report: &ResponsibilityReport) -> Vec<BigRational> {
    report.entries.iter().map(|e| e.value.clone()).collect()
}

fn show(v: &[BigRational]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn state_values(inst: &Instance, mode: Mode) -> Vec<BigRational> {
    let run = inst.run_index().unwrap();
    let s = Setting::new(&inst.ts, &inst.objective, Some(&run), mode).unwrap();
    let pg = PayoffGame::new(s, prune_dummies(&s));
    let report = shapley_exact(&pg, DEFAULT_SHAPLEY_CAP).unwrap();
    values(&report.padded(&PlayerSet::all_states(&inst.ts)))
}

/// Heuristic combination number `i`, cycling through every pairing.
fn config(i: usize) -> HeuristicsConfig {
    let selects = SelectHeuristic::ALL;
    let refines = RefineHeuristic::ALL;
    HeuristicsConfig {
        initial_blocks: 1 + i % 3,
        select: selects[i % selects.len()],
        refine: refines[(i / selects.len()) % refines.len()],
        seed: i as u64,
    }
}

struct Case {
    inst: Instance,
    kind: ObjectiveKind,
    mode: Mode,
    oracle: ResponsibilityReport,
}

impl Case {
    fn positive(&self) -> BTreeSet<String> {
        self.oracle
            .positive()
            .into_iter()
            .map(String::from)
            .collect()
    }
}

fn build_cases(count: usize, max_states: usize, seed: u64) -> Vec<Case> {
    let jobs: Vec<(Instance, ObjectiveKind, Mode)> = KINDS
        .iter()
        .enumerate()
        .flat_map(|(k, &kind)| {
            common::instances(seed + k as u64, count, max_states, kind)
                .into_iter()
                .flat_map(move |inst| MODES.map(|m| (inst.clone(), kind, m)))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(inst, kind, mode)| {
            let players = PlayerSet::all_states(&inst.ts);
            let oracle =
                oracle_shapley(&inst.ts, &inst.objective, Some(&inst.run), mode, &players).unwrap();
            Case {
                inst,
                kind,
                mode,
                oracle,
            }
        })
        .collect()
}

fn positivity_cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(|| build_cases(POSITIVITY_INSTANCES, POSITIVITY_MAX_STATES, 100))
}

fn value_cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(|| build_cases(VALUE_INSTANCES, VALUE_MAX_STATES, 200))
}

#[test]
fn criterion_1_figure_values() {
    let start = Instant::now();
    let inst = fixtures::fig3();
    let opt = state_values(&inst, Mode::Optimistic);
    let pes = state_values(&inst, Mode::Pessimistic);
    let elapsed = start.elapsed();
    let want_opt = [q(1, 6), q(1, 6), q(2, 3), q(0, 1), q(0, 1), q(0, 1)];
    let want_pes = [q(1, 12), q(1, 12), q(3, 4), q(0, 1), q(1, 12), q(0, 1)];
    verdict(
        1,
        "Büchi example values, exact",
        opt == want_opt && pes == want_pes && elapsed < FIGURE_BUDGET,
        &format!(
            "optimistic ({}), pessimistic ({}), {elapsed:?}",
            show(&opt),
            show(&pes)
        ),
    );
}

#[test]
fn criterion_2_grouping_example() {
    let inst = fixtures::fig5();
    let groups = vec![
        ("s0s1".to_string(), vec![StateId(0), StateId(1)]),
        ("s2".to_string(), vec![StateId(2)]),
        ("s3".to_string(), vec![StateId(3)]),
    ];
    let want = [q(1, 2), q(1, 4), q(1, 4), q(0, 1)];
    let mut pass = false;
    let mut detail = Vec::new();
    for mode in [Mode::Optimistic, Mode::Pessimistic] {
        let individual = state_values(&inst, mode);
        let run = inst.run_index().unwrap();
        let s = Setting::new(&inst.ts, &inst.objective, Some(&run), mode).unwrap();
        let blocks = PlayerSet::blocks(&inst.ts, groups.clone());
        let pg = PayoffGame::new(s, prune_blocks(&s, &blocks));
        let grouped = shapley_exact(&pg, DEFAULT_SHAPLEY_CAP)
            .unwrap()
            .padded(&blocks);
        let block = grouped.value("s0s1").cloned().unwrap();
        pass |= individual == want && block == q(0, 1);
        detail.push(format!(
            "{mode}: individual ({}), block s0s1 {block}",
            show(&individual)
        ));
    }
    verdict(2, "grouping example, exact", pass, &detail.join("; "));
}

#[test]
fn criterion_3_refinement_walkthrough() {
    let start = Instant::now();
    let inst = fixtures::fig8();
    let run = inst.run_index().unwrap();
    let s = Setting::new(&inst.ts, &inst.objective, Some(&run), Mode::Pessimistic).unwrap();
    let pg = PayoffGame::new(s, PlayerSet::all_states(&inst.ts));
    let config = HeuristicsConfig {
        refine: RefineHeuristic::FrontierLowest,
        ..HeuristicsConfig::default()
    };
    let (report, out) =
        responsibility_via_refinement(&pg, &config, RefineLimits::default(), DEFAULT_SHAPLEY_CAP)
            .unwrap();
    let elapsed = start.elapsed();
    let mut failures = Vec::new();

    // partitions: each step splits one more state off the big block
    let splits: Vec<String> = out
        .trace
        .iter()
        .filter_map(|r| r.split.as_ref().map(|x| x.state.clone()))
        .collect();
    if out.iterations != 5 || splits != ["s3", "s6", "s2", "s8"] {
        failures.push(format!("iterations {} splits {splits:?}", out.iterations));
    }
    for (k, record) in out.trace.iter().enumerate() {
        let singles: Vec<&str> = record
            .partition
            .iter()
            .filter(|b| b.members.len() == 1)
            .map(|b| b.members[0].as_str())
            .collect();
        let want: Vec<&str> = ["s3", "s6", "s2", "s8"][..k].to_vec();
        if singles != want || record.partition.len() != k + 1 {
            failures.push(format!("step {} partition {:?}", k + 1, record.partition));
        }
    }
    let want_frontiers: [&[&str]; 4] = [&["s3", "s6", "s8"], &["s6", "s8"], &["s2"], &["s8"]];
    for (k, want) in want_frontiers.iter().enumerate() {
        let record = &out.trace[k];
        let got = record
            .selected
            .and_then(|b| record.frontier_of(b))
            .unwrap_or_default();
        if got != *want {
            failures.push(format!(
                "step {} frontier {got:?}, expected {want:?}",
                k + 1
            ));
        }
    }
    let names: Vec<&str> = out
        .responsible
        .iter()
        .map(|&p| pg.players().get(p).name.as_str())
        .collect();
    if names != ["s2", "s3", "s6", "s8"] {
        failures.push(format!("responsible {names:?}"));
    }
    let got: Vec<BigRational> = ["s2", "s3", "s6", "s8"]
        .iter()
        .map(|n| report.value(n).cloned().unwrap())
        .collect();
    if got != [q(5, 12), q(5, 12), q(1, 12), q(1, 12)] {
        failures.push(format!("values ({})", show(&got)));
    }
    if elapsed >= FIGURE_BUDGET {
        failures.push(format!("took {elapsed:?}"));
    }
    verdict(
        3,
        "refinement walkthrough",
        failures.is_empty(),
        &if failures.is_empty() {
            format!("5 iterations, values ({}), {elapsed:?}", show(&got))
        } else {
            failures.join("; ")
        },
    );
}

#[test]
fn criterion_4_positivity_equivalence() {
    let start = Instant::now();
    let cases = positivity_cases();
    let oracle_time = start.elapsed();
    let results: Vec<(usize, usize, usize, usize)> = cases
        .par_iter()
        .enumerate()
        .map(|(i, case)| {
            let run = case.inst.run_index().unwrap();
            let s =
                Setting::new(&case.inst.ts, &case.inst.objective, Some(&run), case.mode).unwrap();
            let expect = case.positive();
            let names = |set: &backresp::model::StateSet| -> BTreeSet<String> {
                set.ones()
                    .map(|k| case.inst.ts.name(StateId::from(k)).to_string())
                    .collect()
            };
            let mut reach = 0;
            let mut buechi = 0;
            if case.mode == Mode::Optimistic && case.kind == ObjectiveKind::Reachability {
                reach = usize::from(names(&positivity_reach_opt(&s).unwrap()) != expect);
            }
            if case.mode == Mode::Optimistic && case.kind == ObjectiveKind::Buechi {
                let got = positivity_set_buechi_opt(&s, BuechiOptions::default()).unwrap();
                buechi = usize::from(names(&got) != expect);
            }
            let pg = PayoffGame::new(s, prune_dummies(&s));
            let refined = match refine_loop(&pg, &config(i), RefineLimits::default()) {
                Ok(out) => out
                    .responsible
                    .iter()
                    .map(|&p| pg.players().get(p).name.clone())
                    .collect::<BTreeSet<_>>(),
                Err(_) => BTreeSet::new(),
            };
            let refine = usize::from(refined != expect);
            (reach, buechi, refine, 1)
        })
        .collect();
    let sum = |f: fn(&(usize, usize, usize, usize)) -> usize| results.iter().map(f).sum::<usize>();
    let (reach, buechi, refine) = (sum(|r| r.0), sum(|r| r.1), sum(|r| r.2));
    let elapsed = start.elapsed();
    verdict(
        4,
        "positivity equals oracle",
        reach + buechi + refine == 0 && elapsed < SUITE_BUDGET,
        &format!(
            "{POSITIVITY_INSTANCES} instances per kind and mode, <= {POSITIVITY_MAX_STATES} states; \
             disagreements: reachability {reach}, Büchi {buechi}, refinement {refine} of {}; \
             {elapsed:?} ({oracle_time:?} oracle)",
            cases.len()
        ),
    );
}

#[test]
fn criterion_5_value_equivalence() {
    let cases = value_cases();
    let bad: Vec<(usize, usize)> = cases
        .par_iter()
        .enumerate()
        .map(|(i, case)| {
            let expect = values(&case.oracle);
            let direct = state_values(&case.inst, case.mode);
            let run = case.inst.run_index().unwrap();
            let s =
                Setting::new(&case.inst.ts, &case.inst.objective, Some(&run), case.mode).unwrap();
            let pg = PayoffGame::new(s, prune_dummies(&s));
            let refined = responsibility_via_refinement(
                &pg,
                &config(i),
                RefineLimits::default(),
                DEFAULT_SHAPLEY_CAP,
            )
            .map(|(r, _)| values(&r.padded(&PlayerSet::all_states(&case.inst.ts))));
            (
                usize::from(direct != expect),
                usize::from(refined.as_ref() != Ok(&expect)),
            )
        })
        .collect();
    let direct: usize = bad.iter().map(|b| b.0).sum();
    let refined: usize = bad.iter().map(|b| b.1).sum();
    verdict(
        5,
        "values equal oracle, exact",
        direct + refined == 0,
        &format!(
            "{} cases (<= {VALUE_MAX_STATES} states, every kind and mode); \
             mismatches: exact {direct}, via refinement {refined}",
            cases.len()
        ),
    );
}

#[derive(Default)]
struct Violations {
    off_run: usize,
    unequal_reach: usize,
    empty_frontier: usize,
    frontier_without_responsible: usize,
    witnesses_checked: usize,
    not_monotone: usize,
    efficiency: usize,
    fixpoint: usize,
}

impl Violations {
    fn total(&self) -> usize {
        self.off_run
            + self.unequal_reach
            + self.empty_frontier
            + self.frontier_without_responsible
            + self.not_monotone
            + self.efficiency
            + self.fixpoint
    }

    fn add(mut self, o: Violations) -> Violations {
        self.off_run += o.off_run;
        self.unequal_reach += o.unequal_reach;
        self.empty_frontier += o.empty_frontier;
        self.frontier_without_responsible += o.frontier_without_responsible;
        self.witnesses_checked += o.witnesses_checked;
        self.not_monotone += o.not_monotone;
        self.efficiency += o.efficiency;
        self.fixpoint += o.fixpoint;
        self
    }
}

fn check_structure(i: usize, case: &Case) -> Violations {
    let mut v = Violations::default();
    let ts = &case.inst.ts;
    let run = case.inst.run_index().unwrap();
    let positive = case.positive();
    if case.mode == Mode::Optimistic {
        v.off_run = positive
            .iter()
            .filter(|n| !run.contains(ts.id(n).unwrap()))
            .count();
        if case.kind == ObjectiveKind::Reachability {
            let vals: BTreeSet<&BigRational> = case
                .oracle
                .entries
                .iter()
                .filter(|e| e.is_positive())
                .map(|e| &e.value)
                .collect();
            v.unequal_reach = usize::from(vals.len() > 1);
        }
    }
    let s = Setting::new(ts, &case.inst.objective, Some(&run), case.mode).unwrap();
    let all = PayoffGame::new(s, PlayerSet::all_states(ts));
    let full = all.gamma_states(&ts.full_set());
    let none = all.gamma_states(&ts.empty_set());
    let total: BigRational = case.oracle.entries.iter().map(|e| e.value.clone()).sum();
    let expect = BigRational::from_integer(BigInt::from(i32::from(full) - i32::from(none)));
    v.efficiency = usize::from(total != expect);

    let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
    for _ in 0..16 {
        let mut small = ts.empty_set();
        let mut big = ts.empty_set();
        for k in 0..ts.num_states() {
            match rng.gen_range(0..3) {
                0 => {}
                1 => big.insert(k),
                _ => {
                    small.insert(k);
                    big.insert(k);
                }
            }
        }
        if all.gamma_states(&small) && !all.gamma_states(&big) {
            v.not_monotone += 1;
        }
    }

    if case.mode == Mode::Forward {
        return v;
    }
    let pg = PayoffGame::new(s, prune_dummies(&s));
    let Ok(out) = refine_loop(&pg, &config(i), RefineLimits::default()) else {
        v.fixpoint += 1;
        return v;
    };
    let frontier_kinds = matches!(
        case.kind,
        ObjectiveKind::Safety | ObjectiveKind::Reachability
    );
    if frontier_kinds {
        for record in &out.trace {
            for w in &record.witnesses {
                v.witnesses_checked += 1;
                if w.frontier.is_empty() {
                    v.empty_frontier += 1;
                } else if !w.frontier.iter().any(|n| positive.contains(n)) {
                    v.frontier_without_responsible += 1;
                }
            }
        }
    }
    // every singleton witness block is a switching pair at state level
    for (id, w) in &out.witnesses {
        let block = out.partition.get(*id).unwrap();
        if block.members.len() != 1 {
            v.fixpoint += 1;
            continue;
        }
        let mut with = w.coalition.clone();
        with.union_with(&w.block_states);
        if all.gamma_states(&w.coalition) || !all.gamma_states(&with) {
            v.fixpoint += 1;
        }
    }
    v
}

#[test]
fn criterion_6_structural_properties() {
    let cases = positivity_cases();
    let v = cases
        .par_iter()
        .enumerate()
        .map(|(i, case)| check_structure(i, case))
        .reduce(Violations::default, Violations::add);
    verdict(
        6,
        "structural properties hold on the random suites",
        v.total() == 0,
        &format!(
            "{} cases, {} safety/reachability witnesses; violations: optimistic positive off the run {}, \
             unequal optimistic reachability values {}, empty frontier {}, frontier without a \
             responsible state {}, non-monotone payoff {}, efficiency {}, fixpoint not switching {}",
            cases.len(),
            v.witnesses_checked,
            v.off_run,
            v.unequal_reach,
            v.empty_frontier,
            v.frontier_without_responsible,
            v.not_monotone,
            v.efficiency,
            v.fixpoint
        ),
    );
}

#[test]
fn criterion_7_exponential_family() {
    let mut counts = Vec::new();
    for n in 1..=4 {
        let spec = GeneratorSpec::ExpCoalitions { n };
        let inst = generate(&spec)
            .unwrap()
            .into_model()
            .unwrap()
            .instance()
            .unwrap();
        let players = PlayerSet::all_states(&inst.ts);
        let minimal = oracle_minimal_winning(
            &inst.ts,
            &inst.objective,
            Some(&inst.run),
            spec.mode(),
            &players,
        )
        .unwrap();
        counts.push((n, minimal.len()));
    }
    verdict(
        7,
        "2^n minimal winning coalitions",
        counts.iter().all(|&(n, c)| c == 1 << n),
        &format!("(n, count): {counts:?}"),
    );
}

fn iterations(spec: GeneratorSpec, refine: RefineHeuristic, seed: u64) -> (usize, usize) {
    let inst = generate(&spec)
        .unwrap()
        .into_model()
        .unwrap()
        .instance()
        .unwrap();
    let run = inst.run_index().unwrap();
    let s = Setting::new(&inst.ts, &inst.objective, Some(&run), spec.mode()).unwrap();
    let pg = PayoffGame::new(s, prune_dummies(&s));
    let config = HeuristicsConfig {
        refine,
        seed,
        ..HeuristicsConfig::default()
    };
    let out = refine_loop(&pg, &config, RefineLimits::default()).unwrap();
    (out.iterations, out.responsible.len())
}

#[test]
fn criterion_8_scalability() {
    let mut failures = Vec::new();
    let spec = GeneratorSpec::Clouds { k: CLOUDS_SIZE };
    let inst = generate(&spec)
        .unwrap()
        .into_model()
        .unwrap()
        .instance()
        .unwrap();
    let run = inst.run_index().unwrap();
    let s = Setting::new(&inst.ts, &inst.objective, Some(&run), spec.mode()).unwrap();
    let start = Instant::now();
    let pg = PayoffGame::new(s, prune_dummies(&s));
    let out = refine_loop(&pg, &HeuristicsConfig::default(), RefineLimits::default()).unwrap();
    let elapsed = start.elapsed();
    let names: Vec<&str> = out
        .responsible
        .iter()
        .map(|&p| pg.players().get(p).name.as_str())
        .collect();
    if names != ["s_crit"] || elapsed >= CLOUDS_BUDGET {
        failures.push(format!("clouds refine gave {names:?} in {elapsed:?}"));
    }
    let refused = matches!(
        shapley_exact(&pg, DEFAULT_SHAPLEY_CAP),
        Err(RespError::CapExceeded { .. })
    );
    if !refused {
        failures.push("exact values did not refuse".into());
    }

    let mut counts = Vec::new();
    for (spec, good) in [
        (
            GeneratorSpec::FrontierStressReach { k: STRESS_SIZE },
            RefineHeuristic::FrontierWinning,
        ),
        (
            GeneratorSpec::FrontierStressSafety { k: STRESS_SIZE },
            RefineHeuristic::FrontierLosing,
        ),
    ] {
        let (fast, found) = iterations(spec, good, 0);
        let (slow, found_random) = iterations(spec, RefineHeuristic::FrontierRandom, 0);
        if fast >= slow || found != STRESS_SIZE || found_random != STRESS_SIZE {
            failures.push(format!("{spec}: {good} {fast} vs frontier-random {slow}"));
        }
        counts.push(format!(
            "{spec}: {good} {fast}, frontier-random {slow} iterations"
        ));
    }
    verdict(
        8,
        "refinement scales where exact values refuse",
        failures.is_empty(),
        &if failures.is_empty() {
            format!(
                "clouds({CLOUDS_SIZE}) with {} states: {{s_crit}} in {elapsed:?}, {} players refused; {}",
                inst.ts.num_states(),
                pg.players().len(),
                counts.join("; ")
            )
        } else {
            failures.join("; ")
        },
    );
}

#[test]
fn criterion_9_parity_forward_jump() {
    let inst = fixtures::fig4();
    let run = inst.run_index().unwrap();
    let s = Setting::new(&inst.ts, &inst.objective, Some(&run), Mode::Optimistic).unwrap();
    let set = |names: &[&str]| inst.ts.set_of_names(names.iter().copied()).unwrap();
    let with_jump = s.value(&set(&["s0", "s1", "s3", "s4"]));
    let without = s.value(&set(&["s0", "s1", "s4"]));
    let players = PlayerSet::all_states(&inst.ts);
    let oracle = oracle_minimal_winning(
        &inst.ts,
        &inst.objective,
        Some(&inst.run),
        Mode::Optimistic,
        &players,
    )
    .unwrap();
    let oracle_without = oracle.iter().any(|c| {
        c.iter()
            .all(|&p| ["s0", "s1", "s4"].contains(&players.get(p).name.as_str()))
    });
    verdict(
        9,
        "parity example needs the forward jump",
        with_jump && !without && !oracle_without,
        &format!(
            "{{s0,s1,s3,s4}} -> {}, {{s0,s1,s4}} -> {}",
            u8::from(with_jump),
            u8::from(without)
        ),
    );
}
