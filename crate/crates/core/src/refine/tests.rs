use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::fixtures;
use crate::game::{Mode, Setting};
use crate::model::Instance;
use crate::model::StateSet;
use crate::resp::{PlayerSet, DEFAULT_SHAPLEY_CAP};

fn lowest() -> HeuristicsConfig {
    HeuristicsConfig {
        refine: RefineHeuristic::FrontierLowest,
        ..HeuristicsConfig::default()
    }
}

fn run_refine(
    inst: &Instance,
    mode: Mode,
    config: &HeuristicsConfig,
) -> (RefineOutcome, Vec<String>) {
    let run = inst.run_index().unwrap();
    let s = Setting::new(&inst.ts, &inst.objective, Some(&run), mode).unwrap();
    let pg = PayoffGame::new(s, PlayerSet::all_states(&inst.ts));
    let out = refine_loop(&pg, config, RefineLimits::default()).unwrap();
    let names = out
        .responsible
        .iter()
        .map(|&p| pg.players().get(p).name.clone())
        .collect();
    (out, names)
}

#[test]
fn fig8_walkthrough() {
    let inst = fixtures::fig8();
    let (out, names) = run_refine(&inst, Mode::Pessimistic, &lowest());
    assert_eq!(names, ["s2", "s3", "s6", "s8"]);
    assert_eq!(out.iterations, 5);
    let t = &out.trace;
    assert_eq!(t[0].frontier_of(0).unwrap(), ["s3", "s6", "s8"]);
    let splits: Vec<&str> = t
        .iter()
        .filter_map(|r| r.split.as_ref().map(|s| s.state.as_str()))
        .collect();
    assert_eq!(splits, ["s3", "s6", "s2", "s8"]);
    assert_eq!(t[1].frontier_of(2).unwrap(), ["s6", "s8"]);
    assert_eq!(t[3].frontier_of(6).unwrap(), ["s8"]);
    let last = t.last().unwrap();
    assert!(last.split.is_none());
    assert_eq!(last.witnesses.len(), 4);
    // carried over from the iteration that split s6 off
    let w6 = last.witnesses.iter().find(|w| w.block == 3).unwrap();
    assert_eq!(
        w6.coalition,
        ["s0", "s1", "s4", "s5", "s7", "s8", "s9", "bad"]
    );
}

#[test]
fn fig8_final_partition_pairs() {
    let inst = fixtures::fig8();
    let (out, _) = run_refine(&inst, Mode::Pessimistic, &lowest());
    let run = inst.run_index().unwrap();
    let s = Setting::new(&inst.ts, &inst.objective, Some(&run), Mode::Pessimistic).unwrap();
    let pg = PayoffGame::new(s, PlayerSet::all_states(&inst.ts));
    let fresh = compute_has_bsp(
        &pg,
        &out.partition,
        &BTreeMap::new(),
        RefineLimits::default(),
    )
    .unwrap();
    let pairs: Vec<(String, String)> = fresh
        .values()
        .map(|w| {
            (
                inst.ts.format_set(&w.block_states),
                inst.ts.format_set(&w.coalition),
            )
        })
        .collect();
    let expect = [
        ("{s3}", "{}"),
        ("{s6}", "{s8}"),
        ("{s2}", "{}"),
        ("{s8}", "{s6}"),
    ];
    assert_eq!(pairs.len(), 4);
    for (b, c) in expect {
        assert!(
            pairs.contains(&(b.to_string(), c.to_string())),
            "{b} {c}: {pairs:?}"
        );
    }
}

#[test]
fn fig8_values_via_refinement() {
    let inst = fixtures::fig8();
    let run = inst.run_index().unwrap();
    let s = Setting::new(&inst.ts, &inst.objective, Some(&run), Mode::Pessimistic).unwrap();
    let pg = PayoffGame::new(s, PlayerSet::all_states(&inst.ts));
    let (report, _) =
        responsibility_via_refinement(&pg, &lowest(), RefineLimits::default(), DEFAULT_SHAPLEY_CAP)
            .unwrap();
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    assert_eq!(report.entries.len(), 11);
    assert_eq!(report.value("s2"), Some(&q(5, 12)));
    assert_eq!(report.value("s3"), Some(&q(5, 12)));
    assert_eq!(report.value("s6"), Some(&q(1, 12)));
    assert_eq!(report.value("s8"), Some(&q(1, 12)));
    assert_eq!(report.value("s0"), Some(&q(0, 1)));
}

#[test]
fn fig9_frontier_and_result() {
    let inst = fixtures::fig9();
    let (out, names) = run_refine(&inst, Mode::Pessimistic, &lowest());
    assert_eq!(out.trace[0].frontier_of(0).unwrap(), ["s1", "s2"]);
    assert_eq!(names, ["s1"]);
}

#[test]
fn fig10_empty_frontier_falls_back_to_delta() {
    let inst = fixtures::fig10();
    for mode in [Mode::Optimistic, Mode::Pessimistic] {
        let (out, _) = run_refine(&inst, mode, &lowest());
        let first = &out.trace[0];
        assert!(first.frontier_of(0).unwrap().is_empty(), "{mode}");
        assert!(first.split.is_some());
    }
}

#[test]
fn seeds_reproduce_traces() {
    let inst = fixtures::fig8();
    let config = HeuristicsConfig {
        initial_blocks: 3,
        seed: 42,
        ..HeuristicsConfig::default()
    };
    let (a, _) = run_refine(&inst, Mode::Pessimistic, &config);
    let (b, _) = run_refine(&inst, Mode::Pessimistic, &config);
    assert_eq!(trace_jsonl(&a.trace), trace_jsonl(&b.trace));
}

#[test]
fn single_escape_state() {
    let ts = crate::model::TransitionSystem::from_names(
        &["a", "bad"],
        "a",
        &[("a", "bad"), ("a", "a"), ("bad", "bad")],
    )
    .unwrap();
    let safety = crate::model::Objective::Safety(ts.set_of_names(["bad"]).unwrap());
    let run = crate::model::LassoRun::from_names(&ts, &["a"], &["bad"]).unwrap();
    let inst = Instance {
        ts,
        objective: safety,
        run,
    };
    let (out, names) = run_refine(&inst, Mode::Pessimistic, &lowest());
    assert_eq!(names, ["a"]);
    assert_eq!(out.iterations, 2);
}

#[test]
fn selection_heuristics() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mk = |block, delta: &[usize], front: &[usize]| {
        let set = |v: &[usize]| {
            let mut s = StateSet::with_capacity(8);
            v.iter().for_each(|&i| s.insert(i));
            s
        };
        BspWitness {
            block,
            block_states: set(&[]),
            coalition: set(&[]),
            win_with: set(&[]),
            win_without: set(&[]),
            delta: set(delta),
            frontier: set(front),
        }
    };
    let a = mk(4, &[0, 1, 2, 3, 4], &[0, 1]);
    let b = mk(7, &[5, 6], &[5]);
    let both = [&a, &b];
    assert_eq!(
        select_blocks(&both, SelectHeuristic::MaxDelta, &mut rng),
        Some(4)
    );
    assert_eq!(
        select_blocks(&both, SelectHeuristic::MinDelta, &mut rng),
        Some(7)
    );
    assert_eq!(
        select_blocks(&both, SelectHeuristic::MinFrontier, &mut rng),
        Some(7)
    );
    assert_eq!(
        select_blocks(&[&a], SelectHeuristic::Random, &mut rng),
        Some(4)
    );
    assert_eq!(select_blocks(&[], SelectHeuristic::Random, &mut rng), None);
    assert_eq!(
        "frontier-losing".parse(),
        Ok(RefineHeuristic::FrontierLosing)
    );
    assert!("frontier".parse::<RefineHeuristic>().is_err());
}
