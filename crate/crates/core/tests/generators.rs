use backresp::generate::{centrifuge_program, generate, GeneratorSpec};
use backresp::ingest::{
    expand_program, parse_explicit, parse_program, serialize_explicit, DEFAULT_STATE_CAP,
};
use backresp::refine::{refine_loop, HeuristicsConfig, RefineHeuristic, RefineLimits};
use backresp::resp::{
    oracle_shapley, prune_blocks, prune_dummies, shapley_exact, PayoffGame, PlayerSet,
};
use backresp::{Instance, Setting};
use num_rational::BigRational;

fn instance(spec: GeneratorSpec) -> Instance {
    generate(&spec)
        .unwrap()
        .into_model()
        .unwrap()
        .instance()
        .unwrap()
}

fn refine_iterations(
    inst: &Instance,
    spec: GeneratorSpec,
    refine: RefineHeuristic,
    seed: u64,
) -> (Vec<String>, usize) {
    let run = inst.run_index().unwrap();
    let setting = Setting::new(&inst.ts, &inst.objective, Some(&run), spec.mode()).unwrap();
    let pg = PayoffGame::new(setting, prune_dummies(&setting));
    let config = HeuristicsConfig {
        refine,
        seed,
        ..HeuristicsConfig::default()
    };
    let out = refine_loop(&pg, &config, RefineLimits::default()).unwrap();
    let names = out
        .responsible
        .iter()
        .map(|&p| pg.players().get(p).name.clone())
        .collect();
    (names, out.iterations)
}

#[test]
fn generators_round_trip() {
    for spec in [
        GeneratorSpec::Clouds { k: 4 },
        GeneratorSpec::ExpCoalitions { n: 3 },
        GeneratorSpec::FrontierStressReach { k: 3 },
        GeneratorSpec::FrontierStressSafety { k: 3 },
        GeneratorSpec::AlmostEmptyFrontier { k: 3 },
        GeneratorSpec::CentrifugeAnalog {
            centrifuges: 2,
            faulty: Some(1),
        },
    ] {
        let doc = generate(&spec).unwrap();
        assert_eq!(
            parse_explicit(&serialize_explicit(&doc)).unwrap(),
            doc,
            "{spec}"
        );
        assert!(doc.into_model().unwrap().instance().is_some(), "{spec}");
    }
}

#[test]
fn out_of_range_parameters() {
    let err = generate(&GeneratorSpec::ExpCoalitions { n: 0 }).unwrap_err();
    assert_eq!(err.to_string(), "exp-coalitions: n = 0 outside 1..=20");
    assert!(GeneratorSpec::from_name("nope", 3).is_err());
}

#[test]
fn small_clouds_have_one_responsible_state() {
    let spec = GeneratorSpec::Clouds { k: 3 };
    let inst = instance(spec);
    assert_eq!(inst.ts.num_states(), 13);
    let players = PlayerSet::all_states(&inst.ts);
    for mode in [backresp::Mode::Optimistic, spec.mode()] {
        let r = oracle_shapley(&inst.ts, &inst.objective, Some(&inst.run), mode, &players).unwrap();
        assert_eq!(r.positive(), ["s_crit"], "{mode}");
    }
    assert_eq!(
        refine_iterations(&inst, spec, RefineHeuristic::FrontierRandom, 0).0,
        ["s_crit"]
    );
}

#[test]
fn clouds_program_matches_generator() {
    use petgraph::algo::is_isomorphic;
    use petgraph::graph::DiGraph;
    let src = include_str!("../../../models/clouds3.prism");
    let model = expand_program(&parse_program(src).unwrap(), DEFAULT_STATE_CAP).unwrap();
    let generated = instance(GeneratorSpec::Clouds { k: 3 }).ts;
    let graph = |ts: &backresp::model::TransitionSystem| {
        DiGraph::<(), ()>::from_edges(ts.edges().map(|(a, b)| (a.0, b.0)))
    };
    assert_eq!(model.ts.num_states(), generated.num_states());
    assert!(is_isomorphic(&graph(&model.ts), &graph(&generated)));
    assert_eq!(model.labels["plus"].count_ones(..), 1);
}

#[test]
fn stress_families_single_out_one_kind() {
    let reach = GeneratorSpec::FrontierStressReach { k: 3 };
    let inst = instance(reach);
    let r = oracle_shapley(
        &inst.ts,
        &inst.objective,
        Some(&inst.run),
        reach.mode(),
        &PlayerSet::all_states(&inst.ts),
    )
    .unwrap();
    assert_eq!(r.positive(), ["w1", "w2", "w3"]);
    let safety = GeneratorSpec::FrontierStressSafety { k: 3 };
    let inst = instance(safety);
    let r = oracle_shapley(
        &inst.ts,
        &inst.objective,
        Some(&inst.run),
        safety.mode(),
        &PlayerSet::all_states(&inst.ts),
    )
    .unwrap();
    assert_eq!(r.positive(), ["r1", "r2", "r3"]);
    let almost = GeneratorSpec::AlmostEmptyFrontier { k: 4 };
    let inst = instance(almost);
    let r = oracle_shapley(
        &inst.ts,
        &inst.objective,
        Some(&inst.run),
        almost.mode(),
        &PlayerSet::all_states(&inst.ts),
    )
    .unwrap();
    assert_eq!(r.positive(), ["t"]);
}

#[test]
fn analyser_fault_shares_blame_with_scheduler() {
    let spec = GeneratorSpec::CentrifugeAnalog {
        centrifuges: 2,
        faulty: Some(1),
    };
    let model = generate(&spec).unwrap().into_model().unwrap();
    let inst = model.instance().unwrap();
    let run = inst.run_index().unwrap();
    let setting = Setting::new(&inst.ts, &inst.objective, Some(&run), spec.mode()).unwrap();
    let blocks = PlayerSet::blocks(&inst.ts, model.groups.clone().unwrap());
    let pg = PayoffGame::new(setting, prune_blocks(&setting, &blocks));
    let report = shapley_exact(&pg, 24).unwrap().padded(&blocks);
    let half = BigRational::new(1.into(), 2.into());
    assert_eq!(report.value("scheduler"), Some(&half));
    assert_eq!(report.value("centrifuge2"), Some(&half));
    assert_eq!(
        report.value("centrifuge1").map(|v| v.to_string()),
        Some("0".into())
    );

    let healthy = generate(&GeneratorSpec::CentrifugeAnalog {
        centrifuges: 2,
        faulty: None,
    })
    .unwrap();
    assert!(healthy.run.is_none());
    assert!(centrifuge_program(2, Some(0)).contains("t1 <= 3"));
}

#[test]
fn frontier_heuristics_on_stress_families() {
    for (spec, good) in [
        (
            GeneratorSpec::FrontierStressReach { k: 10 },
            RefineHeuristic::FrontierWinning,
        ),
        (
            GeneratorSpec::FrontierStressSafety { k: 10 },
            RefineHeuristic::FrontierLosing,
        ),
    ] {
        let inst = instance(spec);
        let (set, fast) = refine_iterations(&inst, spec, good, 1);
        assert_eq!(set.len(), 10);
        assert_eq!(fast, 11, "{spec}");
        let (set, slow) = refine_iterations(&inst, spec, RefineHeuristic::FrontierRandom, 1);
        assert_eq!(set.len(), 10);
        println!("{spec}: {good} {fast} iterations, frontier-random {slow}");
        assert!(slow > fast);
    }
}
