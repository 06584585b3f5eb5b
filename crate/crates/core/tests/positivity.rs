mod common;

use backresp::model::{ObjectiveKind, StateId};
use backresp::resp::{
    oracle_shapley, positivity_reach_opt, positivity_set_buechi_opt, BuechiOptions, PlayerSet,
    PreorderReading,
};
use backresp::{Mode, Setting};

fn oracle_positive(inst: &backresp::Instance, mode: Mode) -> Vec<StateId> {
    let players = PlayerSet::all_states(&inst.ts);
    let r = oracle_shapley(&inst.ts, &inst.objective, Some(&inst.run), mode, &players).unwrap();
    r.entries
        .iter()
        .filter(|e| e.is_positive())
        .map(|e| e.members[0])
        .collect()
}

fn buechi_disagreements(opts: BuechiOptions, count: usize) -> usize {
    let mut bad = 0;
    for inst in common::instances(11, count, 9, ObjectiveKind::Buechi) {
        let run = inst.run_index().unwrap();
        let s = Setting::new(&inst.ts, &inst.objective, Some(&run), Mode::Optimistic).unwrap();
        let got: Vec<StateId> = positivity_set_buechi_opt(&s, opts)
            .unwrap()
            .ones()
            .map(StateId::from)
            .collect();
        if got != oracle_positive(&inst, Mode::Optimistic) {
            bad += 1;
        }
    }
    bad
}

#[test]
fn buechi_algorithm_matches_oracle() {
    assert_eq!(buechi_disagreements(BuechiOptions::default(), 500), 0);
}

/// Alternative readings of the algorithm, kept to document why the default
/// was chosen. Each one disagrees with the oracle somewhere.
#[test]
fn buechi_alternative_readings_disagree() {
    let variants = [
        (
            "winning tops allowed",
            BuechiOptions {
                allow_winning_top: true,
                ..BuechiOptions::default()
            },
        ),
        (
            "winning tops allowed, filter on checked state",
            BuechiOptions {
                allow_winning_top: true,
                filter_on_checked_state: true,
                ..BuechiOptions::default()
            },
        ),
        (
            "filter on checked state",
            BuechiOptions {
                filter_on_checked_state: true,
                ..BuechiOptions::default()
            },
        ),
        (
            "preorder in the unmodified system",
            BuechiOptions {
                preorder: PreorderReading::Literal,
                ..BuechiOptions::default()
            },
        ),
    ];
    for (label, opts) in variants {
        let bad = buechi_disagreements(opts, 500);
        println!("{label}: {bad} of 500 instances disagree");
        assert!(bad > 0, "{label} unexpectedly agrees everywhere");
    }
}

#[test]
fn reach_optimistic_matches_oracle() {
    for inst in common::instances(12, 500, 9, ObjectiveKind::Reachability) {
        let run = inst.run_index().unwrap();
        let s = Setting::new(&inst.ts, &inst.objective, Some(&run), Mode::Optimistic).unwrap();
        let got: Vec<StateId> = positivity_reach_opt(&s)
            .unwrap()
            .ones()
            .map(StateId::from)
            .collect();
        assert_eq!(got, oracle_positive(&inst, Mode::Optimistic));
    }
}
