//! Small hand-encoded systems used throughout the tests and documentation.
//! The bad state of the safety examples is called `bad`.

use crate::model::{Instance, LassoRun, Objective, TransitionSystem};

fn instance(
    states: &[&str],
    edges: &[(&str, &str)],
    objective: impl FnOnce(&TransitionSystem) -> Objective,
    prefix: &[&str],
    cycle: &[&str],
) -> Instance {
    let ts = TransitionSystem::from_names(states, states[0], edges).expect("fixture system");
    let objective = objective(&ts);
    let run = LassoRun::from_names(&ts, prefix, cycle).expect("fixture run");
    Instance { ts, objective, run }
}

fn target(ts: &TransitionSystem, names: &[&str]) -> crate::model::StateSet {
    ts.set_of_names(names.iter().copied())
        .expect("fixture target")
}

/// Safety example where engraving the run decides who can avoid `bad`.
pub fn fig1() -> Instance {
    instance(
        &["s0", "s1", "s2", "s3", "s4", "s5", "bad"],
        &[
            ("s0", "s1"),
            ("s0", "s2"),
            ("s1", "s0"),
            ("s1", "s3"),
            ("s2", "s1"),
            ("s2", "s3"),
            ("s2", "s4"),
            ("s3", "s5"),
            ("s4", "s3"),
            ("s4", "s5"),
            ("s4", "bad"),
            ("s5", "bad"),
            ("bad", "bad"),
        ],
        |ts| Objective::Safety(target(ts, &["bad"])),
        &["s0", "s2", "s4"],
        &["bad"],
    )
}

/// Büchi example with target {s2, s5}.
pub fn fig3() -> Instance {
    instance(
        &["s0", "s1", "s2", "s3", "s4", "s5"],
        &[
            ("s0", "s1"),
            ("s0", "s5"),
            ("s1", "s2"),
            ("s1", "s4"),
            ("s2", "s2"),
            ("s2", "s3"),
            ("s3", "s3"),
            ("s4", "s0"),
            ("s4", "s1"),
            ("s5", "s1"),
        ],
        |ts| Objective::Buechi(target(ts, &["s2", "s5"])),
        &["s0", "s1", "s2"],
        &["s3"],
    )
}

/// Parity example where a coalition must jump forward along the run.
pub fn fig4() -> Instance {
    instance(
        &["s0", "s1", "s2", "s3", "s4", "s5"],
        &[
            ("s0", "s1"),
            ("s0", "s5"),
            ("s1", "s2"),
            ("s1", "s3"),
            ("s2", "s3"),
            ("s3", "s4"),
            ("s3", "s0"),
            ("s4", "s4"),
            ("s4", "s1"),
            ("s5", "s4"),
        ],
        |_| Objective::Parity(vec![1, 1, 3, 1, 1, 2]),
        &["s0", "s1", "s2", "s3"],
        &["s4"],
    )
}

/// Reachability of s3 from a self-looping initial state.
pub fn fig5() -> Instance {
    instance(
        &["s0", "s1", "s2", "s3"],
        &[
            ("s0", "s0"),
            ("s0", "s1"),
            ("s0", "s2"),
            ("s1", "s1"),
            ("s1", "s3"),
            ("s2", "s2"),
            ("s2", "s3"),
            ("s3", "s3"),
        ],
        |ts| Objective::Reachability(target(ts, &["s3"])),
        &[],
        &["s0"],
    )
}

/// Safety example used to walk through partition refinement.
pub fn fig8() -> Instance {
    instance(
        &[
            "s0", "s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8", "s9", "bad",
        ],
        &[
            ("s0", "s1"),
            ("s0", "s2"),
            ("s1", "s2"),
            ("s2", "s1"),
            ("s2", "s3"),
            ("s3", "s4"),
            ("s3", "s5"),
            ("s3", "s6"),
            ("s4", "s7"),
            ("s5", "s6"),
            ("s6", "s8"),
            ("s6", "s9"),
            ("s7", "s4"),
            ("s8", "s7"),
            ("s8", "s9"),
            ("s9", "bad"),
            ("bad", "bad"),
        ],
        |ts| Objective::Safety(target(ts, &["bad"])),
        &["s0", "s2", "s3", "s6", "s9"],
        &["bad"],
    )
}

/// Safety example whose frontier contains a state without responsibility.
pub fn fig9() -> Instance {
    instance(
        &["s0", "s1", "s2", "bad"],
        &[
            ("s0", "s1"),
            ("s1", "s1"),
            ("s1", "s2"),
            ("s1", "bad"),
            ("s2", "s2"),
            ("s2", "bad"),
            ("bad", "bad"),
        ],
        |ts| Objective::Safety(target(ts, &["bad"])),
        &["s0", "s1"],
        &["bad"],
    )
}

/// Büchi example with an empty frontier.
pub fn fig10() -> Instance {
    instance(
        &["s0", "s1", "s2", "s3"],
        &[
            ("s0", "s1"),
            ("s1", "s1"),
            ("s1", "s2"),
            ("s1", "s3"),
            ("s2", "s0"),
            ("s3", "s0"),
        ],
        |ts| Objective::Buechi(target(ts, &["s3"])),
        &["s0"],
        &["s1"],
    )
}
