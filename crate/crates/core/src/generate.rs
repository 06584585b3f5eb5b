//! Deterministic benchmark families, emitted as explicit documents.

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::counterexample::find_violating_run;
use crate::game::Mode;
use crate::ingest::{
    expand_program, parse_program, resolve_grouping, ExplicitModelDoc, GroupingSpec, ObjectiveDoc,
    RunDoc, DEFAULT_STATE_CAP,
};
use crate::model::Objective;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("{family}: {param} = {value} outside {range}")]
    OutOfRange {
        family: &'static str,
        param: &'static str,
        value: usize,
        range: &'static str,
    },
    #[error("unknown family `{0}`; expected one of {families}", families = FAMILIES.join(", "))]
    UnknownFamily(String),
}

pub const FAMILIES: &[&str] = &[
    "clouds",
    "exp-coalitions",
    "frontier-stress-reach",
    "frontier-stress-safety",
    "almost-empty-frontier",
    "centrifuge-analog",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    /// Three acyclic clouds of `k` states around a single critical state.
    Clouds { k: usize },
    /// `n` pairs, each pair contributing one member to every minimal winning
    /// coalition.
    ExpCoalitions { n: usize },
    /// `k` responsible frontier states with a move into the target region and
    /// `k` null frontier states with a move into the losing region.
    FrontierStressReach { k: usize },
    /// Safety counterpart: the responsible frontier states are the ones with a
    /// move into the losing region.
    FrontierStressSafety { k: usize },
    /// `k` frontier states, one of them responsible, indistinguishable by
    /// transition counts.
    AlmostEmptyFrontier { k: usize },
    /// Sequentially scheduled analysers, one of which may decide too early.
    CentrifugeAnalog {
        centrifuges: usize,
        faulty: Option<usize>,
    },
}

impl GeneratorSpec {
    /// Family name plus the single size parameter (centrifuge count for the
    /// analyser family, which then has its last analyser faulty).
    pub fn from_name(family: &str, size: usize) -> Result<Self, GenerateError> {
        let spec = match family {
            "clouds" => GeneratorSpec::Clouds { k: size },
            "exp-coalitions" => GeneratorSpec::ExpCoalitions { n: size },
            "frontier-stress-reach" => GeneratorSpec::FrontierStressReach { k: size },
            "frontier-stress-safety" => GeneratorSpec::FrontierStressSafety { k: size },
            "almost-empty-frontier" => GeneratorSpec::AlmostEmptyFrontier { k: size },
            "centrifuge-analog" => GeneratorSpec::CentrifugeAnalog {
                centrifuges: size,
                faulty: size.checked_sub(1),
            },
            other => return Err(GenerateError::UnknownFamily(other.to_string())),
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn family(&self) -> &'static str {
        match self {
            GeneratorSpec::Clouds { .. } => "clouds",
            GeneratorSpec::ExpCoalitions { .. } => "exp-coalitions",
            GeneratorSpec::FrontierStressReach { .. } => "frontier-stress-reach",
            GeneratorSpec::FrontierStressSafety { .. } => "frontier-stress-safety",
            GeneratorSpec::AlmostEmptyFrontier { .. } => "almost-empty-frontier",
            GeneratorSpec::CentrifugeAnalog { .. } => "centrifuge-analog",
        }
    }

    /// Mode the family is meant to be analysed in.
    pub fn mode(&self) -> Mode {
        match self {
            GeneratorSpec::ExpCoalitions { .. } => Mode::Optimistic,
            _ => Mode::Pessimistic,
        }
    }

    pub fn check(&self) -> Result<(), GenerateError> {
        let family = self.family();
        let within = |param, value: usize, lo: usize, hi: usize, range| {
            if (lo..=hi).contains(&value) {
                Ok(())
            } else {
                Err(GenerateError::OutOfRange {
                    family,
                    param,
                    value,
                    range,
                })
            }
        };
        match *self {
            GeneratorSpec::Clouds { k } => within("k", k, 1, 1_000_000, "1..=1000000"),
            GeneratorSpec::ExpCoalitions { n } => within("n", n, 1, 20, "1..=20"),
            GeneratorSpec::FrontierStressReach { k }
            | GeneratorSpec::FrontierStressSafety { k } => within("k", k, 1, 100_000, "1..=100000"),
            GeneratorSpec::AlmostEmptyFrontier { k } => within("k", k, 1, 100_000, "1..=100000"),
            GeneratorSpec::CentrifugeAnalog {
                centrifuges,
                faulty,
            } => {
                within("centrifuges", centrifuges, 1, 4, "1..=4")?;
                match faulty {
                    Some(f) => within("faulty", f, 0, centrifuges - 1, "0..centrifuges"),
                    None => Ok(()),
                }
            }
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorSpec::Clouds { k }
            | GeneratorSpec::FrontierStressReach { k }
            | GeneratorSpec::FrontierStressSafety { k }
            | GeneratorSpec::AlmostEmptyFrontier { k } => write!(f, "{}({k})", self.family()),
            GeneratorSpec::ExpCoalitions { n } => write!(f, "{}({n})", self.family()),
            GeneratorSpec::CentrifugeAnalog { centrifuges, .. } => {
                write!(f, "{}({centrifuges})", self.family())
            }
        }
    }
}

#[derive(Default)]
struct Builder {
    states: Vec<String>,
    transitions: Vec<(String, String)>,
}

impl Builder {
    fn state(&mut self, name: impl Into<String>) {
        self.states.push(name.into());
    }

    fn edge(&mut self, from: impl Into<String>, to: impl Into<String>) {
        self.transitions.push((from.into(), to.into()));
    }

    fn finish(
        self,
        objective: ObjectiveDoc,
        prefix: Vec<String>,
        cycle: Vec<String>,
    ) -> ExplicitModelDoc {
        ExplicitModelDoc {
            initial: self.states[0].clone(),
            states: self.states,
            transitions: self.transitions,
            objective,
            run: Some(RunDoc { prefix, cycle }),
            groups: None,
        }
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

pub fn generate(spec: &GeneratorSpec) -> Result<ExplicitModelDoc, GenerateError> {
    spec.check()?;
    Ok(match *spec {
        GeneratorSpec::Clouds { k } => clouds(k),
        GeneratorSpec::ExpCoalitions { n } => exp_coalitions(n),
        GeneratorSpec::FrontierStressReach { k } => stress_reach(k),
        GeneratorSpec::FrontierStressSafety { k } => stress_safety(k),
        GeneratorSpec::AlmostEmptyFrontier { k } => almost_empty_frontier(k),
        GeneratorSpec::CentrifugeAnalog {
            centrifuges,
            faulty,
        } => centrifuge_analog(centrifuges, faulty),
    })
}

/// Cloud nodes in layers of two; every node moves to every node of the next
/// layer, the last layer to `exit`. Returns the run path through the cloud.
fn cloud(b: &mut Builder, tag: &str, k: usize, entry: &str, exit: &str) -> Vec<String> {
    let node = |i: usize| format!("{tag}_{i}");
    for i in 0..k {
        b.state(node(i));
    }
    let layer = |l: usize| (2 * l..(2 * l + 2).min(k)).map(node);
    let layers = k.div_ceil(2);
    for n in layer(0) {
        b.edge(entry, n);
    }
    for l in 0..layers {
        for from in layer(l) {
            if l + 1 < layers {
                for to in layer(l + 1) {
                    b.edge(from.clone(), to);
                }
            } else {
                b.edge(from, exit);
            }
        }
    }
    (0..layers).map(|l| node(2 * l)).collect()
}

/// `s0 → c1 → s_crit → {c2 → s_plus, c3 → s_minus}`, reaching `s_plus`;
/// 3k + 4 states.
fn clouds(k: usize) -> ExplicitModelDoc {
    let mut b = Builder::default();
    b.state("s0");
    let via1 = cloud(&mut b, "c1", k, "s0", "s_crit");
    b.state("s_crit");
    cloud(&mut b, "c2", k, "s_crit", "s_plus");
    let via3 = cloud(&mut b, "c3", k, "s_crit", "s_minus");
    b.state("s_plus");
    b.state("s_minus");
    b.edge("s_plus", "s_plus");
    b.edge("s_minus", "s_minus");
    let mut prefix = vec!["s0".to_string()];
    prefix.extend(via1);
    prefix.push("s_crit".into());
    prefix.extend(via3);
    b.finish(
        ObjectiveDoc::Reachability {
            target: names(&["s_plus"]),
        },
        prefix,
        names(&["s_minus"]),
    )
}

/// Pairs `si_a, si_b`; both step back towards `s0`, whose only other move
/// leads through `sf` (the Büchi target) to the last pair.
fn exp_coalitions(n: usize) -> ExplicitModelDoc {
    let a = |i: usize| {
        if i == 0 {
            "s0".to_string()
        } else {
            format!("s{i}a")
        }
    };
    let bn = |i: usize| format!("s{i}b");
    let mut b = Builder::default();
    b.state("s0");
    for i in 1..=n {
        b.state(a(i));
        b.state(bn(i));
    }
    b.state("sf");
    b.edge("s0", a(1));
    b.edge("s0", "sf");
    b.edge("sf", a(n));
    for i in 1..=n {
        b.edge(a(i), bn(i));
        b.edge(a(i), a(i - 1));
        b.edge(bn(i), a(i - 1));
        if i < n {
            b.edge(bn(i), a(i + 1));
        } else {
            b.edge(bn(i), bn(i));
        }
    }
    let mut prefix = vec!["s0".to_string()];
    for i in 1..n {
        prefix.push(a(i));
        prefix.push(bn(i));
    }
    prefix.push(a(n));
    b.finish(
        ObjectiveDoc::Buechi {
            target: names(&["sf"]),
        },
        prefix,
        vec![bn(n)],
    )
}

/// Run `s0 w1 .. wk sink^ω`; each `wi` can leave for `goal`, and each decoy
/// `di` (reachable only from `wi`) can fall into `sink`.
fn stress_reach(k: usize) -> ExplicitModelDoc {
    let mut b = Builder::default();
    b.state("s0");
    for i in 1..=k {
        b.state(format!("d{i}"));
    }
    for i in 1..=k {
        b.state(format!("w{i}"));
    }
    b.state("goal");
    b.state("sink");
    b.edge("s0", "w1");
    for i in 1..=k {
        let (w, d) = (format!("w{i}"), format!("d{i}"));
        let next = if i < k {
            format!("w{}", i + 1)
        } else {
            "sink".into()
        };
        b.edge(w.clone(), next);
        b.edge(w.clone(), "goal");
        b.edge(w.clone(), d.clone());
        b.edge(d.clone(), w);
        b.edge(d, "sink");
    }
    b.edge("goal", "goal");
    b.edge("sink", "sink");
    let mut prefix = vec!["s0".to_string()];
    prefix.extend((1..=k).map(|i| format!("w{i}")));
    b.finish(
        ObjectiveDoc::Reachability {
            target: names(&["goal"]),
        },
        prefix,
        names(&["sink"]),
    )
}

/// Run `s0 r1 .. rk bad^ω` avoiding `bad`; each `ri` can escape to `safe` or
/// fall into `bad`, and each decoy `ni` (reachable only from `ri`) can escape.
fn stress_safety(k: usize) -> ExplicitModelDoc {
    let mut b = Builder::default();
    b.state("s0");
    for i in 1..=k {
        b.state(format!("n{i}"));
    }
    for i in 1..=k {
        b.state(format!("r{i}"));
    }
    b.state("safe");
    b.state("bad");
    b.edge("s0", "r1");
    for i in 1..=k {
        let (r, n) = (format!("r{i}"), format!("n{i}"));
        let next = if i < k {
            format!("r{}", i + 1)
        } else {
            "bad".into()
        };
        b.edge(r.clone(), next);
        b.edge(r.clone(), "bad");
        b.edge(r.clone(), "safe");
        b.edge(r.clone(), n.clone());
        b.edge(n.clone(), r);
        b.edge(n, "safe");
    }
    b.edge("safe", "safe");
    b.edge("bad", "bad");
    let mut prefix = vec!["s0".to_string()];
    prefix.extend((1..=k).map(|i| format!("r{i}")));
    b.finish(
        ObjectiveDoc::Safety {
            target: names(&["bad"]),
        },
        prefix,
        names(&["bad"]),
    )
}

/// Run `s0 t sink^ω`; `t` and the decoys `n1 .. n(k-1)` it leads to can each
/// move to `goal` or `sink`. Only `t` is responsible; it has the highest id.
fn almost_empty_frontier(k: usize) -> ExplicitModelDoc {
    let mut b = Builder::default();
    b.state("s0");
    for i in 1..k {
        b.state(format!("n{i}"));
    }
    b.state("t");
    b.state("goal");
    b.state("sink");
    b.edge("s0", "t");
    b.edge("t", "goal");
    b.edge("t", "sink");
    for i in 1..k {
        let n = format!("n{i}");
        b.edge("t", n.clone());
        b.edge(n.clone(), "goal");
        b.edge(n, "sink");
    }
    b.edge("goal", "goal");
    b.edge("sink", "sink");
    b.finish(
        ObjectiveDoc::Reachability {
            target: names(&["goal"]),
        },
        names(&["s0", "t"]),
        names(&["sink"]),
    )
}

/// Module-language source of the analyser family: a scheduler hands one clean
/// and one infected sample to analysers in turn; each analyser soaks the
/// sample for three minutes and reports infected iff it travelled at least 4.
/// The faulty analyser tests `t <= 3` instead of `t = 3` and may report early.
pub fn centrifuge_program(centrifuges: usize, faulty: Option<usize>) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line("// sample analysers; the scheduler owns turn = 0, analyser i owns turn = i".into());
    line("mdp".into());
    line("const int CLEAN = 1;".into());
    line("const int INFECTED = 1;".into());
    line(String::new());
    line("module scheduler".into());
    line(format!("  turn : [0..{centrifuges}] init 0;"));
    line("  clean_left : [0..CLEAN] init CLEAN;".into());
    line("  inf_left : [0..INFECTED] init INFECTED;".into());
    line("  owner turn = 0;".into());
    for i in 1..=centrifuges {
        line(format!(
            "  [load{i}_clean] turn = 0 & clean_left > 0 -> (turn'={i}) & (clean_left'=clean_left-1);"
        ));
        line(format!(
            "  [load{i}_inf] turn = 0 & inf_left > 0 -> (turn'={i}) & (inf_left'=inf_left-1);"
        ));
        line(format!("  [report{i}_clean] turn = {i} -> (turn'=0);"));
        line(format!("  [report{i}_inf] turn = {i} -> (turn'=0);"));
    }
    line("  [] turn = 0 & clean_left = 0 & inf_left = 0 -> true;".into());
    line("endmodule".into());
    for i in 1..=centrifuges {
        let decide = if faulty == Some(i - 1) { "<=" } else { "=" };
        line(String::new());
        line(format!("module centrifuge{i}"));
        line(format!("  busy{i} : bool init false;"));
        line(format!("  infected{i} : bool init false;"));
        line(format!("  t{i} : [0..3] init 0;"));
        line(format!("  d{i} : [0..9] init 0;"));
        line(format!("  owner turn = {i};"));
        line(format!(
            "  [load{i}_clean] !busy{i} -> (busy{i}'=true) & (infected{i}'=false) & (t{i}'=0) & (d{i}'=0);"
        ));
        line(format!(
            "  [load{i}_inf] !busy{i} -> (busy{i}'=true) & (infected{i}'=true) & (t{i}'=0) & (d{i}'=0);"
        ));
        line(format!(
            "  [] busy{i} & t{i} < 3 & infected{i} -> (d{i}'=d{i}+2) & (t{i}'=t{i}+1);"
        ));
        line(format!(
            "  [] busy{i} & t{i} < 3 & infected{i} -> (d{i}'=d{i}+3) & (t{i}'=t{i}+1);"
        ));
        line(format!(
            "  [] busy{i} & t{i} < 3 & !infected{i} -> (t{i}'=t{i}+1);"
        ));
        line(format!(
            "  [] busy{i} & t{i} < 3 & !infected{i} -> (d{i}'=d{i}+1) & (t{i}'=t{i}+1);"
        ));
        line(format!(
            "  [report{i}_inf] busy{i} & t{i} {decide} 3 & d{i} >= 4 -> (busy{i}'=false) & (t{i}'=0) & (d{i}'=0);"
        ));
        line(format!(
            "  [report{i}_clean] busy{i} & t{i} {decide} 3 & d{i} < 4 -> (busy{i}'=false) & (t{i}'=0) & (d{i}'=0);"
        ));
        line("endmodule".into());
    }
    line(String::new());
    line("module counter".into());
    line("  clean_res : [0..CLEAN+INFECTED] init 0;".into());
    line("  inf_res : [0..CLEAN+INFECTED] init 0;".into());
    for i in 1..=centrifuges {
        line(format!(
            "  [report{i}_clean] true -> (clean_res'=clean_res+1);"
        ));
        line(format!("  [report{i}_inf] true -> (inf_res'=inf_res+1);"));
    }
    line("endmodule".into());
    line(String::new());
    line("label \"correct\" = turn = 0 & clean_left = 0 & inf_left = 0 & clean_res = CLEAN & inf_res = INFECTED;".into());
    out
}

/// Expanded analyser program with by-module groups and the first violating
/// run found; without a fault there is no violation and the run is omitted.
fn centrifuge_analog(centrifuges: usize, faulty: Option<usize>) -> ExplicitModelDoc {
    let src = centrifuge_program(centrifuges, faulty);
    let program = parse_program(&src).expect("generated program parses");
    let model = expand_program(&program, DEFAULT_STATE_CAP).expect("generated program expands");
    let objective = Objective::Reachability(model.labels["correct"].clone());
    let run = find_violating_run(&model.ts, &objective).ok();
    let groups = resolve_grouping(&GroupingSpec::ByModule, &model).expect("owners declared");
    let groups: Vec<_> = groups.into_iter().filter(|(_, m)| !m.is_empty()).collect();
    let mut doc = ExplicitModelDoc::from_model(&model.ts, &objective, run.as_ref(), Some(&groups));
    // keep block order stable: scheduler first, analysers by index
    if let Some(g) = doc.groups.take() {
        let mut sorted: IndexMap<String, Vec<String>> = g;
        sorted.sort_by(|a, _, b, _| group_rank(a).cmp(&group_rank(b)));
        doc.groups = Some(sorted);
    }
    doc
}

fn group_rank(name: &str) -> (u8, &str) {
    match name {
        "scheduler" => (0, name),
        "unowned" => (2, name),
        _ => (1, name),
    }
}
