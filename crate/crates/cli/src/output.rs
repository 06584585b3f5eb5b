//! Rendering of reports and traces.

use std::fmt::Write;

use backresp::game::dot::{arena_dot, DotOptions};
use backresp::refine::TraceRecord;
use backresp::resp::{PlayerSet, ResponsibilityReport};
use serde_json::Value;

use crate::args::Format;
use crate::pipeline::{member_states, Prepared};

pub fn render(
    prepared: &Prepared,
    report: &ResponsibilityReport,
    trace: Option<&[TraceRecord]>,
    format: Format,
) -> String {
    match format {
        Format::Table => {
            let mut out = report.to_table();
            if let Some(note) = prepared.degenerate_note() {
                let _ = writeln!(out, "note: {note}");
            }
            out
        }
        Format::Records => {
            let trace = trace.map(|t| serde_json::to_value(t).expect("trace serialises"));
            records(prepared, report, trace)
        }
        Format::Dot => dot(prepared, report),
    }
}

pub fn records(prepared: &Prepared, report: &ResponsibilityReport, trace: Option<Value>) -> String {
    let doc = report.to_records_json(&prepared.model.ts, trace);
    let mut out = serde_json::to_string_pretty(&doc).expect("records serialise");
    out.push('\n');
    out
}

/// The arena of the empty coalition, with each state annotated by the value
/// of its player and the responsible players filled.
pub fn dot(prepared: &Prepared, report: &ResponsibilityReport) -> String {
    let ts = &prepared.model.ts;
    let setting = prepared.setting();
    let arena = setting.arena(&ts.empty_set());
    let mut notes = vec![String::new(); ts.num_states()];
    for e in &report.entries {
        for s in &e.members {
            notes[s.index()] = if e.members.len() == 1 {
                e.value.to_string()
            } else {
                format!("{}: {}", e.name, e.value)
            };
        }
    }
    let positive = report.positive();
    let players = PlayerSet::blocks(
        ts,
        report
            .entries
            .iter()
            .map(|e| (e.name.clone(), e.members.clone()))
            .collect(),
    );
    let highlight = member_states(&players, ts, &positive);
    arena_dot(
        ts,
        &arena,
        &DotOptions {
            run: prepared.run.as_ref(),
            target: prepared.objective.target(),
            highlight: Some(&highlight),
            annotations: Some(&notes),
        },
    )
}

fn braces(names: &[String]) -> String {
    format!("{{{}}}", names.join(", "))
}

/// One line per iteration: the partition, each witness and the split.
pub fn explain(trace: &[TraceRecord]) -> String {
    let mut out = String::new();
    for r in trace {
        let blocks: Vec<String> = r
            .partition
            .iter()
            .map(|b| format!("B{}={}", b.id, braces(&b.members)))
            .collect();
        let _ = writeln!(out, "iteration {}: {}", r.iteration, blocks.join(" "));
        for w in &r.witnesses {
            let _ = writeln!(
                out,
                "  witness B{}: coalition {}, |delta| {}, frontier {}",
                w.block,
                braces(&w.coalition),
                w.delta.len(),
                braces(&w.frontier)
            );
        }
        match &r.split {
            Some(s) => {
                let _ = writeln!(
                    out,
                    "  split {} off B{} into B{} and B{}",
                    s.state, s.block, s.single, s.rest
                );
            }
            None => out.push_str("  fixpoint\n"),
        }
    }
    out
}
