//! Graphviz export. Attribute conventions are listed in `docs/dot.md`.

use std::fmt::Write;

use super::{GameArena, Player};
use crate::model::{RunIndex, StateSet, TransitionSystem};

#[derive(Clone, Copy, Debug, Default)]
pub struct DotOptions<'a> {
    /// Run whose transitions are drawn in red.
    pub run: Option<&'a RunIndex>,
    /// Objective target, drawn with a double border.
    pub target: Option<&'a StateSet>,
    /// Filled nodes, e.g. the responsible states.
    pub highlight: Option<&'a StateSet>,
    /// Extra label line per state, e.g. a responsibility value.
    pub annotations: Option<&'a [String]>,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

pub fn arena_dot(ts: &TransitionSystem, arena: &GameArena, opts: &DotOptions<'_>) -> String {
    let mut out =
        String::from("digraph arena {\n  rankdir=LR;\n  node [fontname=\"Helvetica\"];\n");
    out.push_str("  __init [shape=point, label=\"\"];\n");
    let _ = writeln!(out, "  __init -> {};", quote(ts.name(arena.initial())));
    for s in ts.states() {
        let mut label = escape(ts.name(s));
        if let Some(extra) = opts.annotations.and_then(|a| a.get(s.index())) {
            if !extra.is_empty() {
                label.push_str("\\n");
                label.push_str(&escape(extra));
            }
        }
        let shape = match arena.owner(s) {
            Player::Sat => "box",
            Player::Unsat => "ellipse",
        };
        let mut attrs = vec![format!("label=\"{label}\""), format!("shape={shape}")];
        if opts.target.is_some_and(|t| t.contains(s.index())) {
            attrs.push("peripheries=2".into());
        }
        if opts.highlight.is_some_and(|h| h.contains(s.index())) {
            attrs.push("style=filled".into());
            attrs.push("fillcolor=\"#ffd27f\"".into());
        }
        let _ = writeln!(out, "  {} [{}];", quote(ts.name(s)), attrs.join(", "));
    }
    for s in ts.states() {
        for &t in arena.successors(s) {
            let on_run = opts.run.is_some_and(|r| r.successor(s) == Some(t));
            let attrs = if on_run {
                " [color=red, penwidth=2]"
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "  {} -> {}{};",
                quote(ts.name(s)),
                quote(ts.name(t)),
                attrs
            );
        }
    }
    out.push_str("}\n");
    out
}

/// Convenience for tests: state names drawn filled in a DOT document.
pub fn highlighted_nodes(dot: &str) -> Vec<String> {
    dot.lines()
        .filter(|l| l.contains("style=filled"))
        .filter_map(|l| l.trim().strip_prefix('"'))
        .filter_map(|l| l.split('"').next())
        .map(str::to_string)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::game::{Mode, Setting};

    #[test]
    fn dot_marks_owners_run_and_highlights() {
        let inst = fixtures::fig3();
        let run = inst.run_index().unwrap();
        let s = Setting::new(&inst.ts, &inst.objective, Some(&run), Mode::Optimistic).unwrap();
        let arena = s.arena(&inst.ts.empty_set());
        let hi = inst.ts.set_of_names(["s2"]).unwrap();
        let dot = arena_dot(
            &inst.ts,
            &arena,
            &DotOptions {
                run: Some(&run),
                target: inst.objective.target(),
                highlight: Some(&hi),
                annotations: None,
            },
        );
        assert!(dot.contains("\"s4\" [label=\"s4\", shape=box]"));
        assert!(dot.contains("\"s0\" -> \"s1\" [color=red, penwidth=2];"));
        assert_eq!(highlighted_nodes(&dot), vec!["s2".to_string()]);
    }
}
