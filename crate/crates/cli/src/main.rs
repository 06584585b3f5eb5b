mod args;
mod output;
mod pipeline;

use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use backresp::generate::{generate, GeneratorSpec};
use backresp::ingest::serialize_explicit;
use backresp::model::{ObjectiveKind, StateId};
use backresp::refine::{refine_loop, HeuristicsConfig, RefineLimits, RefineOutcome};
use backresp::resp::{
    oracle_shapley, positivity_reach_opt, positivity_set_buechi_opt, shapley_exact, BuechiOptions,
    PayoffGame, PlayerKind, PreorderReading, ResponsibilityReport,
};
use backresp::Mode;
use clap::Parser;
use serde_json::json;

use args::{
    AnalyzeArgs, Cli, Command, ExportArgs, Format, HeuristicArgs, PositivityArgs, RefineArgs,
};
use pipeline::{CliError, Prepared};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    let timeout = cli.timeout_s.map(Duration::from_secs_f64);
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let _ = tx.send(run(cli.command));
    });
    let result = match timeout {
        Some(t) => rx.recv_timeout(t).unwrap_or_else(|_| {
            Err(CliError::Refused(format!(
                "timed out after {} s",
                t.as_secs_f64()
            )))
        }),
        None => rx.recv().expect("analysis thread reports back"),
    };
    match result {
        Ok(out) => {
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Analyze(a) => analyze(&a),
        Command::Oracle(a) => oracle(&a),
        Command::Refine(a) => refine(&a),
        Command::Positivity(a) => positivity(&a),
        Command::Generate(a) => {
            let spec = GeneratorSpec::from_name(&a.family, a.size)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let doc = generate(&spec).map_err(|e| CliError::Input(e.to_string()))?;
            write_or_return(a.output.as_deref(), serialize_explicit(&doc))
        }
        Command::Export(a) => export(&a),
    }
}

fn write_or_return(path: Option<&std::path::Path>, text: String) -> Result<String, CliError> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn exact(prepared: &Prepared, cap: usize) -> Result<ResponsibilityReport, CliError> {
    let pg = PayoffGame::new(prepared.setting(), prepared.players());
    Ok(shapley_exact(&pg, cap)?.padded(&prepared.all_players()))
}

fn analyze(a: &AnalyzeArgs) -> Result<String, CliError> {
    let prepared = Prepared::load(&a.input)?;
    let report = exact(&prepared, a.shapley_cap)?;
    Ok(output::render(&prepared, &report, None, a.input.format))
}

fn oracle(a: &AnalyzeArgs) -> Result<String, CliError> {
    let prepared = Prepared::load(&a.input)?;
    let report = oracle_shapley(
        &prepared.model.ts,
        &prepared.objective,
        prepared.run.as_ref().map(|r| r.run()),
        prepared.mode,
        &prepared.all_players(),
    )?;
    Ok(output::render(&prepared, &report, None, a.input.format))
}

fn config(h: &HeuristicArgs) -> (HeuristicsConfig, RefineLimits) {
    (
        HeuristicsConfig {
            initial_blocks: h.initial_blocks,
            select: h.select,
            refine: h.refine,
            seed: h.seed,
        },
        RefineLimits {
            block_cap: h.block_cap,
            max_games: h.max_games,
        },
    )
}

fn refined<'a>(
    prepared: &'a Prepared,
    h: &HeuristicArgs,
) -> Result<(PayoffGame<'a>, RefineOutcome), CliError> {
    let pg = PayoffGame::new(prepared.setting(), prepared.players());
    let (config, limits) = config(h);
    let outcome = refine_loop(&pg, &config, limits)?;
    Ok((pg, outcome))
}

/// Refinement, then exact values over the responsible players. When those
/// are too many for exact values, the refusal names them.
fn refine_report(
    prepared: &Prepared,
    h: &HeuristicArgs,
    cap: usize,
) -> Result<(ResponsibilityReport, RefineOutcome), CliError> {
    let (pg, outcome) = refined(prepared, h)?;
    let reduced = pg.with_players(pg.players().restrict(outcome.responsible.iter().copied()));
    let report = shapley_exact(&reduced, cap).map_err(|e| {
        let names: Vec<&str> = outcome
            .responsible
            .iter()
            .map(|&p| pg.players().get(p).name.as_str())
            .collect();
        CliError::Refused(format!("{e}\nresponsible: {}", names.join(" ")))
    })?;
    Ok((report.padded(&prepared.all_players()), outcome))
}

fn refine(a: &RefineArgs) -> Result<String, CliError> {
    let prepared = Prepared::load(&a.input)?;
    let (report, outcome) = refine_report(&prepared, &a.heuristics, a.shapley_cap)?;
    let mut out = String::new();
    if a.explain && a.input.format == Format::Table {
        out.push_str(&output::explain(&outcome.trace));
    }
    let trace = a.explain.then_some(outcome.trace.as_slice());
    out.push_str(&output::render(&prepared, &report, trace, a.input.format));
    Ok(out)
}

fn positivity(a: &PositivityArgs) -> Result<String, CliError> {
    let prepared = Prepared::load(&a.input)?;
    let setting = prepared.setting();
    let singles = prepared.all_players().kind() == PlayerKind::States;
    let optimistic = prepared.mode == Mode::Optimistic;
    let (method, names): (&str, Vec<String>) = match prepared.objective.kind() {
        ObjectiveKind::Reachability if singles && optimistic => {
            let set = positivity_reach_opt(&setting)?;
            (
                "reachability-optimistic",
                state_names(&prepared, set.ones()),
            )
        }
        ObjectiveKind::Buechi if singles && optimistic => {
            let opts = BuechiOptions {
                preorder: if a.preorder_literal {
                    PreorderReading::Literal
                } else {
                    PreorderReading::Engraved
                },
                ..BuechiOptions::default()
            };
            let set = positivity_set_buechi_opt(&setting, opts)?;
            ("buechi-optimistic", state_names(&prepared, set.ones()))
        }
        _ => {
            let (pg, outcome) = refined(&prepared, &a.heuristics)?;
            let names = outcome
                .responsible
                .iter()
                .map(|&p| pg.players().get(p).name.clone())
                .collect();
            ("refinement", names)
        }
    };
    match a.input.format {
        Format::Table => Ok(names.iter().map(|n| format!("{n}\n")).collect()),
        Format::Records => {
            let doc = json!({ "method": method, "responsible": names });
            Ok(format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serialises")
            ))
        }
        Format::Dot => Err(CliError::Input(
            "positivity has no DOT output; use analyze or refine".into(),
        )),
    }
}

fn state_names(prepared: &Prepared, ids: impl Iterator<Item = usize>) -> Vec<String> {
    ids.map(|i| prepared.model.ts.name(StateId::from(i)).to_string())
        .collect()
}

fn export(a: &ExportArgs) -> Result<String, CliError> {
    let prepared = Prepared::load(&a.input)?;
    let format = match a.input.format {
        Format::Table => Format::Records,
        f => f,
    };
    let (report, trace) = if a.via_refine {
        let (report, outcome) = refine_report(&prepared, &a.heuristics, a.shapley_cap)?;
        (report, Some(outcome.trace))
    } else {
        (exact(&prepared, a.shapley_cap)?, None)
    };
    let text = output::render(&prepared, &report, trace.as_deref(), format);
    write_or_return(Some(&a.output), text)
}
