//! Command implementations behind the binary. Exit codes are the stable
//! contract: 0 the property holds (or a controller exists), 1 it fails
//! (or no controller), 2 errors and undecidable/unimplemented requests.

use std::path::{Path, PathBuf};

use num_traits::Zero;

use crate::cli::dot;
use crate::cli::parser::{parse_model, ModelDocument};
use crate::cli::printer::print_automaton;
use crate::cli::report::{witness_from_report, IterationSummary, Report, Sizes};
use crate::error::{Error, Result};
use crate::exec::accepts;
use crate::model::{
    hide, is_deterministic, is_dta, restrict, validate, TimedAutomaton, TimedWord,
};
use crate::monitor::build_monitor_product;
use crate::region_graph::build_region_graph;
use crate::synthesis::{Outcome, SynthesisResult};
use crate::timed;
use crate::untimed;
use crate::verdict::{Verdict, Witness};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckProblem {
    Snni,
    Csnni,
    Bsnni,
    SnniCp,
    CsnniCp,
}

impl CheckProblem {
    pub fn parse(s: &str) -> Option<CheckProblem> {
        match s {
            "snni" | "snni-vp" => Some(CheckProblem::Snni),
            "csnni" | "csnni-vp" => Some(CheckProblem::Csnni),
            "bsnni" | "bsnni-vp" => Some(CheckProblem::Bsnni),
            "snni-cp" => Some(CheckProblem::SnniCp),
            "csnni-cp" => Some(CheckProblem::CsnniCp),
            _ => None,
        }
    }

    fn id(&self) -> &'static str {
        match self {
            CheckProblem::Snni => "snni-vp",
            CheckProblem::Csnni => "csnni-vp",
            CheckProblem::Bsnni => "bsnni-vp",
            CheckProblem::SnniCp => "snni-cp",
            CheckProblem::CsnniCp => "csnni-cp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthProblem {
    Snni,
    Csnni,
}

impl SynthProblem {
    pub fn parse(s: &str) -> Option<SynthProblem> {
        match s {
            "snni" | "snni-csp" => Some(SynthProblem::Snni),
            "csnni" | "csnni-csp" => Some(SynthProblem::Csnni),
            _ => None,
        }
    }

    fn id(&self) -> &'static str {
        match self {
            SynthProblem::Snni => "snni-csp",
            SynthProblem::Csnni => "csnni-csp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitKind {
    Ta,
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportWhat {
    Automaton,
    RegionGraph,
    Arena,
}

pub fn load(path: &Path, internal: bool) -> Result<ModelDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidModel(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text, internal)
}

fn emit_report(report: &Report, format: OutputFormat) {
    match format {
        OutputFormat::Text => print!("{}", report.to_text()),
        OutputFormat::Json => println!("{}", report.to_json()),
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_ERROR
}

fn run_check(
    problem: CheckProblem,
    a: &TimedAutomaton,
) -> Result<(Option<Verdict>, bool, Option<IterationSummary>)> {
    match problem {
        CheckProblem::Snni => {
            let v = if a.is_clock_free() {
                untimed::check_snni_untimed(a)?
            } else {
                timed::check_snni_timed(a)?
            };
            let holds = v.holds;
            Ok((Some(v), holds, None))
        }
        CheckProblem::Csnni => {
            let v = if a.is_clock_free() {
                untimed::check_csnni_untimed(a)?
            } else {
                timed::check_csnni_timed_dta(a)?
            };
            let holds = v.holds;
            Ok((Some(v), holds, None))
        }
        CheckProblem::Bsnni => {
            if !a.is_clock_free() {
                return Err(Error::InvalidModel(
                    "bisimulation checking of clocked automata is outside the implemented class"
                        .into(),
                ));
            }
            let v = untimed::check_bsnni_untimed(a)?;
            let holds = v.holds;
            Ok((Some(v), holds, None))
        }
        CheckProblem::SnniCp => {
            if a.is_clock_free() {
                let holds = untimed::snni_cp_untimed(a)?;
                Ok((None, holds, None))
            } else {
                let result = timed::synthesize_snni(a)?;
                let holds = result.outcome == Outcome::Controller;
                Ok((None, holds, Some(iteration_summary(&result))))
            }
        }
        CheckProblem::CsnniCp => {
            if a.is_clock_free() {
                let holds = untimed::csnni_cp_untimed(a)?;
                Ok((None, holds, None))
            } else {
                let result = timed::synthesize_csnni_dta(a)?;
                let holds = result.outcome == Outcome::Controller;
                Ok((None, holds, Some(iteration_summary(&result))))
            }
        }
    }
}

fn iteration_summary(result: &SynthesisResult) -> IterationSummary {
    IterationSummary {
        effective: result.effective_iterations,
        total_rounds: result.rounds.len(),
        confirming_round: result.confirming_round,
    }
}

pub fn cmd_check(
    problem: CheckProblem,
    path: &Path,
    automaton: Option<&str>,
    format: OutputFormat,
    internal: bool,
) -> i32 {
    let doc = match load(path, internal) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let a = match doc.get(automaton) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let mut report = Report::new(problem.id(), &path.display().to_string(), &a.name);
    match run_check(problem, a) {
        Err(e) => fail(&e),
        Ok((verdict, holds, iterations)) => {
            if let Some(v) = &verdict {
                report.apply_verdict(v);
            } else {
                report.holds = Some(holds);
                report.sizes = Sizes {
                    locations: a.locations.len(),
                    edges: a.edges.len(),
                    regions: None,
                    arena_nodes: None,
                };
            }
            report.iterations = iterations;
            emit_report(&report, format);
            if holds {
                EXIT_HOLDS
            } else {
                EXIT_FAILS
            }
        }
    }
}

fn run_synth(problem: SynthProblem, a: &TimedAutomaton) -> Result<SynthesisResult> {
    match problem {
        SynthProblem::Snni => {
            if a.is_clock_free() {
                untimed::snni_csp_untimed(a)
            } else {
                timed::synthesize_snni(a)
            }
        }
        SynthProblem::Csnni => timed::synthesize_csnni_dta(a),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_synth(
    problem: SynthProblem,
    path: &Path,
    automaton: Option<&str>,
    emit: EmitKind,
    out: Option<&Path>,
    format: OutputFormat,
    internal: bool,
) -> i32 {
    let doc = match load(path, internal) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let a = match doc.get(automaton) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let started = std::time::Instant::now();
    let result = match run_synth(problem, a) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let mut report = Report::new(problem.id(), &path.display().to_string(), &a.name);
    report.iterations = Some(iteration_summary(&result));
    report.duration_ms = started.elapsed().as_millis() as u64;
    match result.outcome {
        Outcome::Bot => {
            report.outcome = Some("bot".into());
            if let Some(round) = result.rounds.first() {
                report.sizes = Sizes {
                    locations: a.locations.len(),
                    edges: a.edges.len(),
                    regions: None,
                    arena_nodes: Some(round.region_graph.node_count()),
                };
            }
            emit_report(&report, format);
            EXIT_FAILS
        }
        Outcome::Controller => {
            let final_automaton = result
                .final_automaton
                .as_ref()
                .expect("controller outcome has a final automaton");
            report.outcome = Some("controller".into());
            if let Some(v) = &result.verdict {
                report.note = Some(format!("self-verification: {} holds", v.property));
            }
            report.sizes = Sizes {
                locations: final_automaton.locations.len(),
                edges: final_automaton.edges.len(),
                regions: None,
                arena_nodes: result
                    .rounds
                    .first()
                    .map(|r| r.region_graph.node_count()),
            };
            let out_path: PathBuf = match out {
                Some(p) => p.to_path_buf(),
                None => {
                    let ext = match emit {
                        EmitKind::Ta => "controlled.ta",
                        EmitKind::Dot => "controlled.dot",
                        EmitKind::Json => "controlled.json",
                    };
                    path.with_extension(ext)
                }
            };
            let artifact = match emit {
                EmitKind::Ta => print_automaton(final_automaton),
                EmitKind::Dot => dot::automaton_dot(final_automaton),
                EmitKind::Json => report.to_json(),
            };
            if let Err(e) = std::fs::write(&out_path, artifact) {
                return fail(&Error::InvalidModel(format!(
                    "cannot write {}: {e}",
                    out_path.display()
                )));
            }
            if emit == EmitKind::Dot {
                for (i, round) in result.rounds.iter().enumerate() {
                    let round_dot = dot::automaton_dot(&round.arena);
                    let p = out_path.with_extension(format!("round{}.dot", i + 1));
                    if let Err(e) = std::fs::write(&p, round_dot) {
                        return fail(&Error::InvalidModel(format!(
                            "cannot write {}: {e}",
                            p.display()
                        )));
                    }
                }
            }
            report.emitted = Some(out_path.display().to_string());
            emit_report(&report, format);
            EXIT_HOLDS
        }
    }
}

pub fn cmd_info(
    path: &Path,
    automaton: Option<&str>,
    format: OutputFormat,
    internal: bool,
) -> i32 {
    let doc = match load(path, internal) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let a = match doc.get(automaton) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let diagnostics = validate(a);
    let deterministic = match is_deterministic(a) {
        Ok(check) => Some(check.deterministic),
        Err(_) => None, // silent edges
    };
    let dta = is_dta(a);
    let regions = build_region_graph(a).node_count();
    let info = serde_json::json!({
        "schema": crate::cli::report::SCHEMA_VERSION,
        "problem": "info",
        "file": path.display().to_string(),
        "automaton": a.name,
        "clocks": a.clocks.iter().map(|c| c.name.clone()).collect::<Vec<_>>(),
        "locations": a.locations.len(),
        "edges": a.edges.len(),
        "low": a.alphabet.low.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "high": a.alphabet.high.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "controllable": a.alphabet.controllable.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "deterministic": deterministic,
        "dta": dta,
        "regions": regions,
        "diagnostics": diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
    });
    match format {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&info).unwrap()),
        OutputFormat::Text => {
            println!("automaton:  {}", a.name);
            println!("clocks:     {}", a.clocks.len());
            println!("locations:  {}", a.locations.len());
            println!("edges:      {}", a.edges.len());
            println!(
                "low:        {}",
                a.alphabet.low.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
            );
            println!(
                "high:       {}",
                a.alphabet.high.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
            );
            println!(
                "controllable: {}",
                a.alphabet
                    .controllable
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            match deterministic {
                Some(d) => println!("deterministic: {}", if d { "yes" } else { "no" }),
                None => println!("deterministic: n/a (silent edges)"),
            }
            println!("dTA:        {}", if dta { "yes" } else { "no" });
            println!("regions:    {regions}");
            for d in &diagnostics {
                println!("diagnostic: {d}");
            }
        }
    }
    if diagnostics.is_empty() {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    }
}

pub fn cmd_export_dot(
    what: ExportWhat,
    path: &Path,
    automaton: Option<&str>,
    internal: bool,
) -> i32 {
    let doc = match load(path, internal) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let a = match doc.get(automaton) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let rendered = match what {
        ExportWhat::Automaton => Ok(dot::automaton_dot(a)),
        ExportWhat::RegionGraph => {
            let rg = build_region_graph(a);
            Ok(dot::region_graph_dot(a, &rg))
        }
        ExportWhat::Arena => build_monitor_product(a).map(|mp| {
            let rg = build_region_graph(&mp.arena);
            dot::arena_dot(&mp, &rg)
        }),
    };
    match rendered {
        Ok(text) => {
            print!("{text}");
            EXIT_HOLDS
        }
        Err(e) => fail(&e),
    }
}

pub fn cmd_gadget(path: &Path, a1: &str, a2: &str, out: Option<&Path>) -> i32 {
    let doc = match load(path, false) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let first = match doc.get(Some(a1)) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let second = match doc.get(Some(a2)) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let gadget = match timed::build_inclusion_gadget(first, second) {
        Ok(g) => g,
        Err(e) => return fail(&e),
    };
    let text = print_automaton(&gadget);
    match out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                return fail(&Error::InvalidModel(format!(
                    "cannot write {}: {e}",
                    p.display()
                )));
            }
            println!("wrote {}", p.display());
        }
        None => print!("{text}"),
    }
    EXIT_HOLDS
}

/// Re-execute the witness of a failing report and confirm the verdict.
pub fn cmd_replay(report_path: &Path) -> i32 {
    let text = match std::fs::read_to_string(report_path) {
        Ok(t) => t,
        Err(e) => {
            return fail(&Error::InvalidModel(format!(
                "cannot read {}: {e}",
                report_path.display()
            )))
        }
    };
    let report = match Report::from_json(&text) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let doc = match load(Path::new(&report.file), true) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let a = match doc.get(Some(&report.automaton)) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    match replay_report(&report, a) {
        Ok(true) => {
            println!("witness confirmed");
            EXIT_HOLDS
        }
        Ok(false) => {
            println!("witness rejected");
            EXIT_FAILS
        }
        Err(e) => fail(&e),
    }
}

fn replay_report(report: &Report, a: &TimedAutomaton) -> Result<bool> {
    let witness = match &report.witness {
        Some(w) => witness_from_report(w)?,
        None => {
            return Err(Error::InvalidModel(
                "the report carries no witness to replay".into(),
            ))
        }
    };
    match witness {
        Witness::TimedWord(word) => replay_separating_word(a, &word),
        Witness::Word(actions) => {
            let word = TimedWord::new(
                actions
                    .into_iter()
                    .map(|act| (num_rational::BigRational::zero(), act))
                    .collect(),
            );
            replay_separating_word(a, &word)
        }
        Witness::UnmatchedState { state, side: _ } => {
            // Relation witnesses are confirmed by re-running the decider.
            let problem = CheckProblem::parse(&report.problem)
                .ok_or_else(|| Error::InvalidModel(format!("bad problem `{}`", report.problem)))?;
            let (verdict, holds, _) = run_check(problem, a)?;
            if holds {
                return Ok(false);
            }
            match verdict.and_then(|v| v.witness) {
                Some(Witness::UnmatchedState { state: s, .. }) => Ok(s == state),
                _ => Ok(false),
            }
        }
    }
}

/// A separating word must be generated by the abstraction and rejected by
/// the restriction.
fn replay_separating_word(a: &TimedAutomaton, word: &TimedWord) -> Result<bool> {
    let hidden = hide(a, &a.alphabet.high)?;
    let restricted = restrict(a, &a.alphabet.high)?;
    Ok(accepts(&hidden, word)? && !accepts(&restricted, word)?)
}
