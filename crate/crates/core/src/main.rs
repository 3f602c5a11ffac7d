use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use niva::cli::{
    cmd_check, cmd_export_dot, cmd_gadget, cmd_info, cmd_replay, cmd_synth, CheckProblem,
    EmitKind, ExportWhat, OutputFormat, SynthProblem, EXIT_ERROR,
};

/// Non-interference verification and controller synthesis for timed and
/// finite automata.
#[derive(Parser)]
#[command(name = "niva", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a verification or control problem.
    Check {
        /// snni | csnni | bsnni | snni-cp | csnni-cp
        problem: String,
        /// Model file in the textual format.
        file: PathBuf,
        /// Automaton name (defaults to the first in the file).
        #[arg(long)]
        automaton: Option<String>,
        /// text | json
        #[arg(long, default_value = "text")]
        format: String,
        /// Accept difference atoms in guards (synthesized models).
        #[arg(long)]
        internal: bool,
    },
    /// Synthesize a most-permissive controller.
    Synth {
        /// snni | csnni
        problem: String,
        file: PathBuf,
        #[arg(long)]
        automaton: Option<String>,
        /// ta | dot | json
        #[arg(long, default_value = "ta")]
        emit: String,
        /// Output path for the synthesized artifact.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        internal: bool,
    },
    /// Summarize an automaton: alphabet, determinism, class, regions.
    Info {
        file: PathBuf,
        #[arg(long)]
        automaton: Option<String>,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        internal: bool,
    },
    /// Export Graphviz views.
    Export {
        /// Only `dot` is supported.
        kind: String,
        /// automaton | regiongraph | arena
        what: String,
        file: PathBuf,
        #[arg(long)]
        automaton: Option<String>,
        #[arg(long)]
        internal: bool,
    },
    /// Build the language-inclusion gadget from two automata in a file.
    Gadget {
        file: PathBuf,
        a1: String,
        a2: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-execute the witness of a stored report.
    Replay { report: PathBuf },
}

fn parse_format(s: &str) -> Option<OutputFormat> {
    match s {
        "text" => Some(OutputFormat::Text),
        "json" => Some(OutputFormat::Json),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check {
            problem,
            file,
            automaton,
            format,
            internal,
        } => match (CheckProblem::parse(&problem), parse_format(&format)) {
            (Some(p), Some(f)) => cmd_check(p, &file, automaton.as_deref(), f, internal),
            (None, _) => {
                eprintln!("error: unknown problem `{problem}`");
                EXIT_ERROR
            }
            (_, None) => {
                eprintln!("error: unknown format `{format}`");
                EXIT_ERROR
            }
        },
        Command::Synth {
            problem,
            file,
            automaton,
            emit,
            out,
            format,
            internal,
        } => {
            let kind = match emit.as_str() {
                "ta" => Some(EmitKind::Ta),
                "dot" => Some(EmitKind::Dot),
                "json" => Some(EmitKind::Json),
                _ => None,
            };
            match (SynthProblem::parse(&problem), kind, parse_format(&format)) {
                (Some(p), Some(k), Some(f)) => {
                    cmd_synth(p, &file, automaton.as_deref(), k, out.as_deref(), f, internal)
                }
                _ => {
                    eprintln!("error: bad synth arguments");
                    EXIT_ERROR
                }
            }
        }
        Command::Info {
            file,
            automaton,
            format,
            internal,
        } => match parse_format(&format) {
            Some(f) => cmd_info(&file, automaton.as_deref(), f, internal),
            None => {
                eprintln!("error: unknown format `{format}`");
                EXIT_ERROR
            }
        },
        Command::Export {
            kind,
            what,
            file,
            automaton,
            internal,
        } => {
            if kind != "dot" {
                eprintln!("error: unknown export kind `{kind}`");
                return ExitCode::from(EXIT_ERROR as u8);
            }
            let what = match what.as_str() {
                "automaton" => Some(ExportWhat::Automaton),
                "regiongraph" => Some(ExportWhat::RegionGraph),
                "arena" => Some(ExportWhat::Arena),
                _ => None,
            };
            match what {
                Some(w) => cmd_export_dot(w, &file, automaton.as_deref(), internal),
                None => {
                    eprintln!("error: unknown export target");
                    EXIT_ERROR
                }
            }
        }
        Command::Gadget { file, a1, a2, out } => cmd_gadget(&file, &a1, &a2, out.as_deref()),
        Command::Replay { report } => cmd_replay(&report),
    };
    ExitCode::from(code as u8)
}
