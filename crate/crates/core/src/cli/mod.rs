//! Textual model format, reports, Graphviz export and command routing.

pub mod commands;
pub mod dot;
pub mod parser;
pub mod printer;
pub mod report;

pub use commands::{
    cmd_check, cmd_export_dot, cmd_gadget, cmd_info, cmd_replay, cmd_synth, CheckProblem,
    EmitKind, ExportWhat, OutputFormat, SynthProblem, EXIT_ERROR, EXIT_FAILS, EXIT_HOLDS,
};
pub use parser::{parse_model, ModelDocument};
pub use printer::print_automaton;
pub use report::Report;
