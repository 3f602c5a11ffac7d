//! Verification and controller synthesis for non-interference properties
//! (SNNI, CSNNI, BSNNI) of timed and finite automata.
//!
//! The library models systems as timed automata over an alphabet partitioned
//! into low-level and high-level actions. Verification compares the
//! restriction `A\Σh` (high edges removed) against the abstraction `A/Σh`
//! (high edges hidden). Synthesis computes the most permissive controller
//! enforcing SNNI on the class of automata whose restriction is
//! deterministic, by solving a sequence of safety games on region graphs.

pub mod builder;
pub mod cli;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod game;
pub mod model;
pub mod monitor;
pub mod region;
pub mod region_graph;
pub mod synthesis;
pub mod timed;
pub mod untimed;
pub mod verdict;
pub mod zone;

pub use error::{Error, Result};
pub use model::{
    hide, is_deterministic, is_dta, product, restrict, untime, validate, Action, AlphabetSpec,
    Atom, ClockConstraint, ClockId, Edge, Label, LocId, Rel, TimedAutomaton, TimedWord,
};
pub use verdict::{Property, Verdict, Witness};
