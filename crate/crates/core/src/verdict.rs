//! Verdicts shared by the untimed and timed checkers.

use std::fmt;
use std::time::Duration;

use crate::model::{Action, TimedWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Snni,
    Csnni,
    Bsnni,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Property::Snni => "SNNI",
            Property::Csnni => "CSNNI",
            Property::Bsnni => "BSNNI",
        };
        write!(f, "{s}")
    }
}

/// Evidence for a failed check: a separating trace, or a state of the
/// abstracted (or restricted) system that no partner state can match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A word generated by the abstraction but not by the restriction.
    Word(Vec<Action>),
    /// Timed variant of the same separation.
    TimedWord(TimedWord),
    /// State with no simulating (or bisimilar) partner.
    UnmatchedState { state: String, side: String },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Word(w) => {
                if w.is_empty() {
                    write!(f, "eps")
                } else {
                    write!(
                        f,
                        "{}",
                        w.iter().map(|a| a.as_str()).collect::<Vec<_>>().join(".")
                    )
                }
            }
            Witness::TimedWord(w) => write!(f, "{w}"),
            Witness::UnmatchedState { state, side } => {
                write!(f, "state {state} of {side} has no matching partner")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerdictStats {
    pub locations: usize,
    pub edges: usize,
    pub regions: Option<usize>,
    pub arena_nodes: Option<usize>,
    pub duration: Duration,
}

/// Outcome of one property check. `holds == false` implies a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub property: Property,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub note: Option<String>,
    pub stats: VerdictStats,
}

impl Verdict {
    pub fn holds(property: Property) -> Verdict {
        Verdict {
            property,
            holds: true,
            witness: None,
            note: None,
            stats: VerdictStats::default(),
        }
    }

    pub fn fails(property: Property, witness: Witness) -> Verdict {
        Verdict {
            property,
            holds: false,
            witness: Some(witness),
            note: None,
            stats: VerdictStats::default(),
        }
    }

    pub fn with_note(mut self, note: &str) -> Verdict {
        self.note = Some(note.to_string());
        self
    }
}
