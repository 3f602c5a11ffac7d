//! Small example automata shared by the documentation, unit tests and the
//! acceptance suite. The `models/` directory at the repository root holds
//! the same systems in the textual format.

use crate::builder::AutomatonBuilder;
use crate::model::{untime, AlphabetSpec, TimedAutomaton};

/// High action then a low action: the low view reveals the high one.
pub fn aa() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("Aa");
    b.low(&["l"]).high(&["h"]).initial("q0");
    b.edge("q0", "h", "", &[], "q2");
    b.edge("q2", "l", "", &[], "q3");
    b.build().unwrap()
}

/// Low and high branch independently from the initial location.
pub fn ab() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("Ab");
    b.low(&["l"]).high(&["h"]).initial("q0");
    b.edge("q0", "l", "", &[], "q1");
    b.edge("q0", "h", "", &[], "q2");
    b.build().unwrap()
}

/// Timed variant where the high branch unlocks late low behaviour.
pub fn ag() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("Ag");
    b.clocks(&["x"]).low(&["l"]).high(&["h"]).initial("q0");
    b.edge("q0", "l", "x<2", &[], "q1");
    b.edge("q0", "h", "", &[], "q2");
    b.edge("q2", "l", "", &[], "q3");
    b.build().unwrap()
}

pub fn ah() -> TimedAutomaton {
    let mut a = untime(&ag());
    a.name = "Ah".into();
    a
}

/// Timed automaton whose guards make the high branch indistinguishable.
pub fn aj() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("Aj");
    b.clocks(&["x"]).low(&["l1", "l2"]).high(&["h"]).initial("q0");
    b.edge("q0", "l1", "x>2", &[], "q1");
    b.edge("q1", "l1", "", &[], "q2");
    b.edge("q0", "h", "", &[], "q3");
    b.edge("q3", "l1", "x>2", &[], "q4");
    b.edge("q4", "l1", "", &[], "q5");
    b.edge("q4", "l2", "x<2", &[], "q5");
    b.build().unwrap()
}

pub fn ak() -> TimedAutomaton {
    let mut a = untime(&aj());
    a.name = "Ak".into();
    a
}

/// One-clock family: low at `x >= 2`, high at `x >= k` then low.
pub fn ak_family(k: i64) -> TimedAutomaton {
    let mut b = AutomatonBuilder::new(&format!("A{k}"));
    b.clocks(&["x"])
        .low(&["l"])
        .high(&["h"])
        .controllable(&["h"])
        .initial("0");
    b.edge("0", "l", "x>=2", &[], "1");
    b.edge("0", "h", &format!("x>={k}"), &[], "2");
    b.edge("2", "l", "", &[], "3");
    b.build().unwrap()
}

/// Nondeterministic low split; the high branch merges the choice.
pub fn ac() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("Ac");
    b.low(&["l1", "l2", "l3"])
        .high(&["h"])
        .controllable(&["l2", "l3"])
        .initial("q0");
    b.edge("q0", "l1", "", &[], "q1");
    b.edge("q0", "l1", "", &[], "q2");
    b.edge("q1", "l2", "", &[], "q3");
    b.edge("q2", "l3", "", &[], "q4");
    b.edge("q0", "h", "", &[], "q5");
    b.edge("q5", "l1", "", &[], "q6");
    b.edge("q6", "l2", "", &[], "q7");
    b.edge("q6", "l3", "", &[], "q8");
    b.build().unwrap()
}

/// Like `ac` but the high branch splits as well, restoring cosimulation.
pub fn ad() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("Ad");
    b.low(&["l1", "l2", "l3"]).high(&["h"]).initial("q0");
    b.edge("q0", "l1", "", &[], "q1");
    b.edge("q1", "l2", "", &[], "q2");
    b.edge("q1", "l3", "", &[], "q3");
    b.edge("q0", "h", "", &[], "q4");
    b.edge("q4", "l1", "", &[], "q5");
    b.edge("q4", "l1", "", &[], "q6");
    b.edge("q5", "l2", "", &[], "q7");
    b.edge("q6", "l3", "", &[], "q8");
    b.build().unwrap()
}

/// Deterministic automaton that is cosimulation-secure but not
/// bisimulation-secure.
pub fn ae() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("Ae");
    b.low(&["l"]).high(&["h"]).controllable(&["l", "h"]).initial("q0");
    b.edge("q0", "l", "", &[], "q1");
    b.edge("q0", "h", "", &[], "q2");
    b.build().unwrap()
}

pub fn af() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("Af");
    b.low(&["l"]).high(&["h"]).initial("q0");
    b.edge("q0", "l", "", &[], "q1");
    b.edge("q0", "h", "", &[], "q2");
    b.edge("q2", "l", "", &[], "q3");
    b.build().unwrap()
}

/// Two-step high chain; restricting the second high action breaks the
/// bisimulation property.
pub fn ai() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("Ai");
    b.low(&["l"]).high(&["h1", "h2"]).controllable(&["h2"]).initial("q0");
    b.edge("q0", "l", "", &[], "q1");
    b.edge("q0", "h1", "", &[], "q2");
    b.edge("q2", "h2", "", &[], "q3");
    b.edge("q3", "l", "", &[], "q4");
    b.build().unwrap()
}

/// Finite automaton whose largest secure subsystem is itself.
pub fn d() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("D");
    b.low(&["a"]).high(&["h"]).controllable(&["a", "h"]).initial("0");
    b.edge("0", "a", "", &[], "3");
    b.edge("0", "h", "", &[], "1");
    b.edge("1", "a", "", &[], "2");
    b.build().unwrap()
}

/// Timed automaton controlled by forcing a move before the high guard
/// opens.
pub fn h_aut() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("H");
    b.clocks(&["x"])
        .low(&["a", "b"])
        .high(&["h"])
        .controllable(&["a"])
        .initial("0");
    b.edge("0", "a", "x>1", &[], "1");
    b.edge("0", "h", "x>4", &[], "2");
    b.edge("2", "b", "", &[], "3");
    b.build().unwrap()
}

/// Timed automaton where one round of control is not enough.
pub fn k_aut() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("K");
    b.clocks(&["x"])
        .low(&["a", "b"])
        .high(&["h"])
        .controllable(&["a"])
        .initial("0");
    b.edge("0", "a", "x>=2", &[], "1");
    b.edge("0", "h", "", &[], "4");
    b.edge("1", "h", "", &[], "2");
    b.edge("2", "b", "", &[], "3");
    b.edge("4", "a", "x>=2", &[], "5");
    b.build().unwrap()
}

/// Deterministic timed automaton where restricting the controllable set
/// fails but a controller with an invariant cut succeeds.
pub fn acp() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("Acp");
    b.clocks(&["x"])
        .low(&["l1", "l2"])
        .high(&["h"])
        .controllable(&["l1"])
        .initial("q0");
    b.edge("q0", "l1", "x>1", &[], "q1");
    b.edge("q0", "h", "x>4", &[], "q2");
    b.edge("q2", "l2", "", &[], "q3");
    b.build().unwrap()
}

/// Reference controlled shape for `acp`: low action inside `1 < x <= 4`.
pub fn acp_controlled_reference() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("CAcp");
    b.clocks(&["x"])
        .low(&["l1", "l2"])
        .high(&["h"])
        .controllable(&["l1"])
        .initial("q0");
    b.invariant("q0", "x<=4");
    b.edge("q0", "l1", "x>1", &[], "q1");
    b.build().unwrap()
}

/// Candidate controllers for `ac` that are individually secure although
/// their union is not.
pub fn c1_ac() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("C1Ac");
    b.low(&["l1", "l2", "l3"]).high(&["h"]).initial("q0");
    b.edge("q0", "l1", "", &[], "q1");
    b.edge("q0", "l1", "", &[], "q2");
    b.edge("q1", "l2", "", &[], "q3");
    b.edge("q2", "l3", "", &[], "q4");
    b.edge("q0", "h", "", &[], "q5");
    b.edge("q5", "l1", "", &[], "q6");
    b.edge("q6", "l2", "", &[], "q7");
    b.build().unwrap()
}

pub fn c2_ac() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("C2Ac");
    b.low(&["l1", "l2", "l3"]).high(&["h"]).initial("q0");
    b.edge("q0", "l1", "", &[], "q1");
    b.edge("q0", "l1", "", &[], "q2");
    b.edge("q1", "l2", "", &[], "q3");
    b.edge("q2", "l3", "", &[], "q4");
    b.edge("q0", "h", "", &[], "q5");
    b.edge("q5", "l1", "", &[], "q6");
    b.edge("q6", "l3", "", &[], "q8");
    b.build().unwrap()
}

/// Candidate controllers for `ae`, each secure, whose union is `ae`.
pub fn c1_ae() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("C1Ae");
    b.low(&["l"]).high(&["h"]).initial("q0");
    b.edge("q0", "l", "", &[], "q1");
    b.build().unwrap()
}

pub fn c2_ae() -> TimedAutomaton {
    let mut b = AutomatonBuilder::new("C2Ae");
    b.low(&["l"]).high(&["h"]).initial("q0");
    b.edge("q0", "h", "", &[], "q2");
    b.build().unwrap()
}

/// One location, no edges, true invariant; neutral element for products.
pub fn single_location(name: &str, alphabet: &AlphabetSpec) -> TimedAutomaton {
    let mut b = AutomatonBuilder::new(name);
    b.initial("c0");
    let mut a = b.build().unwrap();
    a.alphabet = alphabet.clone();
    a
}
