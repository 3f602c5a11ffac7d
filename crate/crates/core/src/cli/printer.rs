//! Render automata back into the textual model format. Difference atoms
//! (present in synthesized models) print as `x-y<=c`; such files re-parse
//! only in internal mode.

use crate::model::{Atom, ClockConstraint, Rel, TimedAutomaton};

fn rel_str(rel: Rel) -> &'static str {
    match rel {
        Rel::Lt => "<",
        Rel::Le => "<=",
        Rel::Eq => "=",
        Rel::Ge => ">=",
        Rel::Gt => ">",
    }
}

pub fn constraint_string(a: &TimedAutomaton, c: &ClockConstraint) -> String {
    c.atoms
        .iter()
        .map(|atom| match *atom {
            Atom::Simple { clock, rel, constant } => {
                format!("{}{}{}", a.clock_name(clock), rel_str(rel), constant)
            }
            Atom::Diff { left, right, rel, constant } => format!(
                "{}-{}{}{}",
                a.clock_name(left),
                a.clock_name(right),
                rel_str(rel),
                constant
            ),
        })
        .collect::<Vec<_>>()
        .join(" && ")
}

pub fn print_automaton(a: &TimedAutomaton) -> String {
    let mut out = String::new();
    out.push_str(&format!("automaton {}\n", sanitize(&a.name)));
    if !a.clocks.is_empty() {
        out.push_str("clocks");
        for c in &a.clocks {
            out.push_str(&format!(" {}", c.name));
        }
        out.push('\n');
    }
    out.push_str("alphabet low:");
    for l in &a.alphabet.low {
        out.push_str(&format!(" {l}"));
    }
    out.push_str(" ; high:");
    for h in &a.alphabet.high {
        out.push_str(&format!(" {h}"));
    }
    out.push('\n');
    if !a.alphabet.controllable.is_empty() {
        out.push_str("controllable:");
        for c in &a.alphabet.controllable {
            out.push_str(&format!(" {c}"));
        }
        out.push('\n');
    }
    out.push_str(&format!("initial {}\n", sanitize(a.location_name(a.initial))));
    for (i, loc) in a.locations.iter().enumerate() {
        let inv = &a.invariants[i];
        if inv.is_top() {
            out.push_str(&format!("location {}\n", sanitize(&loc.name)));
        } else {
            out.push_str(&format!(
                "location {} invariant \"{}\"\n",
                sanitize(&loc.name),
                constraint_string(a, inv)
            ));
        }
    }
    for e in &a.edges {
        out.push_str(&format!(
            "edge {} -> {} on {}",
            sanitize(a.location_name(e.source)),
            sanitize(a.location_name(e.target)),
            e.label
        ));
        if !e.guard.is_top() {
            out.push_str(&format!(" guard \"{}\"", constraint_string(a, &e.guard)));
        }
        if !e.resets.is_empty() {
            let names: Vec<&str> = e.resets.iter().map(|c| a.clock_name(*c)).collect();
            out.push_str(&format!(" reset {{{}}}", names.join(" ")));
        }
        out.push('\n');
    }
    out
}

pub fn print_document(automata: &[&TimedAutomaton]) -> String {
    automata
        .iter()
        .map(|a| print_automaton(a))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Model-format names cannot contain whitespace or quotes; synthesized
/// names (products, regions) are folded to a safe character set.
fn sanitize(name: &str) -> String {
    let mut out: String = name
        .chars()
        .map(|c| {
            if c.is_whitespace() || c == '"' || c == '#' {
                '_'
            } else {
                c
            }
        })
        .collect();
    if out.is_empty() {
        out.push('_');
    }
    out
}
