//! Shared helpers for the integration suites: a seeded generator of small
//! clock-free automata and an independent brute-force language oracle.
#![allow(dead_code)] // each test binary uses a different subset

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;

use niva::builder::AutomatonBuilder;
use niva::model::{Action, Label, LocId, TimedAutomaton};

/// Random clock-free automaton: at most `max_states` states over low
/// actions {l1, l2} and high action {h}, with occasional silent edges.
pub fn random_nfa(rng: &mut impl Rng, max_states: usize, with_eps: bool) -> TimedAutomaton {
    let n = rng.gen_range(1..=max_states);
    let mut b = AutomatonBuilder::new("rnd");
    b.low(&["l1", "l2"]).high(&["h"]);
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    b.initial(&names[0]);
    for name in &names {
        b.location(name);
    }
    for src in 0..n {
        for act in ["l1", "l2", "h"] {
            let mut fanout = 0;
            while fanout < 2 && rng.gen_bool(0.35) {
                let tgt = rng.gen_range(0..n);
                b.edge(&names[src], act, "", &[], &names[tgt]);
                fanout += 1;
            }
        }
        if with_eps && rng.gen_bool(0.15) {
            let tgt = rng.gen_range(0..n);
            b.edge(&names[src], "eps", "", &[], &names[tgt]);
        }
    }
    b.build().unwrap()
}

/// Pick a random controllable subset of the declared alphabet.
pub fn randomize_controllable(rng: &mut impl Rng, a: &mut TimedAutomaton) {
    let all: Vec<Action> = a.alphabet.all().into_iter().collect();
    a.alphabet.controllable = all
        .into_iter()
        .filter(|_| rng.gen_bool(0.5))
        .collect();
}

fn eps_close(a: &TimedAutomaton, set: &BTreeSet<LocId>) -> BTreeSet<LocId> {
    let mut out = set.clone();
    let mut queue: VecDeque<LocId> = set.iter().copied().collect();
    while let Some(l) = queue.pop_front() {
        for (_, e) in a.edges_from(l) {
            if e.label.is_epsilon() && out.insert(e.target) {
                queue.push_back(e.target);
            }
        }
    }
    out
}

fn visible_step(a: &TimedAutomaton, set: &BTreeSet<LocId>, act: &Action) -> BTreeSet<LocId> {
    let mut mid = BTreeSet::new();
    for &l in &eps_close(a, set) {
        for (_, e) in a.edges_from(l) {
            if e.label == Label::Act(act.clone()) {
                mid.insert(e.target);
            }
        }
    }
    eps_close(a, &mid)
}

/// Brute-force inclusion of prefix-closed languages: breadth-first word
/// enumeration with a visited cutoff on (state set, state set) pairs,
/// which covers every word up to the pair-count bound.
pub fn oracle_included(a1: &TimedAutomaton, a2: &TimedAutomaton) -> bool {
    let mut actions: Vec<Action> = a1
        .alphabet
        .all()
        .union(&a2.alphabet.all())
        .cloned()
        .collect();
    actions.sort();
    let start = (
        eps_close(a1, &BTreeSet::from([a1.initial])),
        eps_close(a2, &BTreeSet::from([a2.initial])),
    );
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((s1, s2)) = queue.pop_front() {
        if s2.is_empty() {
            return false;
        }
        for act in &actions {
            let n1 = visible_step(a1, &s1, act);
            if n1.is_empty() {
                continue;
            }
            let n2 = visible_step(a2, &s2, act);
            let pair = (n1, n2);
            if seen.insert(pair.clone()) {
                queue.push_back(pair);
            }
        }
    }
    true
}

/// Independent verdict for the trace-based property: the hidden view must
/// stay within the restriction.
pub fn oracle_snni(a: &TimedAutomaton) -> bool {
    let hidden = niva::model::hide(a, &a.alphabet.high).unwrap();
    let restricted = niva::model::restrict(a, &a.alphabet.high).unwrap();
    oracle_included(&hidden, &restricted)
}
