//! Symbolic execution of concrete timed words. Silent edges may fire at
//! any instant, so runs are tracked as sets of (location, zone) pairs over
//! the automaton clocks extended with an absolute-time reference clock.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{Atom, ClockId, LocId, TimedAutomaton, TimedWord};
use crate::zone::Zone;

/// Scale factor that turns every delay of `w` into an integer.
fn common_denominator(w: &TimedWord) -> BigInt {
    let mut lcm = BigInt::one();
    for (d, _) in &w.pairs {
        let den = d.denom().clone();
        let g = num_integer_gcd(&lcm, &den);
        lcm = lcm / g * den;
    }
    lcm
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Multiply every constant of the automaton by `k`; delays scaled the same
/// way preserve runs exactly.
fn scale_automaton(a: &TimedAutomaton, k: &BigInt) -> Result<TimedAutomaton> {
    let k: i64 = k
        .try_into()
        .map_err(|_| Error::Internal("delay denominator out of range".into()))?;
    let mut out = a.clone();
    let scale_atom = |atom: &mut Atom| match atom {
        Atom::Simple { constant, .. } | Atom::Diff { constant, .. } => {
            *constant = constant.checked_mul(k).expect("scaled constant fits in i64");
        }
    };
    for e in &mut out.edges {
        for atom in &mut e.guard.atoms {
            scale_atom(atom);
        }
    }
    for inv in &mut out.invariants {
        for atom in &mut inv.atoms {
            scale_atom(atom);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct SymState {
    loc: LocId,
    zone: Zone,
}

/// Symbolic state set of an automaton after reading a prefix. The extra
/// clock at index `n_clocks` records absolute time and is never reset.
pub struct SymbolicRun<'a> {
    automaton: TimedAutomaton,
    states: BTreeSet<SymState>,
    now: BigInt,
    scale: BigInt,
    original: &'a TimedAutomaton,
}

impl<'a> SymbolicRun<'a> {
    pub fn start(a: &'a TimedAutomaton, word: &TimedWord) -> Result<SymbolicRun<'a>> {
        let scale = common_denominator(word);
        let scaled = scale_automaton(a, &scale)?;
        let dim = scaled.clocks.len() + 2;
        let mut run = SymbolicRun {
            automaton: scaled,
            states: BTreeSet::new(),
            now: BigInt::zero(),
            scale,
            original: a,
        };
        let init = SymState {
            loc: a.initial,
            zone: Zone::zero(dim),
        };
        if run.satisfies_invariant(&init.zone, a.initial) {
            run.states.insert(init);
            run.close_silent();
        }
        Ok(run)
    }

    fn dim(&self) -> usize {
        self.automaton.clocks.len() + 2
    }

    fn time_clock(&self) -> ClockId {
        ClockId(self.automaton.clocks.len())
    }

    fn invariant_zone(&self, loc: LocId) -> Zone {
        Zone::from_constraint(self.dim(), self.automaton.invariant(loc))
    }

    fn satisfies_invariant(&self, z: &Zone, loc: LocId) -> bool {
        !z.intersect(&self.invariant_zone(loc)).is_empty()
    }

    /// Saturate with silent edges, each taken after an arbitrary delay.
    fn close_silent(&mut self) {
        let mut queue: Vec<SymState> = self.states.iter().cloned().collect();
        while let Some(state) = queue.pop() {
            for (edge_id, edge) in self.automaton.edges_from(state.loc) {
                if !edge.label.is_epsilon() {
                    continue;
                }
                let guard = Zone::from_constraint(self.dim(), &self.automaton.edges[edge_id].guard);
                let reachable = state
                    .zone
                    .up()
                    .intersect(&self.invariant_zone(state.loc))
                    .intersect(&guard);
                if reachable.is_empty() {
                    continue;
                }
                let landed = reachable
                    .reset(edge.resets.iter().copied())
                    .intersect(&self.invariant_zone(edge.target));
                if landed.is_empty() {
                    continue;
                }
                let next = SymState {
                    loc: edge.target,
                    zone: landed,
                };
                if self.states.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
    }

    /// Consume one visible pair `(delay, action)`.
    pub fn step(&mut self, delay: &BigRational, action: &crate::model::Action) -> Result<()> {
        let scaled_delay = delay * BigRational::from(self.scale.clone());
        if !scaled_delay.is_integer() {
            return Err(Error::Internal("delay scaling failed".into()));
        }
        self.now += scaled_delay.to_integer();
        let time = self.time_clock();
        let mut fire_at = Zone::universe(self.dim());
        fire_at.and_atom(&Atom::Simple {
            clock: time,
            rel: crate::model::Rel::Eq,
            constant: (&self.now)
                .try_into()
                .map_err(|_| Error::Internal("absolute time out of range".into()))?,
        });
        let fire_at = fire_at.canonicalize();

        let mut next_states = BTreeSet::new();
        for state in &self.states {
            let at_instant = state
                .zone
                .up()
                .intersect(&self.invariant_zone(state.loc))
                .intersect(&fire_at);
            if at_instant.is_empty() {
                continue;
            }
            for (edge_id, edge) in self.automaton.edges_from(state.loc) {
                if edge.label.action() != Some(action) {
                    continue;
                }
                let guard = Zone::from_constraint(self.dim(), &self.automaton.edges[edge_id].guard);
                let enabled = at_instant.intersect(&guard);
                if enabled.is_empty() {
                    continue;
                }
                let landed = enabled
                    .reset(edge.resets.iter().copied())
                    .intersect(&self.invariant_zone(edge.target));
                if !landed.is_empty() {
                    next_states.insert(SymState {
                        loc: edge.target,
                        zone: landed,
                    });
                }
            }
        }
        self.states = next_states;
        self.close_silent();
        Ok(())
    }

    pub fn is_alive(&self) -> bool {
        !self.states.is_empty()
    }

    /// Locations the run may currently occupy.
    pub fn locations(&self) -> BTreeSet<LocId> {
        self.states.iter().map(|s| s.loc).collect()
    }

    pub fn automaton(&self) -> &TimedAutomaton {
        self.original
    }
}

/// Whether the automaton generates the timed word.
pub fn accepts(a: &TimedAutomaton, w: &TimedWord) -> Result<bool> {
    let mut run = SymbolicRun::start(a, w)?;
    for (delay, action) in &w.pairs {
        if !run.is_alive() {
            return Ok(false);
        }
        run.step(delay, action)?;
    }
    Ok(run.is_alive())
}

/// Locations reachable exactly on the word (used for monitor runs).
pub fn run_locations(a: &TimedAutomaton, w: &TimedWord) -> Result<BTreeSet<LocId>> {
    let mut run = SymbolicRun::start(a, w)?;
    for (delay, action) in &w.pairs {
        if !run.is_alive() {
            return Ok(BTreeSet::new());
        }
        run.step(delay, action)?;
    }
    Ok(run.locations())
}
