//! The automaton data model: clocks, guards, alphabet partitions, edges,
//! and the structural operators (hiding, restriction, product, untiming).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::zone::Zone;

/// Interned action name. Clones are cheap, comparison is by value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(Arc<str>);

impl Action {
    pub fn new(name: &str) -> Self {
        Action(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Action {
    fn from(s: &str) -> Self {
        Action::new(s)
    }
}

/// Index of a location within its automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocId(pub usize);

/// Index of a clock within its automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockId(pub usize);

/// Edge label: a visible action or the silent action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Act(Action),
    Epsilon,
}

impl Label {
    pub fn action(&self) -> Option<&Action> {
        match self {
            Label::Act(a) => Some(a),
            Label::Epsilon => None,
        }
    }

    pub fn is_epsilon(&self) -> bool {
        matches!(self, Label::Epsilon)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Act(a) => write!(f, "{a}"),
            Label::Epsilon => write!(f, "eps"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        };
        write!(f, "{s}")
    }
}

/// Atomic clock constraint. Simple atoms `x ⋈ c` come from the input syntax;
/// difference atoms `x - y ⋈ c` only arise internally (region-refined
/// guards of synthesized automata).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Simple { clock: ClockId, rel: Rel, constant: i64 },
    Diff { left: ClockId, right: ClockId, rel: Rel, constant: i64 },
}

/// Conjunction of atomic constraints; the empty conjunction is `true`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockConstraint {
    pub atoms: Vec<Atom>,
}

impl ClockConstraint {
    pub fn top() -> Self {
        ClockConstraint { atoms: Vec::new() }
    }

    pub fn is_top(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn and(mut self, other: &ClockConstraint) -> ClockConstraint {
        self.atoms.extend(other.atoms.iter().cloned());
        self
    }

    /// The constraint satisfied by `v` exactly when `v[resets ↦ 0]`
    /// satisfies `self`: reset clocks are substituted by zero.
    pub fn reset_preimage(&self, resets: &BTreeSet<ClockId>) -> Option<ClockConstraint> {
        let mut atoms = Vec::new();
        for atom in &self.atoms {
            match *atom {
                Atom::Simple { clock, rel, constant } => {
                    if resets.contains(&clock) {
                        if !eval_rel(0, rel, constant) {
                            return None;
                        }
                    } else {
                        atoms.push(atom.clone());
                    }
                }
                Atom::Diff { left, right, rel, constant } => {
                    match (resets.contains(&left), resets.contains(&right)) {
                        (true, true) => {
                            if !eval_rel(0, rel, constant) {
                                return None;
                            }
                        }
                        (false, true) => {
                            atoms.push(Atom::Simple { clock: left, rel, constant });
                        }
                        (true, false) => {
                            // -right ⋈ c, over non-negative clocks
                            match rel {
                                Rel::Lt => {
                                    if constant < 0 {
                                        atoms.push(Atom::Simple {
                                            clock: right,
                                            rel: Rel::Gt,
                                            constant: -constant,
                                        });
                                    } else if constant == 0 {
                                        atoms.push(Atom::Simple {
                                            clock: right,
                                            rel: Rel::Gt,
                                            constant: 0,
                                        });
                                    }
                                }
                                Rel::Le => {
                                    if constant < 0 {
                                        atoms.push(Atom::Simple {
                                            clock: right,
                                            rel: Rel::Ge,
                                            constant: -constant,
                                        });
                                    }
                                }
                                Rel::Eq => {
                                    if constant > 0 {
                                        return None;
                                    }
                                    atoms.push(Atom::Simple {
                                        clock: right,
                                        rel: Rel::Eq,
                                        constant: -constant,
                                    });
                                }
                                Rel::Ge => {
                                    if constant > 0 {
                                        return None;
                                    }
                                    atoms.push(Atom::Simple {
                                        clock: right,
                                        rel: Rel::Le,
                                        constant: -constant,
                                    });
                                }
                                Rel::Gt => {
                                    if constant >= 0 {
                                        return None;
                                    }
                                    atoms.push(Atom::Simple {
                                        clock: right,
                                        rel: Rel::Lt,
                                        constant: -constant,
                                    });
                                }
                            }
                        }
                        (false, false) => atoms.push(atom.clone()),
                    }
                }
            }
        }
        Some(ClockConstraint { atoms })
    }
}

fn eval_rel(lhs: i64, rel: Rel, rhs: i64) -> bool {
    match rel {
        Rel::Lt => lhs < rhs,
        Rel::Le => lhs <= rhs,
        Rel::Eq => lhs == rhs,
        Rel::Ge => lhs >= rhs,
        Rel::Gt => lhs > rhs,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub source: LocId,
    pub guard: ClockConstraint,
    pub label: Label,
    pub resets: BTreeSet<ClockId>,
    pub target: LocId,
}

/// Partition of the visible alphabet. The uncontrollable set is always
/// derived, never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlphabetSpec {
    pub low: BTreeSet<Action>,
    pub high: BTreeSet<Action>,
    pub controllable: BTreeSet<Action>,
}

impl AlphabetSpec {
    pub fn all(&self) -> BTreeSet<Action> {
        self.low.union(&self.high).cloned().collect()
    }

    pub fn uncontrollable(&self) -> BTreeSet<Action> {
        self.all().difference(&self.controllable).cloned().collect()
    }

    pub fn contains(&self, a: &Action) -> bool {
        self.low.contains(a) || self.high.contains(a)
    }

    /// Drop the given actions from every partition class.
    fn without(&self, dropped: &BTreeSet<Action>) -> AlphabetSpec {
        AlphabetSpec {
            low: self.low.difference(dropped).cloned().collect(),
            high: self.high.difference(dropped).cloned().collect(),
            controllable: self.controllable.difference(dropped).cloned().collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Location {
    pub name: String,
}

#[derive(Debug, Clone)]
pub struct Clock {
    pub name: String,
}

/// A timed automaton. A finite automaton is exactly a `TimedAutomaton`
/// with no clocks; guards and invariants are then vacuously true.
#[derive(Debug, Clone)]
pub struct TimedAutomaton {
    pub name: String,
    pub locations: Vec<Location>,
    pub initial: LocId,
    pub clocks: Vec<Clock>,
    pub alphabet: AlphabetSpec,
    pub edges: Vec<Edge>,
    /// Indexed by location; missing entries are not allowed.
    pub invariants: Vec<ClockConstraint>,
}

impl TimedAutomaton {
    pub fn is_clock_free(&self) -> bool {
        self.clocks.is_empty()
    }

    pub fn location_name(&self, l: LocId) -> &str {
        &self.locations[l.0].name
    }

    pub fn clock_name(&self, c: ClockId) -> &str {
        &self.clocks[c.0].name
    }

    pub fn dim(&self) -> usize {
        self.clocks.len() + 1
    }

    pub fn invariant(&self, l: LocId) -> &ClockConstraint {
        &self.invariants[l.0]
    }

    pub fn edges_from(&self, l: LocId) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.source == l)
    }

    /// Largest constant comparing each clock in any guard or invariant
    /// (0 if none). Difference atoms count toward both clocks.
    pub fn max_constants(&self) -> Vec<i64> {
        let mut m = vec![0i64; self.clocks.len()];
        let mut scan = |c: &ClockConstraint| {
            for atom in &c.atoms {
                match *atom {
                    Atom::Simple { clock, constant, .. } => {
                        m[clock.0] = m[clock.0].max(constant.abs());
                    }
                    Atom::Diff { left, right, constant, .. } => {
                        m[left.0] = m[left.0].max(constant.abs());
                        m[right.0] = m[right.0].max(constant.abs());
                    }
                }
            }
        };
        for e in &self.edges {
            scan(&e.guard);
        }
        for inv in &self.invariants {
            scan(inv);
        }
        m
    }

    pub fn guard_zone(&self, c: &ClockConstraint) -> Zone {
        Zone::from_constraint(self.dim(), c)
    }
}

/// A timed word: a sequence of (delay, action) pairs. Silent entries are
/// normalized away by folding their delay into the next visible pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TimedWord {
    pub pairs: Vec<(BigRational, Action)>,
}

impl TimedWord {
    pub fn new(pairs: Vec<(BigRational, Action)>) -> Self {
        TimedWord { pairs }
    }

    /// Fold silent entries into the delay of the following visible action.
    /// A trailing silent tail is dropped (it extends no visible trace).
    pub fn normalize(entries: Vec<(BigRational, Label)>) -> TimedWord {
        let mut pairs = Vec::new();
        let mut pending = BigRational::zero();
        for (delay, label) in entries {
            pending += delay;
            if let Label::Act(a) = label {
                pairs.push((std::mem::replace(&mut pending, BigRational::zero()), a));
            }
        }
        TimedWord { pairs }
    }

    /// Projection over `keep`: other actions become silent and are folded.
    pub fn project(&self, keep: &BTreeSet<Action>) -> TimedWord {
        TimedWord::normalize(
            self.pairs
                .iter()
                .map(|(d, a)| {
                    let label = if keep.contains(a) {
                        Label::Act(a.clone())
                    } else {
                        Label::Epsilon
                    };
                    (d.clone(), label)
                })
                .collect(),
        )
    }

    pub fn untimed(&self) -> Vec<Action> {
        self.pairs.iter().map(|(_, a)| a.clone()).collect()
    }
}

impl fmt::Display for TimedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "eps");
        }
        for (d, a) in &self.pairs {
            write!(f, "({d},{a})")?;
        }
        Ok(())
    }
}

/// One validation finding, tied to the entity that violates an invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

/// Names the parser and engines treat as reserved symbols.
pub const EPSILON_NAME: &str = "eps";
pub const LAMBDA_NAME: &str = "lambda";

/// Check every structural invariant of the model; returns one diagnostic
/// per violation and an empty list iff the automaton is well-formed.
pub fn validate(a: &TimedAutomaton) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n_locs = a.locations.len();
    let n_clocks = a.clocks.len();
    let diag = |subject: String, message: String| Diagnostic { subject, message };

    if a.initial.0 >= n_locs {
        out.push(diag("initial".into(), "initial location is not declared".into()));
    }
    if a.invariants.len() != n_locs {
        out.push(diag(
            a.name.clone(),
            format!(
                "expected {} invariant entries, found {}",
                n_locs,
                a.invariants.len()
            ),
        ));
    }

    for class in [&a.alphabet.low, &a.alphabet.high] {
        for act in class {
            if act.as_str() == EPSILON_NAME || act.as_str() == LAMBDA_NAME {
                out.push(diag(
                    format!("action {act}"),
                    "reserved symbol cannot be declared as an action".into(),
                ));
            }
        }
    }
    for act in a.alphabet.low.intersection(&a.alphabet.high) {
        out.push(diag(
            format!("action {act}"),
            "declared both low and high".into(),
        ));
    }
    for act in &a.alphabet.controllable {
        if !a.alphabet.contains(act) {
            out.push(diag(
                format!("action {act}"),
                "controllable action is not in the declared alphabet".into(),
            ));
        }
    }

    let check_constraint =
        |subject: &str, c: &ClockConstraint, invariant_position: bool, out: &mut Vec<Diagnostic>| {
            for atom in &c.atoms {
                match *atom {
                    Atom::Simple { clock, rel, constant } => {
                        if clock.0 >= n_clocks {
                            out.push(diag(subject.to_string(), "references an undeclared clock".into()));
                        }
                        if constant < 0 {
                            out.push(diag(subject.to_string(), "negative constant".into()));
                        }
                        if invariant_position && matches!(rel, Rel::Eq | Rel::Ge | Rel::Gt) {
                            out.push(diag(subject.to_string(), "invariant uses lower bound".into()));
                        }
                    }
                    Atom::Diff { left, right, .. } => {
                        if left.0 >= n_clocks || right.0 >= n_clocks {
                            out.push(diag(subject.to_string(), "references an undeclared clock".into()));
                        }
                    }
                }
            }
        };

    for (i, inv) in a.invariants.iter().enumerate() {
        let subject = format!(
            "invariant of {}",
            a.locations.get(i).map(|l| l.name.as_str()).unwrap_or("?")
        );
        check_constraint(&subject, inv, true, &mut out);
    }

    for (i, e) in a.edges.iter().enumerate() {
        let subject = format!("edge #{i}");
        if e.source.0 >= n_locs || e.target.0 >= n_locs {
            out.push(diag(subject.clone(), "endpoint is not a declared location".into()));
        }
        for r in &e.resets {
            if r.0 >= n_clocks {
                out.push(diag(subject.clone(), "resets an undeclared clock".into()));
            }
        }
        if let Label::Act(act) = &e.label {
            if !a.alphabet.contains(act) {
                out.push(diag(
                    subject.clone(),
                    format!("action {act} is not in the declared alphabet"),
                ));
            }
        }
        check_constraint(&subject, &e.guard, false, &mut out);
    }

    out
}

fn check_known_actions(a: &TimedAutomaton, l: &BTreeSet<Action>) -> Result<()> {
    for act in l {
        if !a.alphabet.contains(act) {
            return Err(Error::UnknownAction(act.to_string()));
        }
    }
    Ok(())
}

/// The abstracted automaton `A/L`: edges labeled in `l` are relabeled
/// silent, everything else is unchanged.
pub fn hide(a: &TimedAutomaton, l: &BTreeSet<Action>) -> Result<TimedAutomaton> {
    check_known_actions(a, l)?;
    let mut out = a.clone();
    out.name = format!("{}/{{{}}}", a.name, join_actions(l));
    for e in &mut out.edges {
        if let Label::Act(act) = &e.label {
            if l.contains(act) {
                e.label = Label::Epsilon;
            }
        }
    }
    out.alphabet = a.alphabet.without(l);
    Ok(out)
}

/// The restricted automaton `A\L`: edges labeled in `l` are removed.
pub fn restrict(a: &TimedAutomaton, l: &BTreeSet<Action>) -> Result<TimedAutomaton> {
    check_known_actions(a, l)?;
    let mut out = a.clone();
    out.name = format!("{}\\{{{}}}", a.name, join_actions(l));
    out.edges = a
        .edges
        .iter()
        .filter(|e| match &e.label {
            Label::Act(act) => !l.contains(act),
            Label::Epsilon => true,
        })
        .cloned()
        .collect();
    out.alphabet = a.alphabet.without(l);
    Ok(out)
}

fn join_actions(l: &BTreeSet<Action>) -> String {
    l.iter().map(|a| a.as_str()).collect::<Vec<_>>().join(",")
}

/// Remove all timing: no clocks, all guards and invariants true.
pub fn untime(a: &TimedAutomaton) -> TimedAutomaton {
    let mut out = a.clone();
    out.name = format!("untime({})", a.name);
    out.clocks.clear();
    for e in &mut out.edges {
        e.guard = ClockConstraint::top();
        e.resets.clear();
    }
    for inv in &mut out.invariants {
        *inv = ClockConstraint::top();
    }
    out
}

/// Synchronized product of two automata, with the right operand's clocks
/// renamed apart. Provenance of locations and edges is recorded so results
/// can be reported in source-model terms.
#[derive(Debug, Clone)]
pub struct Product {
    pub automaton: TimedAutomaton,
    /// Product location -> (left location, right location).
    pub loc_pairs: Vec<(LocId, LocId)>,
    /// Product edge -> (left edge index, right edge index).
    pub edge_pairs: Vec<(Option<usize>, Option<usize>)>,
    /// Right-operand clock renaming: (original name, product name).
    pub clock_renaming: Vec<(String, String)>,
    /// Offset of right-operand clocks in the product clock list.
    pub right_clock_offset: usize,
}

pub fn product(
    a1: &TimedAutomaton,
    a2: &TimedAutomaton,
    sync: &BTreeSet<Action>,
) -> Result<Product> {
    let mut clocks: Vec<Clock> = a1.clocks.clone();
    let taken: BTreeSet<String> = clocks.iter().map(|c| c.name.clone()).collect();
    let mut clock_renaming = Vec::new();
    let right_clock_offset = clocks.len();
    for c in &a2.clocks {
        let mut name = c.name.clone();
        let mut suffix = 2usize;
        while taken.contains(&name) || clocks.iter().any(|k| k.name == name) {
            name = format!("{}_{suffix}", c.name);
            suffix += 1;
            if suffix > a1.clocks.len() + a2.clocks.len() + 8 {
                return Err(Error::Internal("clock renaming did not converge".into()));
            }
        }
        if name != c.name {
            clock_renaming.push((c.name.clone(), name.clone()));
        }
        clocks.push(Clock { name });
    }

    let shift_constraint = |c: &ClockConstraint| -> ClockConstraint {
        ClockConstraint {
            atoms: c
                .atoms
                .iter()
                .map(|atom| match *atom {
                    Atom::Simple { clock, rel, constant } => Atom::Simple {
                        clock: ClockId(clock.0 + right_clock_offset),
                        rel,
                        constant,
                    },
                    Atom::Diff { left, right, rel, constant } => Atom::Diff {
                        left: ClockId(left.0 + right_clock_offset),
                        right: ClockId(right.0 + right_clock_offset),
                        rel,
                        constant,
                    },
                })
                .collect(),
        }
    };
    let shift_resets = |r: &BTreeSet<ClockId>| -> BTreeSet<ClockId> {
        r.iter().map(|c| ClockId(c.0 + right_clock_offset)).collect()
    };

    let n2 = a2.locations.len();
    let mut locations = Vec::with_capacity(a1.locations.len() * n2);
    let mut loc_pairs = Vec::new();
    let mut invariants = Vec::new();
    for (i, l1) in a1.locations.iter().enumerate() {
        for (j, l2) in a2.locations.iter().enumerate() {
            locations.push(Location {
                name: format!("({},{})", l1.name, l2.name),
            });
            loc_pairs.push((LocId(i), LocId(j)));
            invariants.push(a1.invariants[i].clone().and(&shift_constraint(&a2.invariants[j])));
        }
    }
    let pair_id = |l: LocId, r: LocId| LocId(l.0 * n2 + r.0);

    let mut alphabet = a1.alphabet.clone();
    for act in &a2.alphabet.low {
        alphabet.low.insert(act.clone());
    }
    for act in &a2.alphabet.high {
        alphabet.high.insert(act.clone());
    }
    for act in &a2.alphabet.controllable {
        alphabet.controllable.insert(act.clone());
    }

    let mut edges = Vec::new();
    let mut edge_pairs = Vec::new();
    // Synchronized moves.
    for (i1, e1) in a1.edges.iter().enumerate() {
        let act = match &e1.label {
            Label::Act(a) if sync.contains(a) => a,
            _ => continue,
        };
        for (i2, e2) in a2.edges.iter().enumerate() {
            if e2.label.action() != Some(act) {
                continue;
            }
            let mut resets = e1.resets.clone();
            resets.extend(shift_resets(&e2.resets));
            edges.push(Edge {
                source: pair_id(e1.source, e2.source),
                guard: e1.guard.clone().and(&shift_constraint(&e2.guard)),
                label: e1.label.clone(),
                resets,
                target: pair_id(e1.target, e2.target),
            });
            edge_pairs.push((Some(i1), Some(i2)));
        }
    }
    // Interleaved moves of the left operand.
    for (i1, e1) in a1.edges.iter().enumerate() {
        if let Label::Act(a) = &e1.label {
            if sync.contains(a) {
                continue;
            }
        }
        for j in 0..n2 {
            edges.push(Edge {
                source: pair_id(e1.source, LocId(j)),
                guard: e1.guard.clone(),
                label: e1.label.clone(),
                resets: e1.resets.clone(),
                target: pair_id(e1.target, LocId(j)),
            });
            edge_pairs.push((Some(i1), None));
        }
    }
    // Interleaved moves of the right operand.
    for (i2, e2) in a2.edges.iter().enumerate() {
        if let Label::Act(a) = &e2.label {
            if sync.contains(a) {
                continue;
            }
        }
        for i in 0..a1.locations.len() {
            edges.push(Edge {
                source: pair_id(LocId(i), e2.source),
                guard: shift_constraint(&e2.guard),
                label: e2.label.clone(),
                resets: shift_resets(&e2.resets),
                target: pair_id(LocId(i), e2.target),
            });
            edge_pairs.push((None, Some(i2)));
        }
    }

    let automaton = TimedAutomaton {
        name: format!("{}x{}", a1.name, a2.name),
        locations,
        initial: pair_id(a1.initial, a2.initial),
        clocks,
        alphabet,
        edges,
        invariants,
    };
    Ok(Product {
        automaton,
        loc_pairs,
        edge_pairs,
        clock_renaming,
        right_clock_offset,
    })
}

/// Outcome of the determinism test, with the first offending edge pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminismCheck {
    pub deterministic: bool,
    pub witness: Option<(usize, usize)>,
}

/// An automaton is deterministic if any two distinct same-source,
/// same-action edges either have disjoint guards or agree on target and
/// resets. Undefined (an error) when silent edges are present.
pub fn is_deterministic(a: &TimedAutomaton) -> Result<DeterminismCheck> {
    if a.edges.iter().any(|e| e.label.is_epsilon()) {
        return Err(Error::EpsilonDeterminism);
    }
    let dim = a.dim();
    for i in 0..a.edges.len() {
        for j in (i + 1)..a.edges.len() {
            let (e1, e2) = (&a.edges[i], &a.edges[j]);
            if e1.source != e2.source || e1.label != e2.label {
                continue;
            }
            if e1.target == e2.target && e1.resets == e2.resets {
                continue;
            }
            let z1 = Zone::from_constraint(dim, &e1.guard);
            let z2 = Zone::from_constraint(dim, &e2.guard);
            if !z1.intersect(&z2).is_empty() {
                return Ok(DeterminismCheck {
                    deterministic: false,
                    witness: Some((i, j)),
                });
            }
        }
    }
    Ok(DeterminismCheck {
        deterministic: true,
        witness: None,
    })
}

/// Membership in the decidable class: the restriction by the high alphabet
/// must be silent-free and deterministic.
pub fn is_dta(a: &TimedAutomaton) -> bool {
    let restricted = match restrict(a, &a.alphabet.high) {
        Ok(r) => r,
        Err(_) => return false,
    };
    match is_deterministic(&restricted) {
        Ok(check) => check.deterministic,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn validate_accepts_paper_fixture() {
        assert!(validate(&fixtures::ab()).is_empty());
    }

    #[test]
    fn validate_flags_lower_bound_invariant() {
        let mut a = fixtures::ag();
        a.invariants[0] = ClockConstraint {
            atoms: vec![Atom::Simple { clock: ClockId(0), rel: Rel::Gt, constant: 2 }],
        };
        let diags = validate(&a);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("invariant uses lower bound"));
    }

    #[test]
    fn validate_flags_undeclared_reset() {
        let mut a = fixtures::ag();
        a.edges[0].resets.insert(ClockId(7));
        let diags = validate(&a);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].subject.contains("edge #0"));
        assert!(diags[0].message.contains("undeclared clock"));
    }

    #[test]
    fn hide_relabels_and_drops_alphabet() {
        let a = fixtures::aa();
        let hidden = hide(&a, &a.alphabet.high).unwrap();
        assert!(hidden.edges.iter().any(|e| e.label.is_epsilon()));
        assert!(hidden.alphabet.high.is_empty());
        assert_eq!(hidden.edges.len(), a.edges.len());
    }

    #[test]
    fn hide_nothing_is_identity() {
        let a = fixtures::aa();
        let hidden = hide(&a, &BTreeSet::new()).unwrap();
        assert_eq!(hidden.edges, a.edges);
        assert_eq!(hidden.alphabet, a.alphabet);
    }

    #[test]
    fn restrict_removes_edges() {
        let a = fixtures::aa();
        let restricted = restrict(&a, &a.alphabet.high).unwrap();
        assert_eq!(restricted.edges.len(), 1);
        assert_eq!(restricted.edges[0].label, Label::Act(Action::new("l")));
    }

    #[test]
    fn restrict_unknown_action_errors() {
        let a = fixtures::aa();
        let mut l = BTreeSet::new();
        l.insert(Action::new("nope"));
        assert!(matches!(restrict(&a, &l), Err(Error::UnknownAction(_))));
    }

    #[test]
    fn restriction_of_ai_has_ae_shape() {
        let ai = fixtures::ai();
        let mut h2 = BTreeSet::new();
        h2.insert(Action::new("h2"));
        let r = restrict(&ai, &h2).unwrap();
        // q0 keeps one low edge and one high edge; q3's low edge survives
        // but is unreachable.
        let from_q0: Vec<_> = r.edges_from(r.initial).collect();
        assert_eq!(from_q0.len(), 2);
    }

    #[test]
    fn untime_clears_clocks_and_guards() {
        let ag = fixtures::ag();
        let ah = untime(&ag);
        assert!(ah.is_clock_free());
        assert!(ah.edges.iter().all(|e| e.guard.is_top()));
        assert_eq!(ah.edges.len(), ag.edges.len());
    }

    #[test]
    fn untime_is_identity_on_clock_free() {
        let d = fixtures::d();
        let u = untime(&d);
        assert_eq!(u.edges, d.edges);
    }

    #[test]
    fn product_with_neutral_element() {
        let a = fixtures::aa();
        let unit = fixtures::single_location("unit", &a.alphabet);
        let p = product(&a, &unit, &BTreeSet::new()).unwrap();
        assert_eq!(p.automaton.locations.len(), a.locations.len());
        assert_eq!(p.automaton.edges.len(), a.edges.len());
        for (i, (l, _)) in p.loc_pairs.iter().enumerate() {
            assert_eq!(l.0, i);
        }
    }

    #[test]
    fn product_invariants_are_conjoined() {
        let mut a = fixtures::ag();
        a.invariants[0] = ClockConstraint {
            atoms: vec![Atom::Simple { clock: ClockId(0), rel: Rel::Le, constant: 3 }],
        };
        let p = product(&a, &a.clone(), &a.alphabet.all()).unwrap();
        for (idx, (l, r)) in p.loc_pairs.iter().enumerate() {
            let expected = a.invariants[l.0]
                .clone()
                .and(&ClockConstraint {
                    atoms: a.invariants[r.0]
                        .atoms
                        .iter()
                        .map(|at| match *at {
                            Atom::Simple { clock, rel, constant } => Atom::Simple {
                                clock: ClockId(clock.0 + p.right_clock_offset),
                                rel,
                                constant,
                            },
                            Atom::Diff { left, right, rel, constant } => Atom::Diff {
                                left: ClockId(left.0 + p.right_clock_offset),
                                right: ClockId(right.0 + p.right_clock_offset),
                                rel,
                                constant,
                            },
                        })
                        .collect(),
                });
            assert_eq!(p.automaton.invariants[idx], expected);
        }
    }

    #[test]
    fn deterministic_fixture_and_witness() {
        let ae = fixtures::ae();
        assert!(is_deterministic(&ae).unwrap().deterministic);

        let ac = fixtures::ac();
        let restricted = restrict(&ac, &ac.alphabet.high).unwrap();
        let check = is_deterministic(&restricted).unwrap();
        assert!(!check.deterministic);
        let (i, j) = check.witness.unwrap();
        assert_eq!(restricted.edges[i].label, Label::Act(Action::new("l1")));
        assert_eq!(restricted.edges[j].label, Label::Act(Action::new("l1")));
        assert_eq!(restricted.edges[i].source, restricted.initial);
    }

    #[test]
    fn disjoint_guards_stay_deterministic() {
        let mut a = fixtures::ag();
        a.edges = vec![
            Edge {
                source: LocId(0),
                guard: ClockConstraint {
                    atoms: vec![Atom::Simple { clock: ClockId(0), rel: Rel::Lt, constant: 1 }],
                },
                label: Label::Act(Action::new("l")),
                resets: BTreeSet::new(),
                target: LocId(1),
            },
            Edge {
                source: LocId(0),
                guard: ClockConstraint {
                    atoms: vec![Atom::Simple { clock: ClockId(0), rel: Rel::Gt, constant: 1 }],
                },
                label: Label::Act(Action::new("l")),
                resets: BTreeSet::new(),
                target: LocId(2),
            },
        ];
        assert!(is_deterministic(&a).unwrap().deterministic);
    }

    #[test]
    fn dta_membership() {
        assert!(is_dta(&fixtures::ak_family(1)));
        assert!(is_dta(&fixtures::ak_family(2)));
        assert!(!is_dta(&fixtures::ac()));
        assert!(is_dta(&fixtures::ae()));
    }

    #[test]
    fn timed_word_normalization_folds_silent_delays() {
        use num_traits::FromPrimitive;
        let w = TimedWord::normalize(vec![
            (BigRational::from_f64(0.5).unwrap(), Label::Epsilon),
            (BigRational::from_f64(2.0).unwrap(), Label::Act(Action::new("l"))),
            (BigRational::from_f64(1.0).unwrap(), Label::Epsilon),
        ]);
        assert_eq!(w.pairs.len(), 1);
        assert_eq!(w.pairs[0].0, BigRational::from_f64(2.5).unwrap());
        assert_eq!(w.pairs[0].1, Action::new("l"));
    }
}
