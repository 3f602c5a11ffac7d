//! Convenience construction of automata from names and guard text.
//! Locations are interned in order of first mention.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{
    Action, AlphabetSpec, Atom, Clock, ClockConstraint, ClockId, Edge, Label, LocId, Location,
    Rel, TimedAutomaton, EPSILON_NAME,
};

#[derive(Debug, Clone, Default)]
pub struct AutomatonBuilder {
    name: String,
    clocks: Vec<String>,
    locations: Vec<String>,
    initial: Option<String>,
    low: BTreeSet<String>,
    high: BTreeSet<String>,
    controllable: BTreeSet<String>,
    invariants: Vec<(String, String)>,
    edges: Vec<RawEdge>,
    allow_diagonal: bool,
}

#[derive(Debug, Clone)]
struct RawEdge {
    source: String,
    label: String,
    guard: String,
    resets: Vec<String>,
    target: String,
}

impl AutomatonBuilder {
    pub fn new(name: &str) -> Self {
        AutomatonBuilder {
            name: name.to_string(),
            ..Default::default()
        }
    }

    /// Accept difference atoms (`x-y<=c`) in guard text.
    pub fn allow_diagonal(&mut self) -> &mut Self {
        self.allow_diagonal = true;
        self
    }

    pub fn clocks(&mut self, names: &[&str]) -> &mut Self {
        for n in names {
            if !self.clocks.iter().any(|c| c == n) {
                self.clocks.push(n.to_string());
            }
        }
        self
    }

    pub fn low(&mut self, names: &[&str]) -> &mut Self {
        self.low.extend(names.iter().map(|s| s.to_string()));
        self
    }

    pub fn high(&mut self, names: &[&str]) -> &mut Self {
        self.high.extend(names.iter().map(|s| s.to_string()));
        self
    }

    pub fn controllable(&mut self, names: &[&str]) -> &mut Self {
        self.controllable.extend(names.iter().map(|s| s.to_string()));
        self
    }

    pub fn initial(&mut self, loc: &str) -> &mut Self {
        self.declare(loc);
        self.initial = Some(loc.to_string());
        self
    }

    pub fn location(&mut self, name: &str) -> &mut Self {
        self.declare(name);
        self
    }

    pub fn invariant(&mut self, loc: &str, guard: &str) -> &mut Self {
        self.declare(loc);
        self.invariants.push((loc.to_string(), guard.to_string()));
        self
    }

    /// `label` may be an action name or `eps` for the silent action.
    pub fn edge(
        &mut self,
        source: &str,
        label: &str,
        guard: &str,
        resets: &[&str],
        target: &str,
    ) -> &mut Self {
        self.declare(source);
        self.declare(target);
        self.edges.push(RawEdge {
            source: source.to_string(),
            label: label.to_string(),
            guard: guard.to_string(),
            resets: resets.iter().map(|s| s.to_string()).collect(),
            target: target.to_string(),
        });
        self
    }

    fn declare(&mut self, name: &str) {
        if !self.locations.iter().any(|l| l == name) {
            self.locations.push(name.to_string());
        }
    }

    fn loc_id(&self, name: &str) -> Result<LocId> {
        self.locations
            .iter()
            .position(|l| l == name)
            .map(LocId)
            .ok_or_else(|| Error::InvalidModel(format!("unknown location `{name}`")))
    }

    fn clock_id(&self, name: &str) -> Result<ClockId> {
        self.clocks
            .iter()
            .position(|c| c == name)
            .map(ClockId)
            .ok_or_else(|| Error::InvalidModel(format!("undeclared clock `{name}`")))
    }

    pub fn build(&self) -> Result<TimedAutomaton> {
        let initial = self
            .initial
            .as_ref()
            .ok_or_else(|| Error::InvalidModel("no initial location".into()))?;
        let initial = self.loc_id(initial)?;
        let mut invariants = vec![ClockConstraint::top(); self.locations.len()];
        for (loc, guard) in &self.invariants {
            let id = self.loc_id(loc)?;
            let parsed = parse_constraint(guard, &|n| self.clock_id(n), self.allow_diagonal)?;
            invariants[id.0] = invariants[id.0].clone().and(&parsed);
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for raw in &self.edges {
            let label = if raw.label == EPSILON_NAME {
                Label::Epsilon
            } else {
                Label::Act(Action::new(&raw.label))
            };
            let mut resets = BTreeSet::new();
            for r in &raw.resets {
                resets.insert(self.clock_id(r)?);
            }
            edges.push(Edge {
                source: self.loc_id(&raw.source)?,
                guard: parse_constraint(&raw.guard, &|n| self.clock_id(n), self.allow_diagonal)?,
                label,
                resets,
                target: self.loc_id(&raw.target)?,
            });
        }
        Ok(TimedAutomaton {
            name: self.name.clone(),
            locations: self
                .locations
                .iter()
                .map(|n| Location { name: n.clone() })
                .collect(),
            initial,
            clocks: self.clocks.iter().map(|n| Clock { name: n.clone() }).collect(),
            alphabet: AlphabetSpec {
                low: self.low.iter().map(|s| Action::new(s)).collect(),
                high: self.high.iter().map(|s| Action::new(s)).collect(),
                controllable: self.controllable.iter().map(|s| Action::new(s)).collect(),
            },
            edges,
            invariants,
        })
    }
}

/// Parse a conjunction of atoms `clock REL nonneg-int`, joined by `&&`.
/// The empty string denotes `true`. Difference atoms `x-y REL int` are
/// accepted only when `allow_diagonal` is set.
pub fn parse_constraint(
    text: &str,
    clock_id: &dyn Fn(&str) -> Result<ClockId>,
    allow_diagonal: bool,
) -> Result<ClockConstraint> {
    let text = text.trim();
    if text.is_empty() || text == "true" {
        return Ok(ClockConstraint::top());
    }
    let mut atoms = Vec::new();
    for part in text.split("&&") {
        let part = part.trim();
        if part.is_empty() {
            return Err(Error::InvalidModel(format!("empty conjunct in `{text}`")));
        }
        atoms.push(parse_atom(part, clock_id, allow_diagonal)?);
    }
    Ok(ClockConstraint { atoms })
}

fn parse_atom(
    part: &str,
    clock_id: &dyn Fn(&str) -> Result<ClockId>,
    allow_diagonal: bool,
) -> Result<Atom> {
    let (rel, split_at, len) = find_relation(part)
        .ok_or_else(|| Error::InvalidModel(format!("no relation in atom `{part}`")))?;
    let lhs = part[..split_at].trim();
    let rhs = part[split_at + len..].trim();
    let constant: i64 = rhs
        .parse()
        .map_err(|_| Error::InvalidModel(format!("`{rhs}` is not an integer constant")))?;
    if let Some((x, y)) = lhs.split_once('-') {
        if !allow_diagonal {
            return Err(Error::InvalidModel(format!(
                "difference atom `{part}` is only accepted in internal mode"
            )));
        }
        return Ok(Atom::Diff {
            left: clock_id(x.trim())?,
            right: clock_id(y.trim())?,
            rel,
            constant,
        });
    }
    if constant < 0 {
        return Err(Error::InvalidModel(format!(
            "negative constant in atom `{part}`"
        )));
    }
    Ok(Atom::Simple {
        clock: clock_id(lhs)?,
        rel,
        constant,
    })
}

fn find_relation(part: &str) -> Option<(Rel, usize, usize)> {
    for (symbol, rel) in [
        ("<=", Rel::Le),
        (">=", Rel::Ge),
        ("==", Rel::Eq),
        ("<", Rel::Lt),
        (">", Rel::Gt),
        ("=", Rel::Eq),
    ] {
        if let Some(pos) = part.find(symbol) {
            return Some((rel, pos, symbol.len()));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_conjunctions() {
        let clocks = ["x".to_string(), "y".to_string()];
        let resolve = |n: &str| {
            clocks
                .iter()
                .position(|c| c == n)
                .map(ClockId)
                .ok_or_else(|| Error::InvalidModel(format!("undeclared clock `{n}`")))
        };
        let c = parse_constraint("x>1 && y<=2", &resolve, false).unwrap();
        assert_eq!(c.atoms.len(), 2);
        assert!(parse_constraint("x>=1.5", &resolve, false).is_err());
        assert!(parse_constraint("z>1", &resolve, false).is_err());
        assert!(parse_constraint("x-y<=3", &resolve, false).is_err());
        assert!(parse_constraint("x-y<=3", &resolve, true).is_ok());
    }
}
