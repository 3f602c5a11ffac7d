//! Line-oriented textual model format.
//!
//! ```text
//! automaton A2
//! clocks x
//! alphabet low: l ; high: h
//! controllable: h
//! initial 0
//! location 0 invariant "x<=4"
//! edge 0 -> 1 on l guard "x>=2" reset {x}
//! ```
//!
//! Comments start with `#`. `on eps` denotes the silent action. Guards are
//! conjunctions of `clock REL nonneg-int` atoms joined by `&&`; difference
//! atoms are only accepted in internal mode.

use crate::builder::AutomatonBuilder;
use crate::error::{Error, Result};
use crate::model::{validate, TimedAutomaton};

#[derive(Debug, Clone, Default)]
pub struct ModelDocument {
    pub automata: Vec<TimedAutomaton>,
}

impl ModelDocument {
    pub fn get(&self, name: Option<&str>) -> Result<&TimedAutomaton> {
        match name {
            None => self
                .automata
                .first()
                .ok_or_else(|| Error::InvalidModel("the file defines no automaton".into())),
            Some(n) => self
                .automata
                .iter()
                .find(|a| a.name == n)
                .ok_or_else(|| Error::InvalidModel(format!("no automaton named `{n}`"))),
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.automata.iter().map(|a| a.name.as_str()).collect()
    }
}

fn err(line_no: usize, message: impl Into<String>) -> Error {
    Error::InvalidModel(format!("line {line_no}: {}", message.into()))
}

/// Split a line into words, keeping double-quoted stretches together
/// (without their quotes).
fn tokenize(line: &str, line_no: usize) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut rest = line.trim();
    while !rest.is_empty() {
        if let Some(stripped) = rest.strip_prefix('"') {
            let end = stripped
                .find('"')
                .ok_or_else(|| err(line_no, "unterminated string"))?;
            tokens.push(stripped[..end].to_string());
            rest = stripped[end + 1..].trim_start();
        } else {
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            tokens.push(rest[..end].to_string());
            rest = rest[end..].trim_start();
        }
    }
    Ok(tokens)
}

pub fn parse_model(text: &str, allow_diagonal: bool) -> Result<ModelDocument> {
    let mut automata: Vec<TimedAutomaton> = Vec::new();
    let mut builder: Option<AutomatonBuilder> = None;

    let flush = |builder: &mut Option<AutomatonBuilder>,
                     automata: &mut Vec<TimedAutomaton>,
                     line_no: usize|
     -> Result<()> {
        if let Some(b) = builder.take() {
            let automaton = b
                .build()
                .map_err(|e| err(line_no, format!("in automaton block: {e}")))?;
            let diagnostics = validate(&automaton);
            let structural: Vec<_> = diagnostics
                .iter()
                .filter(|d| !allow_diagonal || !d.message.contains("difference"))
                .collect();
            if let Some(d) = structural.first() {
                return Err(err(line_no, format!("in `{}`: {d}", automaton.name)));
            }
            if automata.iter().any(|a| a.name == automaton.name) {
                return Err(err(line_no, format!("duplicate automaton `{}`", automaton.name)));
            }
            automata.push(automaton);
        }
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens = tokenize(line, line_no)?;
        if tokens.is_empty() {
            continue;
        }
        let keyword = tokens[0].as_str();
        if keyword == "automaton" {
            flush(&mut builder, &mut automata, line_no)?;
            let name = tokens
                .get(1)
                .ok_or_else(|| err(line_no, "automaton needs a name"))?;
            let mut b = AutomatonBuilder::new(name);
            if allow_diagonal {
                b.allow_diagonal();
            }
            builder = Some(b);
            continue;
        }
        let b = builder
            .as_mut()
            .ok_or_else(|| err(line_no, "directive outside an automaton block"))?;
        match keyword {
            "clocks" => {
                let names: Vec<&str> = tokens[1..].iter().map(|s| s.as_str()).collect();
                b.clocks(&names);
            }
            "alphabet" => parse_alphabet(b, &tokens[1..], line_no)?,
            "controllable" | "controllable:" => {
                let mut names: Vec<&str> = Vec::new();
                for t in &tokens[1..] {
                    names.push(t.as_str());
                }
                if keyword == "controllable" {
                    if names.first() != Some(&":") {
                        return Err(err(line_no, "expected `controllable: a b ...`"));
                    }
                    names.remove(0);
                }
                b.controllable(&names);
            }
            "initial" => {
                let name = tokens
                    .get(1)
                    .ok_or_else(|| err(line_no, "initial needs a location"))?;
                b.initial(name);
            }
            "location" => {
                let name = tokens
                    .get(1)
                    .ok_or_else(|| err(line_no, "location needs a name"))?;
                b.location(name);
                match tokens.get(2).map(|s| s.as_str()) {
                    None => {}
                    Some("invariant") => {
                        let guard = tokens
                            .get(3)
                            .ok_or_else(|| err(line_no, "invariant needs a constraint string"))?;
                        b.invariant(name, guard);
                    }
                    Some(other) => {
                        return Err(err(line_no, format!("unexpected token `{other}`")));
                    }
                }
            }
            "edge" => parse_edge(b, &tokens[1..], line_no)?,
            other => return Err(err(line_no, format!("unknown directive `{other}`"))),
        }
    }
    let last_line = text.lines().count();
    flush(&mut builder, &mut automata, last_line)?;
    Ok(ModelDocument { automata })
}

fn parse_alphabet(b: &mut AutomatonBuilder, tokens: &[String], line_no: usize) -> Result<()> {
    // Tokens look like: low: a b ; high: h
    let mut class: Option<&str> = None;
    for t in tokens {
        match t.as_str() {
            ";" => class = None,
            "low:" => class = Some("low"),
            "high:" => class = Some("high"),
            "low" | "high" => class = Some(if t == "low" { "low" } else { "high" }),
            ":" => {}
            name => match class {
                Some("low") => {
                    b.low(&[name]);
                }
                Some("high") => {
                    b.high(&[name]);
                }
                _ => return Err(err(line_no, format!("unexpected token `{name}` in alphabet"))),
            },
        }
    }
    Ok(())
}

fn parse_edge(b: &mut AutomatonBuilder, tokens: &[String], line_no: usize) -> Result<()> {
    // source -> target on act [guard "..."] [reset {x y}]
    let source = tokens
        .first()
        .ok_or_else(|| err(line_no, "edge needs a source"))?;
    if tokens.get(1).map(|s| s.as_str()) != Some("->") {
        return Err(err(line_no, "expected `->` after the edge source"));
    }
    let target = tokens
        .get(2)
        .ok_or_else(|| err(line_no, "edge needs a target"))?;
    if tokens.get(3).map(|s| s.as_str()) != Some("on") {
        return Err(err(line_no, "expected `on <action>`"));
    }
    let action = tokens
        .get(4)
        .ok_or_else(|| err(line_no, "edge needs an action"))?;
    let mut guard = String::new();
    let mut resets: Vec<String> = Vec::new();
    let mut i = 5;
    while i < tokens.len() {
        match tokens[i].as_str() {
            "guard" => {
                guard = tokens
                    .get(i + 1)
                    .ok_or_else(|| err(line_no, "guard needs a constraint string"))?
                    .clone();
                i += 2;
            }
            "reset" => {
                i += 1;
                let mut saw_open = false;
                let mut saw_close = false;
                while i < tokens.len() && !saw_close {
                    let t = tokens[i].trim();
                    let mut t = t;
                    if let Some(stripped) = t.strip_prefix('{') {
                        saw_open = true;
                        t = stripped;
                    }
                    if let Some(stripped) = t.strip_suffix('}') {
                        saw_close = true;
                        t = stripped;
                    }
                    if !t.is_empty() {
                        resets.push(t.to_string());
                    }
                    i += 1;
                }
                if !saw_open || !saw_close {
                    return Err(err(line_no, "reset set must be written as {x y}"));
                }
            }
            other => return Err(err(line_no, format!("unexpected token `{other}` in edge"))),
        }
    }
    let reset_refs: Vec<&str> = resets.iter().map(|s| s.as_str()).collect();
    b.edge(source, action, &guard, &reset_refs, target);
    Ok(())
}
