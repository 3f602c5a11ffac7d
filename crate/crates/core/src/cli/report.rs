//! Structured reports: one per command invocation, serializable to JSON
//! (`schema` 1) and renderable as text. Witness delays are serialized as
//! exact fractions so replay is lossless.

use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Action, TimedWord};
use crate::verdict::{Verdict, Witness};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub problem: String,
    pub file: String,
    pub automaton: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ReportWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<IterationSummary>,
    pub sizes: Sizes,
    pub duration_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emitted: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportWitness {
    Word { actions: Vec<String> },
    TimedWord { pairs: Vec<TimedPair> },
    UnmatchedState { state: String, side: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimedPair {
    /// Exact rational delay, e.g. `5/2`.
    pub delay: String,
    pub action: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationSummary {
    pub effective: usize,
    pub total_rounds: usize,
    pub confirming_round: bool,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Sizes {
    pub locations: usize,
    pub edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regions: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arena_nodes: Option<usize>,
}

impl Report {
    pub fn new(problem: &str, file: &str, automaton: &str) -> Report {
        Report {
            schema: SCHEMA_VERSION,
            problem: problem.to_string(),
            file: file.to_string(),
            automaton: automaton.to_string(),
            holds: None,
            outcome: None,
            witness: None,
            iterations: None,
            sizes: Sizes::default(),
            duration_ms: 0,
            note: None,
            emitted: None,
        }
    }

    pub fn apply_verdict(&mut self, v: &Verdict) {
        self.holds = Some(v.holds);
        self.witness = v.witness.as_ref().map(witness_to_report);
        self.note = v.note.clone();
        self.sizes = Sizes {
            locations: v.stats.locations,
            edges: v.stats.edges,
            regions: v.stats.regions,
            arena_nodes: v.stats.arena_nodes,
        };
        self.duration_ms = v.stats.duration.as_millis() as u64;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| Error::InvalidModel(format!("bad report: {e}")))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("problem:   {}\n", self.problem));
        out.push_str(&format!("file:      {}\n", self.file));
        out.push_str(&format!("automaton: {}\n", self.automaton));
        if let Some(holds) = self.holds {
            out.push_str(&format!("verdict:   {}\n", if holds { "holds" } else { "fails" }));
        }
        if let Some(outcome) = &self.outcome {
            out.push_str(&format!("outcome:   {outcome}\n"));
        }
        if let Some(w) = &self.witness {
            let rendered = match w {
                ReportWitness::Word { actions } => {
                    if actions.is_empty() {
                        "eps".to_string()
                    } else {
                        actions.join(".")
                    }
                }
                ReportWitness::TimedWord { pairs } => pairs
                    .iter()
                    .map(|p| format!("({},{})", p.delay, p.action))
                    .collect::<Vec<_>>()
                    .join(""),
                ReportWitness::UnmatchedState { state, side } => {
                    format!("state {state} of {side} has no matching partner")
                }
            };
            out.push_str(&format!("witness:   {rendered}\n"));
        }
        if let Some(iter) = &self.iterations {
            out.push_str(&format!(
                "rounds:    {} effective, {} total{}\n",
                iter.effective,
                iter.total_rounds,
                if iter.confirming_round {
                    " (last round confirming)"
                } else {
                    ""
                }
            ));
        }
        out.push_str(&format!(
            "sizes:     {} locations, {} edges",
            self.sizes.locations, self.sizes.edges
        ));
        if let Some(r) = self.sizes.regions {
            out.push_str(&format!(", {r} regions"));
        }
        if let Some(n) = self.sizes.arena_nodes {
            out.push_str(&format!(", {n} arena nodes"));
        }
        out.push('\n');
        out.push_str(&format!("duration:  {} ms\n", self.duration_ms));
        if let Some(note) = &self.note {
            out.push_str(&format!("note:      {note}\n"));
        }
        if let Some(emitted) = &self.emitted {
            out.push_str(&format!("emitted:   {emitted}\n"));
        }
        out
    }
}

pub fn witness_to_report(w: &Witness) -> ReportWitness {
    match w {
        Witness::Word(actions) => ReportWitness::Word {
            actions: actions.iter().map(|a| a.to_string()).collect(),
        },
        Witness::TimedWord(word) => ReportWitness::TimedWord {
            pairs: word
                .pairs
                .iter()
                .map(|(d, a)| TimedPair {
                    delay: d.to_string(),
                    action: a.to_string(),
                })
                .collect(),
        },
        Witness::UnmatchedState { state, side } => ReportWitness::UnmatchedState {
            state: state.clone(),
            side: side.clone(),
        },
    }
}

pub fn witness_from_report(w: &ReportWitness) -> Result<Witness> {
    Ok(match w {
        ReportWitness::Word { actions } => {
            Witness::Word(actions.iter().map(|a| Action::new(a)).collect())
        }
        ReportWitness::TimedWord { pairs } => {
            let mut word = Vec::new();
            for p in pairs {
                let delay = BigRational::from_str(&p.delay)
                    .map_err(|e| Error::InvalidModel(format!("bad delay `{}`: {e}", p.delay)))?;
                word.push((delay, Action::new(&p.action)));
            }
            Witness::TimedWord(TimedWord::new(word))
        }
        ReportWitness::UnmatchedState { state, side } => Witness::UnmatchedState {
            state: state.clone(),
            side: side.clone(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn report_round_trips_through_json() {
        let mut report = Report::new("snni-vp", "m.ta", "A");
        let word = TimedWord::new(vec![(
            BigRational::from_f64(2.5).unwrap(),
            Action::new("l"),
        )]);
        report.apply_verdict(&Verdict::fails(
            crate::verdict::Property::Snni,
            Witness::TimedWord(word.clone()),
        ));
        let json = report.to_json();
        let back = Report::from_json(&json).unwrap();
        assert_eq!(back.schema, SCHEMA_VERSION);
        assert_eq!(back.holds, Some(false));
        match witness_from_report(back.witness.as_ref().unwrap()).unwrap() {
            Witness::TimedWord(w) => assert_eq!(w, word),
            other => panic!("unexpected witness {other:?}"),
        }
    }
}
