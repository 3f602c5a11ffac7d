//! Iterated controller synthesis: solve the safety game on the monitor
//! product, extract the controlled automaton as a region-refined timed
//! automaton, and repeat until the restricted language stabilizes or the
//! game is lost.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::atomic::AtomicBool;

use crate::error::{Error, Result};
use crate::game::{solve_safety_game, Strategy};
use crate::model::{
    hide, is_deterministic, restrict, Edge, Label, LocId, Location, TimedAutomaton,
};
use crate::monitor::{monitor_product_with, timed_language_included, MonitorProduct};
use crate::region::Region;
use crate::region_graph::{build_region_graph, RegionGraph};
use crate::untimed::{determinize, language_included};
use crate::verdict::Verdict;

/// How the monitor copy of the restriction is made deterministic: the
/// timed path requires it already is; the clock-free path may apply the
/// subset construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonitorDiscipline {
    RequireDeterministic,
    Determinize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Controller,
    Bot,
}

/// One game round: the arena, the solved strategy, and the extracted
/// controlled automaton with provenance back to the input model.
#[derive(Debug, Clone)]
pub struct SynthesisRound {
    pub arena: TimedAutomaton,
    pub bad_locations: BTreeSet<LocId>,
    pub region_graph: RegionGraph,
    pub strategy: Strategy,
    /// Absent when the game was lost.
    pub controlled: Option<TimedAutomaton>,
    /// The strategy removed some reachable behaviour.
    pub pruned: bool,
    /// Controlled edge -> edge of the original input automaton.
    pub edge_roots: Vec<Option<usize>>,
    /// Controlled location -> location of the original input automaton.
    pub loc_roots: Vec<LocId>,
    /// Controlled location -> (arena location, region) it was carved from.
    pub loc_sources: Vec<(LocId, Region)>,
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub outcome: Outcome,
    pub rounds: Vec<SynthesisRound>,
    /// The fixpoint controlled automaton, when a controller exists.
    pub final_automaton: Option<TimedAutomaton>,
    /// Rounds that actually removed behaviour.
    pub effective_iterations: usize,
    /// Whether the last round only confirmed an already-stable language.
    pub confirming_round: bool,
    /// Self-verification of the final automaton.
    pub verdict: Option<Verdict>,
}

/// Extraction of the controlled automaton from a winning strategy.
pub struct Extraction {
    pub automaton: TimedAutomaton,
    /// Controlled location -> region-graph node id.
    pub loc_node: Vec<usize>,
    /// Controlled edge -> arena edge id.
    pub edge_arena: Vec<usize>,
    pub pruned: bool,
}

/// Carve the controlled automaton out of the winning region-graph nodes.
/// Locations are winning nodes; a location's invariant is the convex hull
/// of its maximal chain of time-allowed regions, and every edge allowed
/// anywhere along the chain is lifted to the chain's start with its firing
/// region as guard. Forbidding time passage therefore becomes an upper
/// bound of the invariant rather than a silent edge.
pub fn extract_controlled(
    mp: &MonitorProduct,
    rg: &RegionGraph,
    strategy: &Strategy,
) -> Result<Extraction> {
    let arena = &mp.arena;
    let initial = rg
        .initial
        .ok_or_else(|| Error::Internal("extraction requires an initial node".into()))?;
    if !strategy.winning.contains(&initial) {
        return Err(Error::Internal(
            "extraction requires a winning initial node".into(),
        ));
    }
    let controllable = &arena.alphabet.controllable;

    let edge_allowed = |node: usize, edge_id: usize| -> bool {
        match &arena.edges[edge_id].label {
            Label::Act(a) if controllable.contains(a) => {
                strategy.allowed[&node].actions.contains(a)
            }
            _ => true,
        }
    };

    // Reachable winning nodes under the strategy.
    let mut reach: BTreeSet<usize> = BTreeSet::from([initial]);
    let mut queue = VecDeque::from([initial]);
    while let Some(n) = queue.pop_front() {
        for e in &rg.discrete[n] {
            if edge_allowed(n, e.edge_id) && reach.insert(e.target) {
                debug_assert!(strategy.winning.contains(&e.target));
                queue.push_back(e.target);
            }
        }
        if strategy.allowed[&n].lambda {
            if let Some(succ) = rg.time_succ[n] {
                if reach.insert(succ) {
                    queue.push_back(succ);
                }
            }
        }
    }

    let loc_node: Vec<usize> = reach.iter().copied().collect();
    let loc_of: BTreeMap<usize, LocId> = loc_node
        .iter()
        .enumerate()
        .map(|(i, &n)| (n, LocId(i)))
        .collect();

    let chain_of = |start: usize| -> Vec<usize> {
        let mut chain = vec![start];
        let mut cur = start;
        while strategy.allowed[&cur].lambda {
            match rg.time_succ[cur] {
                Some(succ) => {
                    chain.push(succ);
                    cur = succ;
                }
                None => break,
            }
        }
        chain
    };

    let mut locations = Vec::with_capacity(loc_node.len());
    let mut invariants = Vec::with_capacity(loc_node.len());
    let mut edges = Vec::new();
    let mut edge_arena = Vec::new();
    let mut pruned = false;

    for (&n, new_id) in loc_node.iter().zip(0..) {
        let node = &rg.nodes[n];
        locations.push(Location {
            name: format!("{}#{}", arena.location_name(node.loc), n),
        });
        let chain = chain_of(n);
        let end = &rg.nodes[*chain.last().unwrap()].region;
        invariants.push(Region::chain_invariant(end));

        for &m in &chain {
            let guard = rg.nodes[m].region.rect_constraint(&rg.max_consts);
            for e in &rg.discrete[m] {
                if !edge_allowed(m, e.edge_id) {
                    continue;
                }
                let src_edge = &arena.edges[e.edge_id];
                edges.push(Edge {
                    source: LocId(new_id),
                    guard: guard.clone(),
                    label: src_edge.label.clone(),
                    resets: src_edge.resets.clone(),
                    target: loc_of[&e.target],
                });
                edge_arena.push(e.edge_id);
            }
        }

        // Did the strategy remove anything here?
        let moves = &strategy.allowed[&n];
        if !moves.lambda && rg.time_succ[n].is_some() {
            pruned = true;
        }
        for e in &rg.discrete[n] {
            if let Label::Act(a) = &arena.edges[e.edge_id].label {
                if controllable.contains(a) && !moves.actions.contains(a) {
                    pruned = true;
                }
            }
        }
    }

    let automaton = TimedAutomaton {
        name: format!("ctrl({})", arena.name),
        locations,
        initial: loc_of[&initial],
        clocks: arena.clocks.clone(),
        alphabet: arena.alphabet.clone(),
        edges,
        invariants,
    };
    Ok(Extraction {
        automaton,
        loc_node,
        edge_arena,
        pruned,
    })
}

/// Language equality of the high-restrictions of two automata.
fn restricted_language_equal(a: &TimedAutomaton, b: &TimedAutomaton) -> Result<bool> {
    let ra = restrict(a, &a.alphabet.high)?;
    let rb = restrict(b, &b.alphabet.high)?;
    if a.is_clock_free() && b.is_clock_free() {
        let (fwd, _) = language_included(&ra, &rb)?;
        let (bwd, _) = language_included(&rb, &ra)?;
        Ok(fwd && bwd)
    } else {
        let (fwd, _) = timed_language_included(&ra, &rb)?;
        let (bwd, _) = timed_language_included(&rb, &ra)?;
        Ok(fwd && bwd)
    }
}

pub fn synthesize(a: &TimedAutomaton, discipline: MonitorDiscipline) -> Result<SynthesisResult> {
    synthesize_with(a, discipline, None)
}

/// The iteration: each round plays the safety game over the current
/// automaton's monitor product and replaces the automaton by the
/// extraction. Stops when a round prunes nothing, when the restricted
/// language stabilizes, or when the game is lost.
pub fn synthesize_with(
    a: &TimedAutomaton,
    discipline: MonitorDiscipline,
    cancel: Option<&AtomicBool>,
) -> Result<SynthesisResult> {
    if matches!(discipline, MonitorDiscipline::Determinize) && !a.is_clock_free() {
        return Err(Error::ClockedInput(a.name.clone()));
    }

    let mut current = a.clone();
    let mut cur_edge_roots: Vec<Option<usize>> = (0..a.edges.len()).map(Some).collect();
    let mut cur_loc_roots: Vec<LocId> = (0..a.locations.len()).map(LocId).collect();
    let mut rounds: Vec<SynthesisRound> = Vec::new();
    let mut effective = 0usize;
    let mut round_one_size: Option<usize> = None;

    loop {
        let restricted = restrict(&current, &a.alphabet.high)?;
        let monitor_base = match discipline {
            MonitorDiscipline::RequireDeterministic => {
                let silent = restricted.edges.iter().any(|e| e.label.is_epsilon());
                let deterministic =
                    !silent && is_deterministic(&restricted)?.deterministic;
                if !deterministic {
                    if rounds.is_empty() {
                        return Err(Error::OutsideDecidableClass(a.name.clone()));
                    }
                    return Err(Error::Internal(format!(
                        "restriction of round-{} automaton lost determinism",
                        rounds.len()
                    )));
                }
                restricted
            }
            MonitorDiscipline::Determinize => determinize(&restricted)?,
        };
        let mp = monitor_product_with(&current, &monitor_base, &a.alphabet, &a.alphabet.low)?;
        let rg = build_region_graph(&mp.arena);
        round_one_size.get_or_insert(rg.node_count().max(1));

        let initial_winning;
        let strategy = solve_safety_game(
            &mp.arena,
            &rg,
            &mp.bad_locations,
            &a.alphabet.controllable,
            cancel,
        )?;
        match rg.initial {
            None => {
                // No run satisfies the initial invariant: the automaton is
                // trivially secure and the controller restricts nothing.
                return finish(Outcome::Controller, rounds, Some(current), effective, true);
            }
            Some(init) => initial_winning = strategy.winning.contains(&init),
        }

        if !initial_winning {
            rounds.push(SynthesisRound {
                arena: mp.arena,
                bad_locations: mp.bad_locations,
                region_graph: rg,
                strategy,
                controlled: None,
                pruned: false,
                edge_roots: Vec::new(),
                loc_roots: Vec::new(),
                loc_sources: Vec::new(),
            });
            return finish(Outcome::Bot, rounds, None, effective, false);
        }

        let ext = extract_controlled(&mp, &rg, &strategy)?;
        let edge_roots: Vec<Option<usize>> = ext
            .edge_arena
            .iter()
            .map(|&ae| mp.left_edge[ae].and_then(|le| cur_edge_roots[le]))
            .collect();
        let loc_roots: Vec<LocId> = ext
            .loc_node
            .iter()
            .map(|&n| cur_loc_roots[mp.left_loc[rg.nodes[n].loc.0].0])
            .collect();
        let loc_sources: Vec<(LocId, Region)> = ext
            .loc_node
            .iter()
            .map(|&n| (rg.nodes[n].loc, rg.nodes[n].region.clone()))
            .collect();
        let pruned = ext.pruned;
        let controlled = ext.automaton;
        rounds.push(SynthesisRound {
            arena: mp.arena,
            bad_locations: mp.bad_locations,
            region_graph: rg,
            strategy,
            controlled: Some(controlled.clone()),
            pruned,
            edge_roots: edge_roots.clone(),
            loc_roots: loc_roots.clone(),
            loc_sources,
        });

        if !pruned {
            // Confirming round: the game was already safe everywhere.
            return finish(Outcome::Controller, rounds, Some(current), effective, true);
        }
        effective += 1;
        let stabilized = restricted_language_equal(&controlled, &current)?;
        current = controlled;
        cur_edge_roots = edge_roots;
        cur_loc_roots = loc_roots;
        if stabilized {
            return finish(Outcome::Controller, rounds, Some(current), effective, false);
        }
        if matches!(discipline, MonitorDiscipline::Determinize) && effective >= 2 {
            return Err(Error::Internal(
                "clock-free iteration did not stabilize by the second effective round".into(),
            ));
        }
        if rounds.len() > round_one_size.unwrap_or(1) {
            return Err(Error::Internal(
                "iteration exceeded the round-one region bound".into(),
            ));
        }
    }
}

fn finish(
    outcome: Outcome,
    rounds: Vec<SynthesisRound>,
    final_automaton: Option<TimedAutomaton>,
    effective_iterations: usize,
    confirming_round: bool,
) -> Result<SynthesisResult> {
    let verdict = match &final_automaton {
        None => None,
        Some(f) => {
            let v = if f.is_clock_free() {
                crate::untimed::check_snni_untimed(f)?
            } else {
                crate::timed::check_snni_timed(f)?
            };
            if !v.holds {
                return Err(Error::Internal(
                    "self-verification of the synthesized controller failed".into(),
                ));
            }
            Some(v)
        }
    };
    if let Some(first) = rounds.first() {
        if rounds.len() > first.region_graph.node_count().max(1) {
            return Err(Error::Internal(
                "iteration count exceeded the round-one region graph size".into(),
            ));
        }
    }
    Ok(SynthesisResult {
        outcome,
        rounds,
        final_automaton,
        effective_iterations,
        confirming_round,
        verdict,
    })
}

/// Post-hoc validation used by the test suites: strategy closure and
/// maximality on every round, the per-round inclusion of the controlled
/// abstraction in the previous restriction, and the shrinkage of each
/// controlled automaton's region graph into its arena's winning set.
pub fn validate_rounds(a: &TimedAutomaton, result: &SynthesisResult) -> Result<()> {
    let mut previous = a.clone();
    for (i, round) in result.rounds.iter().enumerate() {
        crate::game::validate_strategy(
            &round.arena,
            &round.region_graph,
            &round.bad_locations,
            &a.alphabet.controllable,
            &round.strategy,
        )
        .map_err(|m| Error::Internal(format!("round {i}: {m}")))?;

        let controlled = match &round.controlled {
            Some(c) => c,
            None => continue,
        };

        // Controlled abstraction stays inside the previous restriction.
        let hidden = hide(controlled, &controlled.alphabet.high)?;
        let prev_restricted = restrict(&previous, &previous.alphabet.high)?;
        let included = if controlled.is_clock_free() && previous.is_clock_free() {
            let (ok, _) = language_included(&hidden, &prev_restricted)?;
            ok
        } else {
            let (ok, _) = timed_language_included(&hidden, &prev_restricted)?;
            ok
        };
        if !included {
            return Err(Error::Internal(format!(
                "round {i}: controlled abstraction escapes the previous restriction"
            )));
        }

        // Region shrinkage: every region of the controlled automaton maps
        // to a winning node of its arena. The arena's maximal constants
        // keep the two region partitions comparable.
        let crg = crate::region_graph::build_region_graph_with(
            controlled,
            &round.region_graph.max_consts,
        );
        for node in &crg.nodes {
            let (arena_loc, _) = round.loc_sources[node.loc.0];
            let key = (arena_loc, node.region.clone());
            match round.region_graph.index.get(&key) {
                Some(id) if round.strategy.winning.contains(id) => {}
                _ => {
                    return Err(Error::Internal(format!(
                        "round {i}: controlled region outside the winning set"
                    )));
                }
            }
        }
        previous = controlled.clone();
    }
    Ok(())
}
