//! Deterministic complete monitors and the monitor product. The monitor is
//! a completed copy of the restriction whose absorbing sink classifies
//! every word as inside or outside the restricted language; reaching a
//! sink-paired product state witnesses an interference trace.

use std::collections::BTreeSet;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::model::{
    is_deterministic, product, restrict, Action, AlphabetSpec, ClockConstraint, Edge,
    Label, LocId, Location, TimedAutomaton, TimedWord,
};
use crate::region_graph::{build_region_graph, RegionGraph};
use crate::zone::Zone;

pub const SINK_NAME: &str = "q_bad";

/// Completed deterministic copy of `a` over the full alphabet: a fresh
/// absorbing sink location receives every move the original cannot make.
/// Invariants are erased and folded into the guards, so the completion
/// never blocks time.
pub fn complete_deterministic(a: &TimedAutomaton, full: &AlphabetSpec) -> Result<TimedAutomaton> {
    if a.edges.iter().any(|e| e.label.is_epsilon()) {
        return Err(Error::NondeterministicMonitor(format!(
            "`{}` has silent edges",
            a.name
        )));
    }
    let check = is_deterministic(a)?;
    if !check.deterministic {
        return Err(Error::NondeterministicMonitor(format!(
            "`{}` is nondeterministic",
            a.name
        )));
    }

    let dim = a.dim();
    let mut locations = a.locations.clone();
    let sink = LocId(locations.len());
    locations.push(Location {
        name: SINK_NAME.to_string(),
    });

    // Folded edges: guard ∧ source invariant ∧ target invariant after reset.
    let mut edges: Vec<Edge> = Vec::new();
    for e in &a.edges {
        let folded = match a.invariant(e.target).reset_preimage(&e.resets) {
            Some(pre) => e
                .guard
                .clone()
                .and(a.invariant(e.source))
                .and(&pre),
            None => continue, // the edge could never fire
        };
        if Zone::from_constraint(dim, &folded).is_empty() {
            continue;
        }
        edges.push(Edge {
            source: e.source,
            guard: folded,
            label: e.label.clone(),
            resets: e.resets.clone(),
            target: e.target,
        });
    }

    // Sink edges cover the complement of each action's enabled set.
    let actions: Vec<Action> = full.all().into_iter().collect();
    let mut sink_edges = Vec::new();
    for loc in 0..a.locations.len() {
        for act in &actions {
            let mut pieces = vec![Zone::universe(dim)];
            for e in edges.iter().filter(|e| {
                e.source == LocId(loc) && e.label.action() == Some(act)
            }) {
                let zone = Zone::from_constraint(dim, &e.guard);
                let mut next = Vec::new();
                for piece in &pieces {
                    for c in zone.complement() {
                        let cut = piece.intersect(&c);
                        if !cut.is_empty() {
                            next.push(cut);
                        }
                    }
                }
                pieces = next;
            }
            for piece in pieces {
                sink_edges.push(Edge {
                    source: LocId(loc),
                    guard: piece.to_constraint(),
                    label: Label::Act(act.clone()),
                    resets: BTreeSet::new(),
                    target: sink,
                });
            }
        }
    }
    edges.extend(sink_edges);
    for act in &actions {
        edges.push(Edge {
            source: sink,
            guard: ClockConstraint::top(),
            label: Label::Act(act.clone()),
            resets: BTreeSet::new(),
            target: sink,
        });
    }

    let n = locations.len();
    Ok(TimedAutomaton {
        name: format!("mon({})", a.name),
        locations,
        initial: a.initial,
        clocks: a.clocks.clone(),
        alphabet: full.clone(),
        edges,
        invariants: vec![ClockConstraint::top(); n],
    })
}

/// The arena for verification and synthesis, with provenance back to the
/// operand automata.
#[derive(Debug, Clone)]
pub struct MonitorProduct {
    pub arena: TimedAutomaton,
    /// Product locations whose monitor component is the sink.
    pub bad_locations: BTreeSet<LocId>,
    /// Arena location -> left-operand location.
    pub left_loc: Vec<LocId>,
    /// Arena location -> monitor location.
    pub right_loc: Vec<LocId>,
    /// Arena edge -> left-operand edge (every arena edge has one).
    pub left_edge: Vec<Option<usize>>,
    /// Arena edge -> monitor edge.
    pub right_edge: Vec<Option<usize>>,
    /// Number of arena clocks owned by the left operand (a prefix).
    pub left_clock_count: usize,
    /// The standalone full-alphabet monitor (before its high edges are
    /// dropped for the product).
    pub monitor: TimedAutomaton,
}

/// Product of `left` with the completed monitor of `right`, synchronized
/// on `sync`. The monitor's non-synchronized edges are dropped first: the
/// monitor only tracks the projection of the left word and never moves
/// alone.
pub fn monitor_product_with(
    left: &TimedAutomaton,
    right: &TimedAutomaton,
    full: &AlphabetSpec,
    sync: &BTreeSet<Action>,
) -> Result<MonitorProduct> {
    let monitor = complete_deterministic(right, full)?;
    let passive: BTreeSet<Action> = monitor
        .alphabet
        .all()
        .difference(sync)
        .cloned()
        .collect();
    let tracked = restrict(&monitor, &passive)?;
    let prod = product(left, &tracked, sync)?;
    let sink = LocId(monitor.locations.len() - 1);
    let bad_locations = prod
        .loc_pairs
        .iter()
        .enumerate()
        .filter(|(_, (_, r))| *r == sink)
        .map(|(i, _)| LocId(i))
        .collect();
    let (left_loc, right_loc) = prod.loc_pairs.iter().copied().unzip();
    let (left_edge, right_edge) = prod.edge_pairs.iter().copied().unzip();
    Ok(MonitorProduct {
        arena: prod.automaton,
        bad_locations,
        left_loc,
        right_loc,
        left_edge,
        right_edge,
        left_clock_count: left.clocks.len(),
        monitor,
    })
}

/// Arena for the non-interference problems: the automaton against the
/// completed monitor of its own restriction, synchronized on the low
/// alphabet. High and silent edges of the left component interleave.
pub fn build_monitor_product(a: &TimedAutomaton) -> Result<MonitorProduct> {
    if !crate::model::is_dta(a) {
        return Err(Error::OutsideDecidableClass(a.name.clone()));
    }
    let restricted = restrict(a, &a.alphabet.high)?;
    monitor_product_with(a, &restricted, &a.alphabet, &a.alphabet.low)
}

/// Shortest path to a sink-paired node, as the list of originating arena
/// edges (time steps omitted).
pub fn bad_path_skeleton(
    rg: &RegionGraph,
    bad: &BTreeSet<LocId>,
) -> Option<Vec<usize>> {
    let initial = rg.initial?;
    let mut parent: Vec<Option<(usize, Option<usize>)>> = vec![None; rg.node_count()];
    let mut seen = vec![false; rg.node_count()];
    let mut queue = std::collections::VecDeque::from([initial]);
    seen[initial] = true;
    let mut found = None;
    if bad.contains(&rg.nodes[initial].loc) {
        found = Some(initial);
    }
    while let Some(id) = queue.pop_front() {
        if found.is_some() {
            break;
        }
        let push = |target: usize,
                        step: Option<usize>,
                        seen: &mut Vec<bool>,
                        parent: &mut Vec<Option<(usize, Option<usize>)>>,
                        queue: &mut std::collections::VecDeque<usize>|
         -> bool {
            if !seen[target] {
                seen[target] = true;
                parent[target] = Some((id, step));
                queue.push_back(target);
                if bad.contains(&rg.nodes[target].loc) {
                    return true;
                }
            }
            false
        };
        for e in &rg.discrete[id] {
            if push(e.target, Some(e.edge_id), &mut seen, &mut parent, &mut queue) {
                found = Some(e.target);
                break;
            }
        }
        if found.is_none() {
            if let Some(succ) = rg.time_succ[id] {
                if push(succ, None, &mut seen, &mut parent, &mut queue) {
                    found = Some(succ);
                }
            }
        }
    }
    let mut skeleton = Vec::new();
    let mut cur = found?;
    while let Some((prev, step)) = parent[cur] {
        if let Some(edge_id) = step {
            skeleton.push(edge_id);
        }
        cur = prev;
    }
    skeleton.reverse();
    Some(skeleton)
}

/// Turn an edge skeleton into concrete delays. Each delay is the
/// deterministic representative of the feasible interval that keeps the
/// rest of the path reachable.
pub fn instantiate_delays(
    arena: &TimedAutomaton,
    skeleton: &[usize],
) -> Result<Vec<(BigRational, Label)>> {
    let dim = arena.dim();
    let inv_zone = |l: LocId| Zone::from_constraint(dim, arena.invariant(l));

    // Backward feasibility sets: from B[i], taking edge i and delays keeps
    // the remaining skeleton alive.
    let mut backward = vec![Zone::universe(dim); skeleton.len() + 1];
    for i in (0..skeleton.len()).rev() {
        let e = &arena.edges[skeleton[i]];
        let after = backward[i + 1].intersect(&inv_zone(e.target));
        let fire = Zone::from_constraint(dim, &e.guard)
            .intersect(&after.reset_preimage(e.resets.iter().copied()))
            .intersect(&inv_zone(e.source));
        if fire.is_empty() {
            return Err(Error::Internal(
                "witness skeleton is not realizable".into(),
            ));
        }
        backward[i] = fire.down().intersect(&inv_zone(e.source));
    }

    let mut v = vec![BigRational::from_integer(0.into()); arena.clocks.len()];
    let mut entries = Vec::with_capacity(skeleton.len());
    for (i, &edge_id) in skeleton.iter().enumerate() {
        let e = &arena.edges[edge_id];
        let after = backward[i + 1].intersect(&inv_zone(e.target));
        let fire = Zone::from_constraint(dim, &e.guard)
            .intersect(&after.reset_preimage(e.resets.iter().copied()))
            .intersect(&inv_zone(e.source));
        let interval = fire
            .delay_interval(&v)
            .ok_or_else(|| Error::Internal("witness delay selection failed".into()))?;
        let delay = interval.pick();
        for x in v.iter_mut() {
            *x += delay.clone();
        }
        for r in &e.resets {
            v[r.0] = BigRational::from_integer(0.into());
        }
        entries.push((delay, e.label.clone()));
    }
    Ok(entries)
}

/// Timed language inclusion `L(b1) ⊆ L(b2)`, decidable when `b2` is
/// deterministic and silent-free. The counterexample is a word of `b1`
/// that `b2` rejects.
pub fn timed_language_included(
    b1: &TimedAutomaton,
    b2: &TimedAutomaton,
) -> Result<(bool, Option<TimedWord>)> {
    let mut all: BTreeSet<Action> = b1.alphabet.all();
    all.extend(b2.alphabet.all());
    let full = AlphabetSpec {
        low: all.clone(),
        high: BTreeSet::new(),
        controllable: BTreeSet::new(),
    };
    let mp = monitor_product_with(b1, b2, &full, &all)?;
    let rg = build_region_graph(&mp.arena);
    match bad_path_skeleton(&rg, &mp.bad_locations) {
        None => Ok((true, None)),
        Some(skeleton) => {
            let entries = instantiate_delays(&mp.arena, &skeleton)?;
            Ok((false, Some(TimedWord::normalize(entries))))
        }
    }
}

/// Monitor self-check used by tests: from every reachable region of the
/// completed monitor, every action has exactly one enabled move up to
/// guard overlap between edges that agree on target and resets.
pub fn monitor_is_complete(monitor: &TimedAutomaton) -> bool {
    let rg = build_region_graph(monitor);
    let actions = monitor.alphabet.all();
    for (id, node) in rg.nodes.iter().enumerate() {
        for act in &actions {
            let targets: BTreeSet<(LocId, Vec<usize>)> = rg.discrete[id]
                .iter()
                .filter(|e| monitor.edges[e.edge_id].label.action() == Some(act))
                .map(|e| {
                    (
                        monitor.edges[e.edge_id].target,
                        monitor.edges[e.edge_id]
                            .resets
                            .iter()
                            .map(|c| c.0)
                            .collect(),
                    )
                })
                .collect();
            if targets.len() != 1 {
              return false;
            }
        }
        let _ = node;
    }
    true
}

/// Clocks of the left operand come first in arena order; used to project
/// arena clock structures back onto the operand.
pub fn left_clock_indices(mp: &MonitorProduct) -> Vec<usize> {
    (0..mp.left_clock_count).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::accepts;
    use crate::fixtures;
    use crate::model::hide;
    use num_traits::FromPrimitive;
    use rand::Rng;
    use rand::SeedableRng;

    fn word(entries: &[(f64, &str)]) -> TimedWord {
        TimedWord::new(
            entries
                .iter()
                .map(|(d, a)| (BigRational::from_f64(*d).unwrap(), Action::new(a)))
                .collect(),
        )
    }

    #[test]
    fn completion_of_empty_automaton_rejects_everything() {
        let unit = fixtures::single_location("unit", &fixtures::aa().alphabet);
        let mon = complete_deterministic(&unit, &fixtures::aa().alphabet).unwrap();
        // Every action from the only location goes to the sink with a true
        // guard.
        let sink = LocId(mon.locations.len() - 1);
        for act in mon.alphabet.all() {
            let hits: Vec<_> = mon
                .edges_from(LocId(0))
                .filter(|(_, e)| e.label.action() == Some(&act))
                .collect();
            assert_eq!(hits.len(), 1);
            assert_eq!(hits[0].1.target, sink);
            assert!(hits[0].1.guard.is_top());
        }
    }

    #[test]
    fn completion_of_k_restriction_splits_on_the_guard() {
        let k = fixtures::k_aut();
        let restricted = restrict(&k, &k.alphabet.high).unwrap();
        let mon = complete_deterministic(&restricted, &k.alphabet).unwrap();
        assert!(monitor_is_complete(&mon));
        let sink = LocId(mon.locations.len() - 1);
        let b = Action::new("b");
        let a_act = Action::new("a");
        // b from location 0 goes straight to the sink with guard true.
        let b_edges: Vec<_> = mon
            .edges_from(LocId(0))
            .filter(|(_, e)| e.label.action() == Some(&b))
            .collect();
        assert_eq!(b_edges.len(), 1);
        assert_eq!(b_edges[0].1.target, sink);
        assert!(b_edges[0].1.guard.is_top());
        // a from location 0 splits: x >= 2 continues, x < 2 dies.
        let a_edges: Vec<_> = mon
            .edges_from(LocId(0))
            .filter(|(_, e)| e.label.action() == Some(&a_act))
            .collect();
        assert_eq!(a_edges.len(), 2);
        let (good, bad): (Vec<_>, Vec<_>) =
            a_edges.into_iter().partition(|(_, e)| e.target != sink);
        assert_eq!(good.len(), 1);
        assert_eq!(bad.len(), 1);
        let dim = mon.dim();
        let good_zone = Zone::from_constraint(dim, &good[0].1.guard);
        let bad_zone = Zone::from_constraint(dim, &bad[0].1.guard);
        assert!(good_zone.intersect(&bad_zone).is_empty());
        assert!(!good_zone.contains(&[BigRational::from_f64(1.0).unwrap()]));
        assert!(bad_zone.contains(&[BigRational::from_f64(1.0).unwrap()]));
    }

    #[test]
    fn monitor_run_classifies_membership() {
        // Sampled words agree with direct membership in the restriction.
        let a2 = fixtures::ak_family(2);
        let restricted = restrict(&a2, &a2.alphabet.high).unwrap();
        let mon = complete_deterministic(&restricted, &a2.alphabet).unwrap();
        let sink = LocId(mon.locations.len() - 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let actions = ["l", "h"];
        for _ in 0..1000 {
            let len = rng.gen_range(0..4);
            let mut entries = Vec::new();
            for _ in 0..len {
                let delay = rng.gen_range(0..8) as f64 / 2.0;
                let act = actions[rng.gen_range(0..actions.len())];
                entries.push((delay, act));
            }
            let w = word(&entries);
            let member = accepts(&restricted, &w).unwrap();
            let monitor_locs = crate::exec::run_locations(&mon, &w).unwrap();
            let ends_outside_sink = !monitor_locs.is_empty() && !monitor_locs.contains(&sink);
            assert_eq!(
                member, ends_outside_sink,
                "word {w} disagrees with its monitor run"
            );
        }
    }

    #[test]
    fn arena_reaches_bad_exactly_on_interference() {
        // Clock-free instance: the bad pair appears after high-then-low.
        let aa = fixtures::aa();
        let mp = build_monitor_product(&aa).unwrap();
        let rg = build_region_graph(&mp.arena);
        let skeleton = bad_path_skeleton(&rg, &mp.bad_locations).unwrap();
        let labels: Vec<String> = skeleton
            .iter()
            .map(|&e| mp.arena.edges[e].label.to_string())
            .collect();
        assert_eq!(labels, vec!["h", "l"]);
    }

    #[test]
    fn k_arena_discovers_the_two_step_leak() {
        // The shortest interference of K fires the early low action (at
        // x >= 2), interleaves the high move and syncs the second low
        // action into the sink.
        let k = fixtures::k_aut();
        let mp = build_monitor_product(&k).unwrap();
        let rg = build_region_graph(&mp.arena);
        let skeleton = bad_path_skeleton(&rg, &mp.bad_locations).unwrap();
        let labels: Vec<String> = skeleton
            .iter()
            .map(|&e| mp.arena.edges[e].label.to_string())
            .collect();
        assert_eq!(labels, vec!["a", "h", "b"]);
        let word = TimedWord::normalize(instantiate_delays(&mp.arena, &skeleton).unwrap());
        assert_eq!(word.pairs[0].1, Action::new("a"));
        assert!(word.pairs[0].0 >= BigRational::from_f64(2.0).unwrap());
    }

    #[test]
    fn arena_bad_unreachable_for_secure_automaton() {
        let a2 = fixtures::ak_family(2);
        let mp = build_monitor_product(&a2).unwrap();
        let rg = build_region_graph(&mp.arena);
        assert!(bad_path_skeleton(&rg, &mp.bad_locations).is_none());
    }

    #[test]
    fn product_run_dies_in_bad_iff_projection_leaves_the_restriction() {
        let a1 = fixtures::ak_family(1);
        let mp = build_monitor_product(&a1).unwrap();
        let restricted = restrict(&a1, &a1.alphabet.high).unwrap();
        let bad_names: BTreeSet<String> = mp
            .bad_locations
            .iter()
            .map(|l| mp.arena.location_name(*l).to_string())
            .collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 1000 {
            let len = rng.gen_range(1..4);
            let mut entries = Vec::new();
            for _ in 0..len {
                let delay = rng.gen_range(0..6) as f64 / 2.0;
                let act = ["l", "h"][rng.gen_range(0..2)];
                entries.push((delay, act));
            }
            let w = word(&entries);
            if !accepts(&a1, &w).unwrap() {
                continue;
            }
            checked += 1;
            let projected = w.project(&a1.alphabet.low);
            let in_restriction = accepts(&restricted, &projected).unwrap();
            // Some arena run ends in a bad pair iff the projection left
            // the restricted language.
            let arena_locs = crate::exec::run_locations(&mp.arena, &w).unwrap();
            let some_bad = arena_locs
                .iter()
                .any(|l| bad_names.contains(mp.arena.location_name(*l)));
            assert_eq!(
                some_bad, !in_restriction,
                "word {w} violates the product correspondence"
            );
        }
    }

    #[test]
    fn inclusion_verdicts_on_guard_families() {
        let a2 = restrict(&fixtures::ak_family(2), &fixtures::ak_family(2).alphabet.high).unwrap();
        let a1 = restrict(&fixtures::ak_family(1), &fixtures::ak_family(1).alphabet.high).unwrap();
        // Same guard x >= 2 on the low edge: mutual inclusion.
        let (ok, _) = timed_language_included(&a2, &a2).unwrap();
        assert!(ok);
        // Relaxing the guard to x >= 1 accepts (1, l) which x >= 2 rejects.
        let mut relaxed = a1.clone();
        relaxed.edges[0].guard = crate::builder::parse_constraint(
            "x>=1",
            &|n| {
                if n == "x" {
                    Ok(crate::model::ClockId(0))
                } else {
                    Err(Error::InvalidModel("clock".into()))
                }
            },
            false,
        )
        .unwrap();
        let (ok, witness) = timed_language_included(&relaxed, &a2).unwrap();
        assert!(!ok);
        let w = witness.unwrap();
        assert_eq!(w.pairs.len(), 1);
        assert_eq!(w.pairs[0].1, Action::new("l"));
        let t = &w.pairs[0].0;
        assert!(*t >= BigRational::from_f64(1.0).unwrap());
        assert!(*t < BigRational::from_f64(2.0).unwrap());
        // The hidden view of a non-interferent automaton stays inside the
        // restriction.
        let aj = fixtures::aj();
        let hidden = hide(&aj, &aj.alphabet.high).unwrap();
        let restricted = restrict(&aj, &aj.alphabet.high).unwrap();
        let (ok, _) = timed_language_included(&hidden, &restricted).unwrap();
        assert!(ok);
    }
}
