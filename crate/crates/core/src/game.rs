//! Safety games on region graphs. The controller picks controllable
//! actions and time passage; the environment owns uncontrollable and
//! silent moves. The greatest fixpoint yields the most permissive
//! memoryless strategy over region-graph nodes.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicBool, Ordering};

use crate::error::{Error, Result};
use crate::model::{Action, Label, LocId, TimedAutomaton};
use crate::region_graph::RegionGraph;

/// Moves the strategy permits at one winning node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AllowedMoves {
    pub actions: BTreeSet<Action>,
    /// Whether letting time elapse to the successor region is safe.
    pub lambda: bool,
}

/// Most permissive winning strategy, memoryless on the region graph.
#[derive(Debug, Clone)]
pub struct Strategy {
    pub winning: BTreeSet<usize>,
    pub allowed: BTreeMap<usize, AllowedMoves>,
}

impl Strategy {
    pub fn is_winning_from(&self, node: usize) -> bool {
        self.winning.contains(&node)
    }
}

fn is_controllable(label: &Label, controllable: &BTreeSet<Action>) -> bool {
    match label {
        Label::Act(a) => controllable.contains(a),
        Label::Epsilon => false,
    }
}

/// Enabled controllable actions at `node` whose every edge stays inside
/// `winning`.
fn safe_controllable(
    arena: &TimedAutomaton,
    rg: &RegionGraph,
    winning: &BTreeSet<usize>,
    controllable: &BTreeSet<Action>,
    node: usize,
) -> BTreeSet<Action> {
    let mut enabled: BTreeMap<&Action, bool> = BTreeMap::new();
    for e in &rg.discrete[node] {
        if let Label::Act(a) = &arena.edges[e.edge_id].label {
            if controllable.contains(a) {
                let entry = enabled.entry(a).or_insert(true);
                *entry = *entry && winning.contains(&e.target);
            }
        }
    }
    enabled
        .into_iter()
        .filter(|(_, all_safe)| *all_safe)
        .map(|(a, _)| a.clone())
        .collect()
}

/// Greatest fixpoint of the safe-node set. A node dies when an
/// uncontrollable move escapes, or when time drifts out and no
/// controllable action can preempt it. Cancellation is checked between
/// sweeps.
pub fn solve_safety_game(
    arena: &TimedAutomaton,
    rg: &RegionGraph,
    bad_locations: &BTreeSet<LocId>,
    controllable: &BTreeSet<Action>,
    cancel: Option<&AtomicBool>,
) -> Result<Strategy> {
    let mut winning: BTreeSet<usize> = (0..rg.node_count())
        .filter(|&n| !bad_locations.contains(&rg.nodes[n].loc))
        .collect();

    loop {
        if let Some(flag) = cancel {
            if flag.load(Ordering::Relaxed) {
                return Err(Error::Cancelled);
            }
        }
        let mut doomed = Vec::new();
        for &n in &winning {
            let mut dead = false;
            for e in &rg.discrete[n] {
                let label = &arena.edges[e.edge_id].label;
                if !is_controllable(label, controllable) && !winning.contains(&e.target) {
                    dead = true;
                    break;
                }
            }
            if !dead {
                if let Some(succ) = rg.time_succ[n] {
                    if !winning.contains(&succ)
                        && safe_controllable(arena, rg, &winning, controllable, n).is_empty()
                    {
                        dead = true;
                    }
                }
            }
            if dead {
                doomed.push(n);
            }
        }
        if doomed.is_empty() {
            break;
        }
        for n in doomed {
            winning.remove(&n);
        }
    }

    let mut allowed = BTreeMap::new();
    for &n in &winning {
        let actions = safe_controllable(arena, rg, &winning, controllable, n);
        let lambda = match rg.time_succ[n] {
            None => true,
            Some(succ) => winning.contains(&succ),
        };
        allowed.insert(n, AllowedMoves { actions, lambda });
    }
    Ok(Strategy { winning, allowed })
}

/// Exhaustive closure and maximality check of a solved game.
pub fn validate_strategy(
    arena: &TimedAutomaton,
    rg: &RegionGraph,
    bad_locations: &BTreeSet<LocId>,
    controllable: &BTreeSet<Action>,
    strategy: &Strategy,
) -> std::result::Result<(), String> {
    for &n in &strategy.winning {
        if bad_locations.contains(&rg.nodes[n].loc) {
            return Err(format!("bad node {n} marked winning"));
        }
        let moves = strategy
            .allowed
            .get(&n)
            .ok_or_else(|| format!("winning node {n} has no allowed set"))?;
        let mut enabled: BTreeMap<Action, Vec<usize>> = BTreeMap::new();
        for e in &rg.discrete[n] {
            match &arena.edges[e.edge_id].label {
                Label::Act(a) if controllable.contains(a) => {
                    enabled.entry(a.clone()).or_default().push(e.target);
                }
                _ => {
                    // Closure over environment moves.
                    if !strategy.winning.contains(&e.target) {
                        return Err(format!(
                            "uncontrollable edge escapes the winning set at node {n}"
                        ));
                    }
                }
            }
        }
        for (action, targets) in &enabled {
            let all_safe = targets.iter().all(|t| strategy.winning.contains(t));
            let allowed = moves.actions.contains(action);
            if allowed && !all_safe {
                return Err(format!(
                    "allowed action {action} leaves the winning set at node {n}"
                ));
            }
            if !allowed && all_safe {
                return Err(format!(
                    "safe action {action} missing from the allowed set at node {n} (not most permissive)"
                ));
            }
        }
        for action in &moves.actions {
            if !enabled.contains_key(action) {
                return Err(format!(
                    "allowed action {action} is not enabled at node {n}"
                ));
            }
        }
        match rg.time_succ[n] {
            None => {
                if !moves.lambda {
                    return Err(format!(
                        "time-maximal node {n} must keep time passage allowed"
                    ));
                }
            }
            Some(succ) => {
                let safe = strategy.winning.contains(&succ);
                if moves.lambda != safe {
                    return Err(format!(
                        "time passage at node {n} is {} but its successor is {}",
                        if moves.lambda { "allowed" } else { "forbidden" },
                        if safe { "winning" } else { "losing" },
                    ));
                }
            }
        }
    }
    Ok(())
}
