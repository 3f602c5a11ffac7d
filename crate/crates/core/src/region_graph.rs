//! Reachable region graph of a timed automaton: the finite quotient of its
//! dense-time semantics on which reachability and safety games are solved.

use std::collections::{BTreeMap, VecDeque};

use crate::model::{LocId, TimedAutomaton};
use crate::region::{region_count_bound, Region};
use crate::zone::Zone;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgNode {
    pub loc: LocId,
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgEdge {
    /// Index of the originating edge in the automaton.
    pub edge_id: usize,
    pub target: usize,
}

#[derive(Debug, Clone)]
pub struct RegionGraph {
    pub max_consts: Vec<i64>,
    pub nodes: Vec<RgNode>,
    /// Discrete successors per node, sorted by originating edge id.
    pub discrete: Vec<Vec<RgEdge>>,
    /// Unique immediate time successor, absent for time-maximal or
    /// invariant-blocked nodes.
    pub time_succ: Vec<Option<usize>>,
    pub index: BTreeMap<(LocId, Region), usize>,
    /// Absent when the initial valuation violates the initial invariant.
    pub initial: Option<usize>,
}

impl RegionGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_zone(&self, id: usize) -> Zone {
        self.nodes[id].region.to_zone(&self.max_consts)
    }
}

/// Explore the reachable (location, region) space. The output order is
/// canonical: nodes are sorted by location id, then region encoding.
pub fn build_region_graph(a: &TimedAutomaton) -> RegionGraph {
    build_region_graph_with(a, &[])
}

/// Variant taking extra per-clock constants to merge into the automaton's
/// own maximal constants (regions stay comparable across products).
pub fn build_region_graph_with(a: &TimedAutomaton, floor_consts: &[i64]) -> RegionGraph {
    let mut max_consts = a.max_constants();
    for (i, &c) in floor_consts.iter().enumerate() {
        if i < max_consts.len() {
            max_consts[i] = max_consts[i].max(c);
        }
    }
    let n_clocks = a.clocks.len();
    let inv_zones: Vec<Zone> = a
        .invariants
        .iter()
        .map(|inv| a.guard_zone(inv))
        .collect();
    let guard_zones: Vec<Zone> = a.edges.iter().map(|e| a.guard_zone(&e.guard)).collect();

    let mut index: BTreeMap<(LocId, Region), usize> = BTreeMap::new();
    let mut nodes: Vec<RgNode> = Vec::new();
    let mut discrete: Vec<Vec<RgEdge>> = Vec::new();
    let mut time_succ: Vec<Option<usize>> = Vec::new();
    let mut queue = VecDeque::new();

    let origin = Region::origin(n_clocks);
    let initial = if origin.to_zone(&max_consts).intersect(&inv_zones[a.initial.0]).is_empty() {
        None
    } else {
        Some(0usize)
    };
    if initial.is_some() {
        index.insert((a.initial, origin.clone()), 0);
        nodes.push(RgNode {
            loc: a.initial,
            region: origin,
        });
        discrete.push(Vec::new());
        time_succ.push(None);
        queue.push_back(0usize);
    }

    let bound = (a.locations.len() as u128).saturating_mul(region_count_bound(&max_consts));

    while let Some(id) = queue.pop_front() {
        let node = nodes[id].clone();
        let zone = node.region.to_zone(&max_consts);

        let mut intern =
            |loc: LocId,
             region: Region,
             nodes: &mut Vec<RgNode>,
             discrete: &mut Vec<Vec<RgEdge>>,
             time_succ: &mut Vec<Option<usize>>,
             queue: &mut VecDeque<usize>| {
                *index.entry((loc, region.clone())).or_insert_with(|| {
                    let new_id = nodes.len();
                    nodes.push(RgNode { loc, region });
                    discrete.push(Vec::new());
                    time_succ.push(None);
                    queue.push_back(new_id);
                    new_id
                })
            };

        // Discrete successors.
        for (edge_id, edge) in a.edges_from(node.loc) {
            let fire = zone.intersect(&guard_zones[edge_id]);
            if fire.is_empty() {
                continue;
            }
            debug_assert!(
                zone.is_subset(&guard_zones[edge_id]),
                "regions must refine guards"
            );
            let image = fire.reset(edge.resets.iter().copied());
            let landed = image.intersect(&inv_zones[edge.target.0]);
            if landed.is_empty() {
                continue;
            }
            debug_assert!(image.is_subset(&inv_zones[edge.target.0]));
            let target_region = Region::of_zone(&image, &max_consts)
                .expect("non-empty reset image has a sample point");
            debug_assert_eq!(target_region.to_zone(&max_consts), image);
            let target = intern(
                edge.target,
                target_region,
                &mut nodes,
                &mut discrete,
                &mut time_succ,
                &mut queue,
            );
            discrete[id].push(RgEdge { edge_id, target });
        }

        // Time successor, when the invariant admits it.
        if let Some(succ) = node.region.time_successor(&max_consts) {
            let succ_zone = succ.to_zone(&max_consts);
            if !succ_zone.intersect(&inv_zones[node.loc.0]).is_empty() {
                debug_assert!(succ_zone.is_subset(&inv_zones[node.loc.0]));
                let target = intern(
                    node.loc,
                    succ,
                    &mut nodes,
                    &mut discrete,
                    &mut time_succ,
                    &mut queue,
                );
                time_succ[id] = Some(target);
            }
        }

        assert!(
            (nodes.len() as u128) <= bound,
            "region count exceeded the theoretical bound"
        );
    }

    // Canonical order: sort by (location, region) and remap.
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&x, &y| {
        (nodes[x].loc, &nodes[x].region).cmp(&(nodes[y].loc, &nodes[y].region))
    });
    let mut remap = vec![0usize; nodes.len()];
    for (new_id, &old_id) in order.iter().enumerate() {
        remap[old_id] = new_id;
    }
    let mut new_nodes = Vec::with_capacity(nodes.len());
    let mut new_discrete = vec![Vec::new(); nodes.len()];
    let mut new_time = vec![None; nodes.len()];
    for &old_id in &order {
        new_nodes.push(nodes[old_id].clone());
    }
    for (old_id, edges) in discrete.into_iter().enumerate() {
        let mut mapped: Vec<RgEdge> = edges
            .into_iter()
            .map(|e| RgEdge {
                edge_id: e.edge_id,
                target: remap[e.target],
            })
            .collect();
        mapped.sort_by_key(|e| (e.edge_id, e.target));
        new_discrete[remap[old_id]] = mapped;
    }
    for (old_id, succ) in time_succ.into_iter().enumerate() {
        new_time[remap[old_id]] = succ.map(|t| remap[t]);
    }
    let mut new_index = BTreeMap::new();
    for ((key_loc, key_region), old_id) in index {
        new_index.insert((key_loc, key_region), remap[old_id]);
    }

    RegionGraph {
        max_consts,
        nodes: new_nodes,
        discrete: new_discrete,
        time_succ: new_time,
        index: new_index,
        initial: initial.map(|i| remap[i]),
    }
}
