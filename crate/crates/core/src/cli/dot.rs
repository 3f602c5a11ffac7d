//! Graphviz export with stable, sorted output.

use crate::cli::printer::constraint_string;
use crate::model::TimedAutomaton;
use crate::monitor::MonitorProduct;
use crate::region_graph::RegionGraph;
use crate::zone::Zone;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn automaton_dot(a: &TimedAutomaton) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n");
    for (i, loc) in a.locations.iter().enumerate() {
        let inv = &a.invariants[i];
        let label = if inv.is_top() {
            loc.name.clone()
        } else {
            format!("{}\\n[{}]", loc.name, constraint_string(a, inv))
        };
        let shape = if a.initial.0 == i {
            " shape=doublecircle"
        } else {
            ""
        };
        out.push_str(&format!("  n{i} [label=\"{}\"{shape}];\n", escape(&label)));
    }
    for e in &a.edges {
        let mut label = e.label.to_string();
        if !e.guard.is_top() {
            label.push_str(&format!(", {}", constraint_string(a, &e.guard)));
        }
        if !e.resets.is_empty() {
            let names: Vec<&str> = e.resets.iter().map(|c| a.clock_name(*c)).collect();
            label.push_str(&format!(", {{{}}}", names.join(" ")));
        }
        out.push_str(&format!(
            "  n{} -> n{} [label=\"{}\"];\n",
            e.source.0,
            e.target.0,
            escape(&label)
        ));
    }
    out.push_str("}\n");
    out
}

fn region_label(a: &TimedAutomaton, rg: &RegionGraph, node: usize) -> String {
    let zone = rg.node_zone(node);
    if zone == Zone::universe(zone.dim()) {
        a.location_name(rg.nodes[node].loc).to_string()
    } else {
        format!(
            "{}\\n{}",
            a.location_name(rg.nodes[node].loc),
            constraint_string(a, &zone.to_constraint())
        )
    }
}

pub fn region_graph_dot(a: &TimedAutomaton, rg: &RegionGraph) -> String {
    let mut out = String::from("digraph regiongraph {\n  rankdir=LR;\n");
    for node in 0..rg.node_count() {
        let shape = if rg.initial == Some(node) {
            " shape=doublecircle"
        } else {
            ""
        };
        out.push_str(&format!(
            "  n{node} [label=\"{}\"{shape}];\n",
            escape(&region_label(a, rg, node))
        ));
    }
    for node in 0..rg.node_count() {
        for e in &rg.discrete[node] {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{}\"];\n",
                node,
                e.target,
                escape(&a.edges[e.edge_id].label.to_string())
            ));
        }
        if let Some(succ) = rg.time_succ[node] {
            out.push_str(&format!(
                "  n{node} -> n{succ} [style=dashed label=\"delay\"];\n"
            ));
        }
    }
    out.push_str("}\n");
    out
}

pub fn arena_dot(mp: &MonitorProduct, rg: &RegionGraph) -> String {
    let mut out = String::from("digraph arena {\n  rankdir=LR;\n");
    for node in 0..rg.node_count() {
        let bad = mp.bad_locations.contains(&rg.nodes[node].loc);
        let mut attrs = String::new();
        if rg.initial == Some(node) {
            attrs.push_str(" shape=doublecircle");
        }
        if bad {
            attrs.push_str(" color=red style=filled fillcolor=mistyrose");
        }
        out.push_str(&format!(
            "  n{node} [label=\"{}\"{attrs}];\n",
            escape(&region_label(&mp.arena, rg, node))
        ));
    }
    for node in 0..rg.node_count() {
        for e in &rg.discrete[node] {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{}\"];\n",
                node,
                e.target,
                escape(&mp.arena.edges[e.edge_id].label.to_string())
            ));
        }
        if let Some(succ) = rg.time_succ[node] {
            out.push_str(&format!(
                "  n{node} -> n{succ} [style=dashed label=\"delay\"];\n"
            ));
        }
    }
    out.push_str("}\n");
    out
}
