#![allow(dead_code)]

use std::sync::Arc;

use fraisse_core::oracle::{enumerate_epimorphisms, enumerate_rooted_trees, ClassSpec};
use fraisse_core::{FiniteGraph, Morphism, RootedTree};
use proptest::prelude::*;
use proptest::sample::Index;

pub fn graph(vertices: &[&str], edges: &[(&str, &str)], root: Option<&str>) -> Arc<FiniteGraph> {
    Arc::new(FiniteGraph::new(vertices.iter().copied(), edges.iter().copied(), root).unwrap())
}

pub fn path3() -> Arc<FiniteGraph> {
    graph(&["r", "a", "b"], &[("r", "a"), ("a", "b")], Some("r"))
}

pub fn cherry() -> Arc<FiniteGraph> {
    graph(&["r", "a", "b"], &[("r", "a"), ("r", "b")], Some("r"))
}

/// Rooted tree on `v0..vn` where `vi` hangs below an earlier vertex.
pub fn tree_from_parents(parents: &[Index]) -> RootedTree {
    let names: Vec<String> = (0..=parents.len()).map(|i| format!("v{i}")).collect();
    let edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
    RootedTree::from_graph(FiniteGraph::from_parts(names, edges, Some(0)).unwrap()).unwrap()
}

pub fn rooted_tree(max: usize) -> impl Strategy<Value = RootedTree> {
    prop::collection::vec(any::<Index>(), 0..max).prop_map(|p| tree_from_parents(&p))
}

/// A random epimorphism from a random rooted tree with at most `max`
/// vertices onto one of the rooted trees with at most `codomain` vertices.
pub fn rooted_epi(max: usize, codomain: usize, spec: ClassSpec) -> impl Strategy<Value = Morphism> {
    (rooted_tree(max), any::<Index>(), any::<Index>()).prop_filter_map("no such map", move |(t, ci, mi)| {
        let targets: Vec<RootedTree> =
            (1..=codomain.min(t.len())).flat_map(enumerate_rooted_trees).collect();
        let c = targets[ci.index(targets.len())].graph_arc().clone();
        let maps = enumerate_epimorphisms(t.graph_arc(), &c, spec);
        (!maps.is_empty()).then(|| maps[mi.index(maps.len())].clone())
    })
}
