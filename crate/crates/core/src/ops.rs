//! Elementary constructions on trees that come with their bonding map.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{fresh_name, FiniteGraph};
use crate::morphism::Morphism;
use crate::tree::RootedTree;

/// Incremental graph construction with stable builder ids.
#[derive(Default)]
pub struct Builder {
    names: Vec<String>,
    taken: HashSet<String>,
    edges: Vec<(usize, usize)>,
    root: Option<usize>,
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vertex, renaming it if the name is taken.
    pub fn vertex(&mut self, name: &str) -> usize {
        let name = fresh_name(name, &mut self.taken);
        self.names.push(name);
        self.names.len() - 1
    }

    pub fn edge(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    pub fn set_root(&mut self, r: usize) {
        self.root = Some(r);
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// The finished graph and, for every builder id, its index in the graph.
    pub fn finish(self) -> (Arc<FiniteGraph>, Vec<usize>) {
        let names = self.names.clone();
        let g = FiniteGraph::from_parts(self.names, self.edges, self.root).expect("builder names are unique");
        let ids = names.iter().map(|n| g.index_of(n).unwrap()).collect();
        (Arc::new(g), ids)
    }
}

/// Copies `g` into a builder; returns the builder and the ids of `g`'s vertices.
pub fn builder_from(g: &FiniteGraph) -> (Builder, Vec<usize>) {
    let mut b = Builder::new();
    let ids: Vec<usize> = (0..g.len()).map(|v| b.vertex(g.name(v))).collect();
    for (x, y) in g.edges() {
        b.edge(ids[x], ids[y]);
    }
    if let Some(r) = g.root() {
        b.set_root(ids[r]);
    }
    (b, ids)
}

/// Collapses each class to one vertex. `class_of` assigns class ids `0..k`;
/// the class keeps the name of its least member.
pub fn quotient(g: &Arc<FiniteGraph>, class_of: &[usize]) -> Result<Morphism> {
    let k = class_of.iter().max().map_or(0, |m| m + 1);
    let mut rep = vec![usize::MAX; k];
    for v in 0..g.len() {
        if rep[class_of[v]] == usize::MAX {
            rep[class_of[v]] = v;
        }
    }
    let names: Vec<String> = rep.iter().map(|&v| g.name(v).to_string()).collect();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| (class_of[a], class_of[b]))
        .filter(|(a, b)| a != b)
        .collect();
    let root = g.root().map(|r| class_of[r]);
    let q = Arc::new(FiniteGraph::from_parts(names.clone(), edges, root)?);
    let map = (0..g.len()).map(|v| q.index_of(&names[class_of[v]]).unwrap()).collect();
    Morphism::new(g.clone(), q, map)
}

/// Quotient identifying `absorbed` with `keep`.
pub fn contract(g: &Arc<FiniteGraph>, absorbed: usize, keep: usize) -> Result<Morphism> {
    let mut class_of: Vec<usize> = Vec::with_capacity(g.len());
    let mut next = 0;
    for v in 0..g.len() {
        if v == absorbed {
            class_of.push(usize::MAX);
        } else {
            class_of.push(next);
            next += 1;
        }
    }
    class_of[absorbed] = class_of[keep];
    named_quotient(g, &class_of, |cls| cls.contains(&keep).then_some(keep))
}

/// Quotient where `pick` may choose which member names a class.
pub(crate) fn named_quotient(
    g: &Arc<FiniteGraph>,
    class_of: &[usize],
    pick: impl Fn(&[usize]) -> Option<usize>,
) -> Result<Morphism> {
    let k = class_of.iter().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); k];
    for v in 0..g.len() {
        members[class_of[v]].push(v);
    }
    let names: Vec<String> =
        members.iter().map(|m| g.name(pick(m).unwrap_or(m[0])).to_string()).collect();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| (class_of[a], class_of[b]))
        .filter(|(a, b)| a != b)
        .collect();
    let root = g.root().map(|r| class_of[r]);
    let q = Arc::new(FiniteGraph::from_parts(names.clone(), edges, root)?);
    let map = (0..g.len()).map(|v| q.index_of(&names[class_of[v]]).unwrap()).collect();
    Morphism::new(g.clone(), q, map)
}

fn edge_indices(t: &FiniteGraph, a: &str, b: &str) -> Result<(usize, usize)> {
    let (x, y) = (t.require(a)?, t.require(b)?);
    if !t.has_edge(x, y) {
        return Err(Error::Precondition(format!("`{a}` and `{b}` are not adjacent")));
    }
    Ok((x, y))
}

/// Inserts a new vertex into the edge `⟨a, b⟩`, mapped to `image` (one of
/// `a`, `b`). Returns the bonding map from the refined tree onto `t`.
pub fn split_edge(t: &Arc<FiniteGraph>, a: &str, b: &str, image: &str, name: Option<&str>) -> Result<Morphism> {
    let (x, y) = edge_indices(t, a, b)?;
    let img = t.require(image)?;
    if img != x && img != y {
        return Err(Error::Precondition(format!("`{image}` is not an end of the split edge")));
    }
    let mut builder = Builder::new();
    let ids: Vec<usize> = (0..t.len()).map(|v| builder.vertex(t.name(v))).collect();
    for (u, v) in t.edges() {
        if (u, v) != (x.min(y), x.max(y)) {
            builder.edge(ids[u], ids[v]);
        }
    }
    let new = builder.vertex(name.unwrap_or(&format!("{a}~{b}")));
    builder.edge(ids[x], new);
    builder.edge(new, ids[y]);
    if let Some(r) = t.root() {
        builder.set_root(ids[r]);
    }
    let (s, sid) = builder.finish();
    let mut map = vec![0; s.len()];
    for v in 0..t.len() {
        map[sid[ids[v]]] = v;
    }
    map[sid[new]] = img;
    Morphism::new(s, t.clone(), map)
}

/// Attaches a new end vertex at `v`, mapped to `v`.
pub fn add_edge(t: &Arc<FiniteGraph>, v: &str, name: Option<&str>) -> Result<Morphism> {
    let at = t.require(v)?;
    let (mut builder, ids) = builder_from(t);
    let new = builder.vertex(name.unwrap_or(&format!("{v}+")));
    builder.edge(ids[at], new);
    let (s, sid) = builder.finish();
    let mut map = vec![0; s.len()];
    for u in 0..t.len() {
        map[sid[ids[u]]] = u;
    }
    map[sid[new]] = at;
    Morphism::new(s, t.clone(), map)
}

/// Replaces `⟨a, b⟩` by the path `a, a', b', b` with `a' ↦ a` and `b' ↦ b`.
pub fn antitransitivity_split(t: &Arc<FiniteGraph>, a: &str, b: &str) -> Result<Morphism> {
    let (x, y) = edge_indices(t, a, b)?;
    let mut builder = Builder::new();
    let ids: Vec<usize> = (0..t.len()).map(|v| builder.vertex(t.name(v))).collect();
    for (u, v) in t.edges() {
        if (u, v) != (x.min(y), x.max(y)) {
            builder.edge(ids[u], ids[v]);
        }
    }
    let na = builder.vertex(&format!("{a}>{b}"));
    let nb = builder.vertex(&format!("{b}<{a}"));
    builder.edge(ids[x], na);
    builder.edge(na, nb);
    builder.edge(nb, ids[y]);
    if let Some(r) = t.root() {
        builder.set_root(ids[r]);
    }
    let (s, sid) = builder.finish();
    let mut map = vec![0; s.len()];
    for v in 0..t.len() {
        map[sid[ids[v]]] = v;
    }
    map[sid[na]] = x;
    map[sid[nb]] = y;
    Morphism::new(s, t.clone(), map)
}

/// Attaches `extra` further copies of the cone above `top` to its parent;
/// each copy maps onto the original cone.
pub fn duplicate_cone(t: &RootedTree, top: usize, extra: usize) -> Result<Morphism> {
    let parent = t.parent(top).ok_or_else(|| Error::Precondition("the root has no cone to duplicate".into()))?;
    let g = t.graph_arc();
    let (mut builder, ids) = builder_from(g);
    let mut image: Vec<usize> = (0..g.len()).collect();
    for k in 1..=extra {
        let cone = t.subtree(top);
        let mut copy = std::collections::HashMap::new();
        for &v in cone {
            let id = builder.vertex(&format!("{}#{k}", g.name(v)));
            copy.insert(v, id);
            image.push(v);
        }
        for &v in cone {
            let p = t.parent(v).unwrap();
            let pid = if v == top { ids[parent] } else { copy[&p] };
            builder.edge(pid, copy[&v]);
        }
    }
    let (s, sid) = builder.finish();
    let mut map = vec![0; s.len()];
    for (bid, &img) in image.iter().enumerate() {
        map[sid[bid]] = img;
    }
    Morphism::new(s, g.clone(), map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> Arc<FiniteGraph> {
        Arc::new(FiniteGraph::new(["r", "a", "b"], [("r", "a"), ("r", "b")], Some("r")).unwrap())
    }

    #[test]
    fn split_is_a_splitting_edge_map() {
        let f = split_edge(&a1(), "r", "a", "r", Some("x")).unwrap();
        assert_eq!(f.domain().len(), 4);
        assert!(f.is_splitting_edge());
        assert!(f.is_monotone() && f.is_confluent());
        assert_eq!(f.image_of("x").unwrap(), "r");
    }

    #[test]
    fn added_edge_is_an_adding_edge_map() {
        let f = add_edge(&a1(), "a", Some("y")).unwrap();
        assert!(f.is_adding_edge());
        assert!(!f.is_end_vertex_preserving() || f.domain().len() == 4);
    }

    #[test]
    fn antitransitivity_split_shape() {
        let f = antitransitivity_split(&a1(), "r", "a").unwrap();
        assert_eq!(f.domain().len(), 5);
        assert!(f.is_monotone() && f.is_confluent());
        let t = f.domain_tree().unwrap();
        assert_eq!(t.tree_height(), 3);
    }

    #[test]
    fn duplicated_cone_is_elementary() {
        let t = RootedTree::new(a1()).unwrap();
        let a = t.graph().require("a").unwrap();
        let f = duplicate_cone(&t, a, 1).unwrap();
        assert!(f.is_elementary_light_confluent());
        let g = duplicate_cone(&t, a, 2).unwrap();
        assert!(g.is_light() && g.is_confluent() && !g.is_elementary_light_confluent());
    }

    #[test]
    fn contraction_keeps_the_named_vertex() {
        let g = Arc::new(FiniteGraph::new(["p", "q", "r"], [("p", "q"), ("q", "r")], None).unwrap());
        let f = contract(&g, 0, 1).unwrap();
        assert_eq!(f.codomain().names(), &["q".to_string(), "r".to_string()]);
    }
}
