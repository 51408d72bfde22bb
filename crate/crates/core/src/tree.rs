//! Rooted trees: ancestor order, heights, successor orders and canonical codes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Root,
    End,
    Ordinary,
    Ramification,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexProfile {
    pub ord: usize,
    pub ht: usize,
    pub sord: usize,
    pub kind: VertexKind,
}

/// A tree together with its root and the derived order structure.
///
/// `x <= y` holds when `x` lies on the path from the root to `y`.
#[derive(Clone, Debug)]
pub struct RootedTree {
    graph: Arc<FiniteGraph>,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    height: Vec<usize>,
    preorder: Vec<usize>,
    tin: Vec<usize>,
    size: Vec<usize>,
}

impl RootedTree {
    pub fn new(graph: Arc<FiniteGraph>) -> Result<Self> {
        let root = graph.root().ok_or(Error::Unrooted)?;
        if !graph.is_tree() {
            return Err(Error::NotATree);
        }
        let n = graph.len();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut height = vec![0; n];
        let mut preorder = Vec::with_capacity(n);
        let mut stack = vec![root];
        let mut visited = vec![false; n];
        visited[root] = true;
        while let Some(v) = stack.pop() {
            preorder.push(v);
            for &w in graph.neighbors(v).iter().rev() {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some(v);
                    height[w] = height[v] + 1;
                    stack.push(w);
                }
            }
        }
        for v in 0..n {
            if let Some(p) = parent[v] {
                children[p].push(v);
            }
        }
        let mut tin = vec![0; n];
        for (i, &v) in preorder.iter().enumerate() {
            tin[v] = i;
        }
        let mut size = vec![1; n];
        for &v in preorder.iter().rev() {
            if let Some(p) = parent[v] {
                size[p] += size[v];
            }
        }
        Ok(RootedTree { graph, root, parent, children, height, preorder, tin, size })
    }

    pub fn from_graph(graph: FiniteGraph) -> Result<Self> {
        Self::new(Arc::new(graph))
    }

    pub fn graph(&self) -> &FiniteGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<FiniteGraph> {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn name(&self, v: usize) -> &str {
        self.graph.name(v)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn height(&self, v: usize) -> usize {
        self.height[v]
    }

    /// Height of the tree: the largest vertex height.
    pub fn tree_height(&self) -> usize {
        self.height.iter().copied().max().unwrap_or(0)
    }

    pub fn sord(&self, v: usize) -> usize {
        self.children[v].len()
    }

    pub fn max_sord(&self) -> usize {
        self.children.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Vertices in depth-first preorder; every subtree is a contiguous slice.
    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.tin[x] <= self.tin[y] && self.tin[y] < self.tin[x] + self.size[x]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// The cone `{y : y >= v}` in preorder.
    pub fn subtree(&self, v: usize) -> &[usize] {
        &self.preorder[self.tin[v]..self.tin[v] + self.size[v]]
    }

    pub fn subtree_size(&self, v: usize) -> usize {
        self.size[v]
    }

    /// The child of `v` whose cone contains `w`, for `w > v`.
    pub fn child_toward(&self, v: usize, w: usize) -> Option<usize> {
        if !self.lt(v, w) {
            return None;
        }
        self.children[v].iter().copied().find(|&c| self.leq(c, w))
    }

    pub fn is_end(&self, v: usize) -> bool {
        v != self.root && self.children[v].is_empty()
    }

    /// Successor order at least two; the root is included.
    pub fn is_ramification(&self, v: usize) -> bool {
        self.children[v].len() >= 2
    }

    pub fn is_ordinary(&self, v: usize) -> bool {
        self.children[v].len() == 1
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        if v == self.root {
            VertexKind::Root
        } else {
            match self.children[v].len() {
                0 => VertexKind::End,
                1 => VertexKind::Ordinary,
                _ => VertexKind::Ramification,
            }
        }
    }

    pub fn profile(&self, v: usize) -> VertexProfile {
        VertexProfile { ord: self.graph.degree(v), ht: self.height[v], sord: self.sord(v), kind: self.kind(v) }
    }

    pub fn profile_named(&self, name: &str) -> Result<VertexProfile> {
        Ok(self.profile(self.graph.require(name)?))
    }

    pub fn end_vertices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.is_end(v)).collect()
    }

    /// Path from the root to `v`, both included.
    pub fn root_path(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// One root-to-end path per end vertex, in vertex order. A one-vertex
    /// tree has the single branch `[root]`.
    pub fn branches(&self) -> Vec<Vec<usize>> {
        let ends = self.end_vertices();
        if ends.is_empty() {
            return vec![vec![self.root]];
        }
        ends.into_iter().map(|e| self.root_path(e)).collect()
    }

    /// Every end vertex at the tree height and every other vertex with the
    /// same successor order as the tree.
    pub fn is_regular(&self) -> bool {
        let s = self.max_sord();
        let h = self.tree_height();
        (0..self.len()).all(|v| if self.is_end(v) { self.height[v] == h } else { self.sord(v) == s })
    }

    /// Canonical codes of every cone, indexed by vertex.
    pub fn cone_codes(&self) -> Vec<String> {
        self.codes_with(|_| String::new())
    }

    /// Cone codes where each vertex is tagged with a numeric label.
    pub fn labeled_cone_codes(&self, labels: &[usize]) -> Vec<String> {
        self.codes_with(|v| labels[v].to_string())
    }

    fn codes_with(&self, tag: impl Fn(usize) -> String) -> Vec<String> {
        let mut codes = vec![String::new(); self.len()];
        for &v in self.preorder.iter().rev() {
            let mut parts: Vec<&str> = self.children[v].iter().map(|&c| codes[c].as_str()).collect();
            parts.sort_unstable();
            let mut code = tag(v);
            code.push('(');
            for p in parts {
                code.push_str(p);
            }
            code.push(')');
            codes[v] = code;
        }
        codes
    }

    /// Isomorphism-invariant code: equal codes exactly for isomorphic rooted trees.
    pub fn canonical_code(&self) -> String {
        self.cone_codes().swap_remove(self.root)
    }

    /// Children of `v` sorted by cone code, ties by vertex index.
    pub fn sorted_children(&self, v: usize, codes: &[String]) -> Vec<usize> {
        let mut c = self.children[v].clone();
        c.sort_by(|&a, &b| codes[a].cmp(&codes[b]).then(a.cmp(&b)));
        c
    }
}

/// Root-preserving isomorphism `self -> other` respecting optional labels,
/// returned as a vertex map.
pub fn find_isomorphism(
    a: &RootedTree,
    labels_a: Option<&[usize]>,
    b: &RootedTree,
    labels_b: Option<&[usize]>,
) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let (ca, cb) = match (labels_a, labels_b) {
        (Some(la), Some(lb)) => (a.labeled_cone_codes(la), b.labeled_cone_codes(lb)),
        (None, None) => (a.cone_codes(), b.cone_codes()),
        _ => return None,
    };
    if ca[a.root()] != cb[b.root()] {
        return None;
    }
    let mut map = vec![usize::MAX; a.len()];
    let mut stack = vec![(a.root(), b.root())];
    while let Some((x, y)) = stack.pop() {
        map[x] = y;
        let kx = a.sorted_children(x, &ca);
        let ky = b.sorted_children(y, &cb);
        for (u, w) in kx.into_iter().zip(ky) {
            stack.push((u, w));
        }
    }
    Some(map)
}

pub fn is_isomorphic(a: &RootedTree, b: &RootedTree) -> bool {
    a.len() == b.len() && a.canonical_code() == b.canonical_code()
}

/// Canonical code of an unrooted tree: the least rooted code over its centers.
pub fn unrooted_tree_code(g: &FiniteGraph) -> Result<String> {
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let mut best: Option<String> = None;
    for c in tree_centers(g) {
        let t = RootedTree::from_graph(g.clone().with_root(Some(c)))?;
        let code = t.canonical_code();
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    }
    Ok(best.expect("a tree has a center"))
}

/// The one or two vertices minimizing eccentricity.
pub fn tree_centers(g: &FiniteGraph) -> Vec<usize> {
    let n = g.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in g.neighbors(v) {
                if deg[w] > 1 {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
            deg[v] = 0;
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rooted(vs: &[&str], es: &[(&str, &str)], root: &str) -> RootedTree {
        RootedTree::from_graph(FiniteGraph::new(vs.iter().copied(), es.iter().copied(), Some(root)).unwrap()).unwrap()
    }

    #[test]
    fn profiles_of_a_small_tree() {
        let t = rooted(&["r", "a", "b", "c"], &[("r", "a"), ("a", "b"), ("a", "c")], "r");
        let a = t.profile_named("a").unwrap();
        assert_eq!(a, VertexProfile { ord: 3, ht: 1, sord: 2, kind: VertexKind::Ramification });
        let r = t.profile_named("r").unwrap();
        assert_eq!(r.kind, VertexKind::Root);
        assert_eq!(r.sord, 1);
        assert_eq!(t.profile_named("b").unwrap().kind, VertexKind::End);
        assert_eq!(t.branches().len(), 2);
    }

    #[test]
    fn order_and_cones() {
        let t = rooted(&["r", "a", "b", "c"], &[("r", "a"), ("a", "b"), ("r", "c")], "r");
        let g = t.graph();
        let (r, a, b, c) = (g.require("r").unwrap(), g.require("a").unwrap(), g.require("b").unwrap(), g.require("c").unwrap());
        assert!(t.leq(r, b) && t.leq(a, b) && !t.leq(c, b) && t.leq(b, b));
        assert_eq!(t.child_toward(r, b), Some(a));
        let mut cone = t.subtree(a).to_vec();
        cone.sort();
        assert_eq!(cone, vec![a, b]);
    }

    #[test]
    fn regularity() {
        let t = rooted(&["r", "a", "b"], &[("r", "a"), ("r", "b")], "r");
        assert!(t.is_regular());
        let p = rooted(&["r", "a", "b"], &[("r", "a"), ("a", "b")], "r");
        assert!(p.is_regular());
        let u = rooted(&["r", "a", "b", "c"], &[("r", "a"), ("r", "b"), ("a", "c")], "r");
        assert!(!u.is_regular());
    }

    #[test]
    fn isomorphism_ignores_names() {
        let a = rooted(&["r", "x", "y", "z"], &[("r", "x"), ("x", "y"), ("r", "z")], "r");
        let b = rooted(&["0", "1", "2", "3"], &[("0", "1"), ("0", "2"), ("2", "3")], "0");
        assert!(is_isomorphic(&a, &b));
        let map = find_isomorphism(&a, None, &b, None).unwrap();
        for (u, v) in a.graph().edges() {
            assert!(b.graph().has_edge(map[u], map[v]));
        }
        let c = rooted(&["0", "1", "2", "3"], &[("0", "1"), ("1", "2"), ("2", "3")], "0");
        assert!(!is_isomorphic(&a, &c));
    }

    #[test]
    fn centers() {
        let g = FiniteGraph::new(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d")], None).unwrap();
        assert_eq!(tree_centers(&g), vec![1, 2]);
        let h = FiniteGraph::new(["a", "b", "c"], [("a", "b"), ("b", "c")], None).unwrap();
        assert_eq!(tree_centers(&h), vec![1]);
    }
}
