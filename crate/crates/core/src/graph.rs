//! Finite graphs with a reflexive, symmetric edge relation.
//!
//! Loops are implicit: every vertex is adjacent to itself and loops are never
//! stored. Vertices are opaque string identifiers; the internal index order is
//! the lexicographic order of the identifiers, so every iteration over
//! `0..len()` is deterministic.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct FiniteGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<usize>>,
    root: Option<usize>,
}

impl PartialEq for FiniteGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.adj == other.adj && self.root == other.root
    }
}

impl Eq for FiniteGraph {}

impl fmt::Debug for FiniteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGraph")
            .field("vertices", &self.names)
            .field("edges", &self.named_edges())
            .field("root", &self.root.map(|r| &self.names[r]))
            .finish()
    }
}

/// Serialized form shared by the JSON import and export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
}

impl FiniteGraph {
    /// Builds a graph from named vertices and edges. Self-edges are dropped
    /// since loops are implicit; repeated edges are merged.
    pub fn new<V, E, A, B>(vertices: V, edges: E, root: Option<&str>) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut pos = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if pos.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(n.clone()));
            }
        }
        let lookup = |s: &str| pos.get(s).copied().ok_or_else(|| Error::UnknownVertex(s.to_string()));
        let mut idx_edges = Vec::new();
        for (a, b) in edges {
            idx_edges.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        let root = root.map(lookup).transpose()?;
        Self::from_parts(names, idx_edges, root)
    }

    /// Builds a graph from names and index pairs into `names`. The names are
    /// re-sorted, so indices of the result need not match the input.
    pub fn from_parts(names: Vec<String>, edges: Vec<(usize, usize)>, root: Option<usize>) -> Result<Self> {
        let n = names.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        let mut relabel = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new;
        }
        let mut sorted = Vec::with_capacity(n);
        let mut index = HashMap::with_capacity(n);
        for &old in &order {
            let name = names[old].clone();
            if index.insert(name.clone(), sorted.len()).is_some() {
                return Err(Error::DuplicateVertex(name));
            }
            sorted.push(name);
        }
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::UnknownVertex(format!("#{}", a.max(b))));
            }
            let (a, b) = (relabel[a], relabel[b]);
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(FiniteGraph { names: sorted, index, adj, root: root.map(|r| relabel[r]) })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn with_root(mut self, root: Option<usize>) -> Self {
        self.root = root;
        self
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Number of neighbours other than the vertex itself.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Proper adjacency; a vertex is not reported adjacent to itself.
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Adjacent or equal, i.e. the reflexive edge relation.
    pub fn linked(&self, a: usize, b: usize) -> bool {
        a == b || self.has_edge(a, b)
    }

    /// Non-degenerate edges as `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn named_edges(&self) -> Vec<(String, String)> {
        self.edges().into_iter().map(|(a, b)| (self.names[a].clone(), self.names[b].clone())).collect()
    }

    /// Connected components of the subgraph induced by `members`. Each
    /// component is sorted and components are ordered by their least vertex.
    pub fn components_of(&self, members: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if !members[start] || seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if members[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn components_in(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let mut members = vec![false; self.len()];
        for &v in subset {
            members[v] = true;
        }
        self.components_of(&members)
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_of(&vec![true; self.len()])
    }

    /// Named variant of [`components_in`](Self::components_in).
    pub fn components_named<S: AsRef<str>>(&self, subset: &[S]) -> Result<Vec<Vec<String>>> {
        let idx = subset.iter().map(|s| self.require(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(self
            .components_in(&idx)
            .into_iter()
            .map(|c| c.into_iter().map(|v| self.names[v].clone()).collect())
            .collect())
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.components().len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() + 1 == self.len()
    }

    /// A tree with at least two vertices, all of order at most two.
    pub fn is_arc(&self) -> bool {
        self.len() >= 2 && self.is_tree() && (0..self.len()).all(|v| self.degree(v) <= 2)
    }

    /// End points of an arc, least first.
    pub fn arc_endpoints(&self) -> Option<(usize, usize)> {
        if !self.is_arc() {
            return None;
        }
        let ends: Vec<usize> = (0..self.len()).filter(|&v| self.degree(v) == 1).collect();
        Some((ends[0], ends[1]))
    }

    /// Unique path between two vertices of a tree, both ends included.
    pub fn tree_path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &w in &self.adj[v] {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![to];
        let mut v = to;
        while v != from {
            v = prev[v];
            path.push(v);
        }
        path.reverse();
        path
    }

    /// Subgraph induced by `subset`, keeping names and the root if present.
    pub fn induced(&self, subset: &[usize]) -> FiniteGraph {
        let mut pos = HashMap::new();
        for (i, &v) in subset.iter().enumerate() {
            pos.insert(v, i);
        }
        let names = subset.iter().map(|&v| self.names[v].clone()).collect();
        let mut edges = Vec::new();
        for (i, &v) in subset.iter().enumerate() {
            for w in &self.adj[v] {
                if let Some(&j) = pos.get(w) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        let root = self.root.and_then(|r| pos.get(&r).copied());
        FiniteGraph::from_parts(names, edges, root).expect("induced subgraph has unique names")
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.names.clone(),
            edges: self.named_edges().into_iter().map(|(a, b)| [a, b]).collect(),
            root: self.root.map(|r| self.names[r].clone()),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        FiniteGraph::new(
            json.vertices.iter().cloned(),
            json.edges.iter().map(|[a, b]| (a.as_str(), b.as_str())),
            json.root.as_deref(),
        )
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("graph serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }
}

/// Picks a name based on `base` that is not yet in `taken` and records it.
pub(crate) fn fresh_name(base: &str, taken: &mut std::collections::HashSet<String>) -> String {
    if taken.insert(base.to_string()) {
        return base.to_string();
    }
    let mut k = 1usize;
    loop {
        let candidate = format!("{base}'{k}");
        if taken.insert(candidate.clone()) {
            return candidate;
        }
        k += 1;
    }
}
