use std::collections::HashSet;
use std::sync::Arc;

use crate::canon::graph_canonical_code;
use crate::graph::FiniteGraph;
use crate::morphism::Morphism;
use crate::tree::{unrooted_tree_code, RootedTree};

/// Required flags for a map; unset flags are not checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassSpec {
    pub monotone: bool,
    pub light: bool,
    pub confluent: bool,
    pub end_vertex_preserving: bool,
}

impl ClassSpec {
    pub const ANY: ClassSpec = ClassSpec { monotone: false, light: false, confluent: false, end_vertex_preserving: false };
    pub const MONOTONE: ClassSpec = ClassSpec { monotone: true, ..Self::ANY };
    pub const CONFLUENT: ClassSpec = ClassSpec { confluent: true, ..Self::ANY };
    pub const LIGHT_CONFLUENT: ClassSpec = ClassSpec { light: true, confluent: true, ..Self::ANY };
    pub const CONFLUENT_EVP: ClassSpec = ClassSpec { confluent: true, end_vertex_preserving: true, ..Self::ANY };

    pub fn admits(&self, f: &Morphism) -> bool {
        (!self.monotone || f.is_monotone())
            && (!self.light || f.is_light())
            && (!self.confluent || f.is_confluent())
            && (!self.end_vertex_preserving || f.is_end_vertex_preserving())
    }
}

fn names(n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{i:0width$}")).collect()
}

/// Rebuilds a rooted tree with vertices named by preorder position.
fn renumber(t: &RootedTree) -> FiniteGraph {
    let order = t.preorder();
    let mut pos = vec![0; t.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let edges = t.graph().edges().into_iter().map(|(a, b)| (pos[a], pos[b])).collect();
    FiniteGraph::from_parts(names(t.len()), edges, Some(0)).unwrap()
}

/// All rooted trees with exactly `n` vertices up to isomorphism, named
/// `0..n` in preorder with the root `0`.
pub fn enumerate_rooted_trees(n: usize) -> Vec<RootedTree> {
    if n == 0 {
        return Vec::new();
    }
    let mut level = vec![RootedTree::from_graph(FiniteGraph::new(["0"], Vec::<(&str, &str)>::new(), Some("0")).unwrap()).unwrap()];
    for size in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for t in &level {
            for v in 0..t.len() {
                let mut edges = t.graph().edges();
                edges.push((v, t.len()));
                let mut nm: Vec<String> = t.graph().names().to_vec();
                nm.push(format!("~{size}"));
                let g = FiniteGraph::from_parts(nm, edges, t.graph().root()).unwrap();
                let nt = RootedTree::from_graph(g).unwrap();
                if seen.insert(nt.canonical_code()) {
                    next.push(RootedTree::from_graph(renumber(&nt)).unwrap());
                }
            }
        }
        level = next;
    }
    level.sort_by_key(|t| t.canonical_code());
    level
}

/// All unrooted trees with exactly `n` vertices up to isomorphism.
pub fn enumerate_trees(n: usize) -> Vec<FiniteGraph> {
    let mut out: Vec<(String, FiniteGraph)> = Vec::new();
    let mut seen = HashSet::new();
    for t in enumerate_rooted_trees(n) {
        let g = t.graph().clone().with_root(None);
        let code = unrooted_tree_code(&g).unwrap();
        if seen.insert(code.clone()) {
            out.push((code, g));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, g)| g).collect()
}

/// All connected graphs with exactly `n` vertices up to isomorphism. Every
/// connected graph arises from a smaller one by adding a non-cut vertex.
pub fn enumerate_connected_graphs(n: usize) -> Vec<FiniteGraph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: Vec<FiniteGraph> = vec![FiniteGraph::from_parts(names(1), Vec::new(), None).unwrap()];
    for size in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            let k = g.len();
            for mask in 1u32..(1u32 << k) {
                let mut edges = g.edges();
                edges.extend((0..k).filter(|&i| mask >> i & 1 == 1).map(|i| (i, k)));
                let h = FiniteGraph::from_parts(names(size), edges, None).unwrap();
                if seen.insert(graph_canonical_code(&h)) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    level.sort_by_key(graph_canonical_code);
    level
}

struct Search<'a> {
    order: Vec<usize>,
    earlier: Vec<Vec<usize>>,
    codomain: &'a FiniteGraph,
    rooted: Option<(RootedTree, RootedTree)>,
    dom_edges: Vec<(usize, usize)>,
    cod_edge_count: usize,
    map: Vec<usize>,
    hits: Vec<usize>,
    uncovered: usize,
}

impl Search<'_> {
    fn covers_edges(&self) -> bool {
        let mut seen = HashSet::new();
        for &(a, b) in &self.dom_edges {
            let (x, y) = (self.map[a], self.map[b]);
            if x != y {
                seen.insert((x.min(y), x.max(y)));
            }
        }
        seen.len() == self.cod_edge_count
    }

    fn go(&mut self, i: usize, visit: &mut dyn FnMut(&[usize])) {
        let n = self.order.len();
        if self.uncovered > n - i {
            return;
        }
        if i == n {
            if self.covers_edges() {
                visit(&self.map);
            }
            return;
        }
        let v = self.order[i];
        let candidates: Vec<usize> = match &self.rooted {
            Some((d, c)) => match d.parent(v) {
                None => vec![c.root()],
                Some(p) => {
                    let a = self.map[p];
                    std::iter::once(a).chain(c.children(a).iter().copied()).collect()
                }
            },
            None => match self.earlier[i].first() {
                None => (0..self.codomain.len()).collect(),
                Some(&u) => {
                    let a = self.map[u];
                    std::iter::once(a).chain(self.codomain.neighbors(a).iter().copied()).collect()
                }
            },
        };
        for a in candidates {
            if !self.earlier[i].iter().all(|&u| self.codomain.linked(self.map[u], a)) {
                continue;
            }
            self.map[v] = a;
            self.hits[a] += 1;
            if self.hits[a] == 1 {
                self.uncovered -= 1;
            }
            self.go(i + 1, visit);
            self.hits[a] -= 1;
            if self.hits[a] == 0 {
                self.uncovered += 1;
            }
        }
        self.map[v] = usize::MAX;
    }
}

/// Calls `visit` with every epimorphism `domain -> codomain` as a vertex map.
/// For rooted trees only root- and order-preserving maps are produced.
pub fn for_each_epimorphism(domain: &FiniteGraph, codomain: &FiniteGraph, mut visit: impl FnMut(&[usize])) {
    let n = domain.len();
    let m = codomain.len();
    if n == 0 || m == 0 || m > n {
        return;
    }
    let rooted = match (domain.root(), codomain.root()) {
        (Some(_), Some(_)) => match (RootedTree::from_graph(domain.clone()), RootedTree::from_graph(codomain.clone())) {
            (Ok(a), Ok(b)) => Some((a, b)),
            _ => None,
        },
        _ => None,
    };
    let order: Vec<usize> = match &rooted {
        Some((d, _)) => d.preorder().to_vec(),
        None => {
            let mut seen = vec![false; n];
            let mut order = Vec::with_capacity(n);
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                seen[s] = true;
                let mut queue = std::collections::VecDeque::from([s]);
                while let Some(v) = queue.pop_front() {
                    order.push(v);
                    for &w in domain.neighbors(v) {
                        if !seen[w] {
                            seen[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
            order
        }
    };
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let earlier =
        order.iter().map(|&v| domain.neighbors(v).iter().copied().filter(|&w| pos[w] < pos[v]).collect()).collect();
    let mut search = Search {
        order,
        earlier,
        codomain,
        rooted,
        dom_edges: domain.edges(),
        cod_edge_count: codomain.edge_count(),
        map: vec![usize::MAX; n],
        hits: vec![0; m],
        uncovered: m,
    };
    search.go(0, &mut visit);
}

/// Every epimorphism `domain -> codomain` admitted by `spec`.
pub fn enumerate_epimorphisms(domain: &Arc<FiniteGraph>, codomain: &Arc<FiniteGraph>, spec: ClassSpec) -> Vec<Morphism> {
    let mut out = Vec::new();
    for_each_epimorphism(domain, codomain, |map| {
        let f = Morphism::trusted(domain.clone(), codomain.clone(), map.to_vec());
        if spec.admits(&f) {
            out.push(f);
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rooted_tree_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| enumerate_rooted_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48]);
    }

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| enumerate_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23]);
    }

    #[test]
    fn connected_graph_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn epimorphisms_of_path_onto_edge() {
        let p3 = Arc::new(FiniteGraph::new(["a", "b", "c"], [("a", "b"), ("b", "c")], None).unwrap());
        let p2 = Arc::new(FiniteGraph::new(["x", "y"], [("x", "y")], None).unwrap());
        // maps onto an edge: aab, abb, abc-like folds aba, and their swaps
        let all = enumerate_epimorphisms(&p3, &p2, ClassSpec::ANY);
        let mut brute = 0;
        for code in 0..8u32 {
            let map: Vec<usize> = (0..3).map(|i| (code >> i & 1) as usize).collect();
            if Morphism::new(p3.clone(), p2.clone(), map).is_ok() {
                brute += 1;
            }
        }
        assert_eq!(all.len(), brute);
        assert_eq!(all.len(), 6);
    }
}
