//! Graph homomorphisms between finite graphs and the map classes built on them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{FiniteGraph, GraphJson};
use crate::tree::RootedTree;

/// One reason a vertex map fails to be an epimorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotTotal { vertex: String },
    EdgeNotPreserved { edge: (String, String), image: (String, String) },
    VertexNotCovered { vertex: String },
    EdgeNotCovered { edge: (String, String) },
    RootNotPreserved { image: String },
    OrderNotPreserved { lower: String, upper: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| format!("{v:?}")).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Lazily computed class flags of a morphism.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub monotone: bool,
    pub light: bool,
    pub confluent: bool,
    pub end_vertex_preserving: bool,
    pub isomorphism: bool,
    pub splitting_edge: bool,
    pub adding_edge: bool,
    pub elementary_light_confluent: bool,
}

/// Witness for an elementary light confluent map: two cones above `vertex`
/// that are folded onto each other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementaryWitness {
    pub vertex: usize,
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub domain: GraphJson,
    pub codomain: GraphJson,
    pub map: BTreeMap<String, String>,
}

/// An epimorphism of finite graphs; for rooted trees it also preserves the
/// root and the tree order.
#[derive(Clone)]
pub struct Morphism {
    domain: Arc<FiniteGraph>,
    codomain: Arc<FiniteGraph>,
    map: Vec<usize>,
    trees: OnceLock<Option<(RootedTree, RootedTree)>>,
    report: OnceLock<ClassReport>,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && self.domain == other.domain && self.codomain == other.codomain
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Morphism")
            .field("domain", &self.domain)
            .field("codomain", &self.codomain)
            .field("map", &self.map_named())
            .finish()
    }
}

fn rooted_pair(d: &Arc<FiniteGraph>, c: &Arc<FiniteGraph>) -> Option<(RootedTree, RootedTree)> {
    if d.root().is_none() || c.root().is_none() {
        return None;
    }
    Some((RootedTree::new(d.clone()).ok()?, RootedTree::new(c.clone()).ok()?))
}

impl Morphism {
    /// Checks every epimorphism condition and reports all violations.
    pub fn validate(
        domain: Arc<FiniteGraph>,
        codomain: Arc<FiniteGraph>,
        map: Vec<usize>,
    ) -> std::result::Result<Morphism, ValidationReport> {
        let mut violations = Vec::new();
        let n = domain.len();
        for v in 0..n {
            if map.get(v).is_none_or(|&a| a >= codomain.len()) {
                violations.push(Violation::NotTotal { vertex: domain.name(v).to_string() });
            }
        }
        if !violations.is_empty() || map.len() != n {
            return Err(ValidationReport { violations });
        }
        let nm = |g: &FiniteGraph, a: usize, b: usize| (g.name(a).to_string(), g.name(b).to_string());
        let mut covered_v = vec![false; codomain.len()];
        for v in 0..n {
            covered_v[map[v]] = true;
        }
        let mut covered_e = std::collections::HashSet::new();
        for (a, b) in domain.edges() {
            let (x, y) = (map[a], map[b]);
            if !codomain.linked(x, y) {
                violations.push(Violation::EdgeNotPreserved { edge: nm(&domain, a, b), image: nm(&codomain, x, y) });
            } else if x != y {
                covered_e.insert((x.min(y), x.max(y)));
            }
        }
        for (a, &c) in covered_v.iter().enumerate() {
            if !c {
                violations.push(Violation::VertexNotCovered { vertex: codomain.name(a).to_string() });
            }
        }
        for e in codomain.edges() {
            if !covered_e.contains(&e) {
                violations.push(Violation::EdgeNotCovered { edge: nm(&codomain, e.0, e.1) });
            }
        }
        if let (Some(rd), Some(rc)) = (domain.root(), codomain.root()) {
            if map[rd] != rc {
                violations.push(Violation::RootNotPreserved { image: codomain.name(map[rd]).to_string() });
            }
        }
        let trees = rooted_pair(&domain, &codomain);
        if let Some((td, tc)) = &trees {
            for v in 0..n {
                if let Some(p) = td.parent(v) {
                    if !tc.leq(map[p], map[v]) {
                        violations.push(Violation::OrderNotPreserved {
                            lower: domain.name(p).to_string(),
                            upper: domain.name(v).to_string(),
                        });
                    }
                }
            }
        }
        if violations.is_empty() {
            let m = Morphism { domain, codomain, map, trees: OnceLock::new(), report: OnceLock::new() };
            let _ = m.trees.set(trees);
            Ok(m)
        } else {
            Err(ValidationReport { violations })
        }
    }

    pub fn new(domain: Arc<FiniteGraph>, codomain: Arc<FiniteGraph>, map: Vec<usize>) -> Result<Morphism> {
        Self::validate(domain, codomain, map).map_err(|r| Error::InvalidMorphism(r.to_string()))
    }

    /// Builds from `(domain vertex, image)` name pairs.
    pub fn from_named<A: AsRef<str>, B: AsRef<str>>(
        domain: Arc<FiniteGraph>,
        codomain: Arc<FiniteGraph>,
        pairs: impl IntoIterator<Item = (A, B)>,
    ) -> Result<Morphism> {
        let mut map = vec![usize::MAX; domain.len()];
        for (a, b) in pairs {
            map[domain.require(a.as_ref())?] = codomain.require(b.as_ref())?;
        }
        Self::new(domain, codomain, map)
    }

    /// Skips validation; callers guarantee the epimorphism conditions.
    pub(crate) fn trusted(domain: Arc<FiniteGraph>, codomain: Arc<FiniteGraph>, map: Vec<usize>) -> Morphism {
        debug_assert!(Self::validate(domain.clone(), codomain.clone(), map.clone()).is_ok());
        Morphism { domain, codomain, map, trees: OnceLock::new(), report: OnceLock::new() }
    }

    pub fn identity(g: Arc<FiniteGraph>) -> Morphism {
        let map = (0..g.len()).collect();
        Morphism::trusted(g.clone(), g, map)
    }

    pub fn domain(&self) -> &Arc<FiniteGraph> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGraph> {
        &self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn image_of(&self, name: &str) -> Result<&str> {
        Ok(self.codomain.name(self.map[self.domain.require(name)?]))
    }

    pub fn map_named(&self) -> BTreeMap<String, String> {
        (0..self.domain.len())
            .map(|v| (self.domain.name(v).to_string(), self.codomain.name(self.map[v]).to_string()))
            .collect()
    }

    fn trees(&self) -> Option<&(RootedTree, RootedTree)> {
        self.trees.get_or_init(|| rooted_pair(&self.domain, &self.codomain)).as_ref()
    }

    pub fn domain_tree(&self) -> Option<&RootedTree> {
        self.trees().map(|t| &t.0)
    }

    pub fn codomain_tree(&self) -> Option<&RootedTree> {
        self.trees().map(|t| &t.1)
    }

    /// Both sides as rooted trees, or an error naming the failure.
    pub fn rooted(&self) -> Result<(&RootedTree, &RootedTree)> {
        match self.trees() {
            Some((a, b)) => Ok((a, b)),
            None if self.domain.root().is_none() || self.codomain.root().is_none() => Err(Error::Unrooted),
            None => Err(Error::NotATree),
        }
    }

    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.codomain.len()];
        for (v, &a) in self.map.iter().enumerate() {
            out[a].push(v);
        }
        out
    }

    pub fn fiber(&self, a: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&v| self.map[v] == a).collect()
    }

    /// Every fiber is connected.
    pub fn is_monotone(&self) -> bool {
        self.fibers().iter().all(|f| self.domain.components_in(f).len() == 1)
    }

    /// No fiber contains an edge.
    pub fn is_light(&self) -> bool {
        self.domain.edges().iter().all(|&(a, b)| self.map[a] != self.map[b])
    }

    /// Edge test: for each codomain edge, every component of its preimage
    /// contains an edge mapped onto it.
    pub fn is_confluent(&self) -> bool {
        let fibers = self.fibers();
        let mut members = vec![false; self.domain.len()];
        for (p, q) in self.codomain.edges() {
            for &v in fibers[p].iter().chain(&fibers[q]) {
                members[v] = true;
            }
            let ok = self.domain.components_of(&members).iter().all(|comp| {
                comp.iter().any(|&u| {
                    self.domain.neighbors(u).iter().any(|&w| self.map[u] == p && self.map[w] == q)
                })
            });
            for &v in fibers[p].iter().chain(&fibers[q]) {
                members[v] = false;
            }
            if !ok {
                return false;
            }
        }
        true
    }

    /// Confluence checked against every connected subset of the codomain.
    pub fn is_confluent_semantic(&self, max_codomain: usize) -> Result<bool> {
        let m = self.codomain.len();
        if m > max_codomain || m >= 63 {
            return Err(Error::Precondition(format!("codomain has {m} vertices, limit is {max_codomain}")));
        }
        if !self.domain.is_connected() || !self.codomain.is_connected() {
            return Err(Error::Disconnected);
        }
        let fibers = self.fibers();
        for mask in 1u64..(1u64 << m) {
            let q: Vec<usize> = (0..m).filter(|&a| mask >> a & 1 == 1).collect();
            if self.codomain.components_in(&q).len() != 1 {
                continue;
            }
            let pre: Vec<usize> = q.iter().flat_map(|&a| fibers[a].iter().copied()).collect();
            for comp in self.domain.components_in(&pre) {
                let mut hit = 0u64;
                for &v in &comp {
                    hit |= 1 << self.map[v];
                }
                if hit != mask {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// End vertices go to end vertices. In rooted trees the root is never an
    /// end vertex; in unrooted trees the end vertices are those of order one.
    pub fn is_end_vertex_preserving(&self) -> bool {
        if let Some((d, c)) = self.trees() {
            return d.end_vertices().into_iter().all(|e| c.is_end(self.map[e]));
        }
        if self.domain.is_tree() && self.codomain.is_tree() {
            return (0..self.domain.len())
                .filter(|&v| self.domain.degree(v) == 1)
                .all(|v| self.codomain.degree(self.map[v]) == 1);
        }
        false
    }

    fn edges_injective_nondegenerate(&self, skip: Option<(usize, usize)>) -> bool {
        let mut seen = std::collections::HashSet::new();
        for (a, b) in self.domain.edges() {
            if Some((a, b)) == skip || Some((b, a)) == skip {
                continue;
            }
            let (x, y) = (self.map[a], self.map[b]);
            if x == y || !seen.insert((x.min(y), x.max(y))) {
                return false;
            }
        }
        true
    }

    pub fn is_isomorphism(&self) -> bool {
        self.domain.len() == self.codomain.len()
            && self.domain.edge_count() == self.codomain.edge_count()
            && self.fibers().iter().all(|f| f.len() == 1)
            && self.edges_injective_nondegenerate(None)
    }

    /// The unique two-element fiber when every other fiber is a singleton.
    fn double_fiber(&self) -> Option<(usize, usize)> {
        if self.domain.len() != self.codomain.len() + 1 || self.domain.edge_count() != self.codomain.edge_count() + 1 {
            return None;
        }
        let mut pair = None;
        for f in self.fibers() {
            match f.len() {
                1 => {}
                2 if pair.is_none() => pair = Some((f[0], f[1])),
                _ => return None,
            }
        }
        let (u, v) = pair?;
        self.domain.has_edge(u, v).then_some((u, v))
    }

    /// Inverse of inserting one non-root vertex of order two into an edge.
    pub fn is_splitting_edge(&self) -> bool {
        let Some((u, v)) = self.double_fiber() else { return false };
        [(u, v), (v, u)].into_iter().any(|(x, _)| {
            self.domain.degree(x) == 2 && self.domain.root() != Some(x) && self.edges_injective_nondegenerate(Some((u, v)))
        })
    }

    /// Inverse of attaching one new end vertex.
    pub fn is_adding_edge(&self) -> bool {
        let Some((u, v)) = self.double_fiber() else { return false };
        [(u, v), (v, u)].into_iter().any(|(y, _)| {
            self.domain.degree(y) == 1 && self.domain.root() != Some(y) && self.edges_injective_nondegenerate(Some((u, v)))
        })
    }

    /// Least vertex and least pair of cones above it witnessing that the
    /// map folds exactly those two cones onto one cone of the codomain.
    pub fn elementary_witness(&self) -> Option<ElementaryWitness> {
        let (d, c) = self.trees()?;
        let n = d.len();
        for v in 0..n {
            let kids = d.children(v);
            for (i, &c1) in kids.iter().enumerate() {
                for &c2 in &kids[i + 1..] {
                    if self.folds_cones(d, c, v, c1, c2) {
                        let mut first = d.subtree(c1).to_vec();
                        let mut second = d.subtree(c2).to_vec();
                        first.sort_unstable();
                        second.sort_unstable();
                        return Some(ElementaryWitness { vertex: v, first, second });
                    }
                }
            }
        }
        None
    }

    fn folds_cones(&self, d: &RootedTree, c: &RootedTree, v: usize, c1: usize, c2: usize) -> bool {
        let target = self.map[c1];
        if self.map[c2] != target || c.parent(target) != Some(self.map[v]) {
            return false;
        }
        let want = c.subtree_size(target);
        if d.subtree_size(c1) != want || d.subtree_size(c2) != want {
            return false;
        }
        let mut seen1 = vec![false; c.len()];
        let mut seen2 = vec![false; c.len()];
        for (cone, seen) in [(c1, &mut seen1), (c2, &mut seen2)] {
            for &w in d.subtree(cone) {
                if std::mem::replace(&mut seen[self.map[w]], true) {
                    return false;
                }
            }
        }
        // Only the two cones may collide: the rest is mapped injectively and
        // away from their common image.
        let mut rest = seen1;
        let mut inside = vec![false; d.len()];
        for &w in d.subtree(c1).iter().chain(d.subtree(c2)) {
            inside[w] = true;
        }
        for w in 0..d.len() {
            if !inside[w] && std::mem::replace(&mut rest[self.map[w]], true) {
                return false;
            }
        }
        true
    }

    pub fn is_elementary_light_confluent(&self) -> bool {
        self.elementary_witness().is_some()
    }

    pub fn classify(&self) -> &ClassReport {
        self.report.get_or_init(|| ClassReport {
            monotone: self.is_monotone(),
            light: self.is_light(),
            confluent: self.is_confluent(),
            end_vertex_preserving: self.is_end_vertex_preserving(),
            isomorphism: self.is_isomorphism(),
            splitting_edge: self.is_splitting_edge(),
            adding_edge: self.is_adding_edge(),
            elementary_light_confluent: self.is_elementary_light_confluent(),
        })
    }

    /// Replaces the codomain by an equal graph, typically a shared copy.
    pub fn with_codomain(&self, codomain: Arc<FiniteGraph>) -> Result<Morphism> {
        if *codomain != *self.codomain {
            return Err(Error::NotComposable);
        }
        Ok(Morphism::trusted(self.domain.clone(), codomain, self.map.clone()))
    }

    /// `f` restricted to `y`, a component of the preimage of the connected
    /// set `x`, as a map of unrooted induced subgraphs `y -> x`.
    pub fn restrict_to_component(&self, x: &[usize], y: &[usize]) -> Result<Morphism> {
        let mut in_x = vec![false; self.codomain.len()];
        for &a in x {
            *in_x.get_mut(a).ok_or_else(|| Error::UnknownVertex(a.to_string()))? = true;
        }
        if x.is_empty() || self.codomain.components_of(&in_x).len() != 1 {
            return Err(Error::Precondition("codomain subset is not connected".into()));
        }
        let pre: Vec<bool> = self.map.iter().map(|&a| in_x[a]).collect();
        let mut wanted = y.to_vec();
        wanted.sort_unstable();
        if !self.domain.components_of(&pre).contains(&wanted) {
            return Err(Error::Precondition("subset is not a component of the preimage".into()));
        }
        let mut xs = x.to_vec();
        xs.sort_unstable();
        let dom = Arc::new(self.domain.induced(&wanted).with_root(None));
        let cod = Arc::new(self.codomain.induced(&xs).with_root(None));
        let map = wanted.iter().map(|&b| xs.binary_search(&self.map[b]).unwrap()).collect();
        Morphism::new(dom, cod, map)
    }

    pub fn to_json(&self) -> MorphismJson {
        MorphismJson { domain: self.domain.to_json(), codomain: self.codomain.to_json(), map: self.map_named() }
    }

    pub fn from_json(json: &MorphismJson) -> Result<Morphism> {
        let d = Arc::new(FiniteGraph::from_json(&json.domain)?);
        let c = Arc::new(FiniteGraph::from_json(&json.codomain)?);
        Morphism::from_named(d, c, json.map.iter().map(|(a, b)| (a.as_str(), b.as_str())))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("morphism serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Morphism> {
        Self::from_json(&serde_json::from_str(text)?)
    }
}

/// `outer ∘ inner`.
pub fn compose(outer: &Morphism, inner: &Morphism) -> Result<Morphism> {
    if *inner.codomain != *outer.domain {
        return Err(Error::NotComposable);
    }
    let map = inner.map.iter().map(|&b| outer.map[b]).collect();
    Morphism::new(inner.domain.clone(), outer.codomain.clone(), map)
}

/// Composes a chain listed from the codomain end: `chain[0] ∘ chain[1] ∘ ...`.
pub fn compose_chain(chain: &[Morphism]) -> Result<Morphism> {
    let mut it = chain.iter().rev();
    let mut acc = it.next().ok_or_else(|| Error::Precondition("empty chain".into()))?.clone();
    for m in it {
        acc = compose(m, &acc)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(vs: &[&str], es: &[(&str, &str)], root: Option<&str>) -> Arc<FiniteGraph> {
        Arc::new(FiniteGraph::new(vs.iter().copied(), es.iter().copied(), root).unwrap())
    }

    fn m(d: &Arc<FiniteGraph>, c: &Arc<FiniteGraph>, pairs: &[(&str, &str)]) -> Morphism {
        Morphism::from_named(d.clone(), c.clone(), pairs.iter().copied()).unwrap()
    }

    #[test]
    fn collapse_path_onto_edge_is_monotone_confluent() {
        let p3 = g(&["a", "b", "c"], &[("a", "b"), ("b", "c")], None);
        let p2 = g(&["x", "y"], &[("x", "y")], None);
        let f = m(&p3, &p2, &[("a", "x"), ("b", "x"), ("c", "y")]);
        let r = f.classify();
        assert!(r.monotone && r.confluent && !r.light);
    }

    #[test]
    fn fold_of_path_is_light_confluent() {
        let p3 = g(&["a", "b", "c"], &[("a", "b"), ("b", "c")], None);
        let p2 = g(&["x", "y"], &[("x", "y")], None);
        let f = m(&p3, &p2, &[("a", "x"), ("b", "y"), ("c", "x")]);
        let r = f.classify();
        assert!(r.light && r.confluent && !r.monotone);
    }

    #[test]
    fn edge_onto_path_is_rejected() {
        let p2 = g(&["x", "y"], &[("x", "y")], None);
        let p3 = g(&["a", "b", "c"], &[("a", "b"), ("b", "c")], None);
        let err = Morphism::from_named(p2, p3, [("x", "a"), ("y", "b")]).unwrap_err();
        assert!(matches!(err, Error::InvalidMorphism(_)));
    }

    #[test]
    fn validation_lists_every_violation() {
        let p2 = g(&["x", "y"], &[("x", "y")], None);
        let p3 = g(&["a", "b", "c"], &[("a", "b"), ("b", "c")], None);
        let report = Morphism::validate(p2, p3, vec![0, 2]).unwrap_err();
        assert!(report.violations.iter().any(|v| matches!(v, Violation::EdgeNotPreserved { .. })));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::VertexNotCovered { .. })));
    }

    #[test]
    fn rooted_order_is_checked() {
        let s = g(&["r", "a", "b"], &[("r", "a"), ("a", "b")], Some("r"));
        let t = g(&["r", "x"], &[("r", "x")], Some("r"));
        assert!(Morphism::from_named(s.clone(), t.clone(), [("r", "r"), ("a", "x"), ("b", "r")]).is_err());
        assert!(Morphism::from_named(s, t, [("r", "r"), ("a", "r"), ("b", "x")]).is_ok());
    }

    #[test]
    fn splits_and_additions() {
        let s = g(&["r", "x", "a", "b"], &[("r", "x"), ("x", "a"), ("r", "b")], Some("r"));
        let t = g(&["r", "a", "b"], &[("r", "a"), ("r", "b")], Some("r"));
        let split = m(&s, &t, &[("r", "r"), ("x", "r"), ("a", "a"), ("b", "b")]);
        assert!(split.is_splitting_edge() && !split.is_adding_edge());
        let u = g(&["r", "a", "b", "y"], &[("r", "a"), ("r", "b"), ("r", "y")], Some("r"));
        let add = m(&u, &t, &[("r", "r"), ("a", "a"), ("b", "b"), ("y", "r")]);
        assert!(add.is_adding_edge() && !add.is_splitting_edge());
    }

    #[test]
    fn elementary_fold() {
        let s = g(&["r", "a", "b"], &[("r", "a"), ("r", "b")], Some("r"));
        let t = g(&["r", "x"], &[("r", "x")], Some("r"));
        let f = m(&s, &t, &[("r", "r"), ("a", "x"), ("b", "x")]);
        let w = f.elementary_witness().unwrap();
        assert_eq!(w.vertex, s.require("r").unwrap());
        assert!(f.is_light() && f.is_confluent());
    }

    #[test]
    fn semantic_confluence_agrees_on_triangle_cover() {
        let c6 = g(&["0", "1", "2", "3", "4", "5"], &[("0", "1"), ("1", "2"), ("2", "3"), ("3", "4"), ("4", "5"), ("5", "0")], None);
        let c3 = g(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")], None);
        let f = m(&c6, &c3, &[("0", "a"), ("1", "b"), ("2", "c"), ("3", "a"), ("4", "b"), ("5", "c")]);
        assert_eq!(f.is_confluent(), f.is_confluent_semantic(12).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let s = g(&["r", "a", "b"], &[("r", "a"), ("r", "b")], Some("r"));
        let t = g(&["r", "x"], &[("r", "x")], Some("r"));
        let f = m(&s, &t, &[("r", "r"), ("a", "x"), ("b", "x")]);
        assert_eq!(Morphism::from_json_str(&f.to_json_string()).unwrap(), f);
    }
}
