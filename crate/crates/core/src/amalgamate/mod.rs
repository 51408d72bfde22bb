//! Amalgamations: given `f: B -> A` and `g: C -> A`, a space `D` with maps
//! `f0: D -> B` and `g0: D -> C` such that `f ∘ f0 = g ∘ g0`.

mod grid;
mod m3;

pub use grid::{mono_light_pair, simple_confluent_pair, simple_monotone_pair};
pub use m3::{jpp_m3, m3};

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::canon::graph_canonical_code;
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::morphism::{compose, ClassReport, Morphism, MorphismJson};
use crate::ops::Builder;
use crate::tree::{find_isomorphism, RootedTree};

#[derive(Clone, Debug)]
pub struct AmalgamResult {
    pub domain: Arc<FiniteGraph>,
    pub f0: Morphism,
    pub g0: Morphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AmalgamCertificate {
    pub commutes: bool,
    pub domain_is_tree: bool,
    pub f0: ClassReport,
    pub g0: ClassReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct AmalgamJson {
    pub f0: MorphismJson,
    pub g0: MorphismJson,
    pub certificate: Option<AmalgamCertificate>,
}

impl AmalgamResult {
    pub fn new(f0: Morphism, g0: Morphism) -> Result<Self> {
        if f0.domain() != g0.domain() {
            return Err(Error::NotComposable);
        }
        Ok(AmalgamResult { domain: f0.domain().clone(), f0, g0 })
    }

    /// Whether `f ∘ f0 = g ∘ g0`.
    pub fn commutes(&self, f: &Morphism, g: &Morphism) -> bool {
        match (compose(f, &self.f0), compose(g, &self.g0)) {
            (Ok(a), Ok(b)) => a.map() == b.map() && a.codomain() == b.codomain(),
            _ => false,
        }
    }

    pub fn certificate(&self, f: &Morphism, g: &Morphism) -> AmalgamCertificate {
        AmalgamCertificate {
            commutes: self.commutes(f, g),
            domain_is_tree: self.domain.is_tree(),
            f0: *self.f0.classify(),
            g0: *self.g0.classify(),
        }
    }

    pub fn to_json(&self, f: Option<(&Morphism, &Morphism)>) -> AmalgamJson {
        AmalgamJson {
            f0: self.f0.to_json(),
            g0: self.g0.to_json(),
            certificate: f.map(|(f, g)| self.certificate(f, g)),
        }
    }
}

fn same_codomain(f: &Morphism, g: &Morphism) -> Result<()> {
    if f.codomain() != g.codomain() {
        return Err(Error::Precondition("maps have different codomains".into()));
    }
    Ok(())
}

/// Fiber product: pairs `(b, c)` with `f(b) = g(c)`, adjacent when both
/// coordinates are equal or adjacent. Rooted at the pair of roots.
pub fn standard(f: &Morphism, g: &Morphism) -> Result<AmalgamResult> {
    same_codomain(f, g)?;
    let (bg, cg) = (f.domain(), g.domain());
    let gf = g.fibers();
    let mut builder = Builder::new();
    let mut pairs = Vec::new();
    let mut id_of = HashMap::new();
    for b in 0..bg.len() {
        for &c in &gf[f.apply(b)] {
            let id = builder.vertex(&format!("({},{})", bg.name(b), cg.name(c)));
            id_of.insert((b, c), id);
            pairs.push((b, c));
        }
    }
    for (i, &(b, c)) in pairs.iter().enumerate() {
        for &b2 in std::iter::once(&b).chain(bg.neighbors(b)) {
            for &c2 in std::iter::once(&c).chain(cg.neighbors(c)) {
                if let Some(&j) = id_of.get(&(b2, c2)) {
                    if i < j {
                        builder.edge(i, j);
                    }
                }
            }
        }
    }
    if let (Some(rb), Some(rc)) = (bg.root(), cg.root()) {
        if let Some(&r) = id_of.get(&(rb, rc)) {
            builder.set_root(r);
        }
    }
    let (d, ids) = builder.finish();
    let mut fm = vec![0; d.len()];
    let mut gm = vec![0; d.len()];
    for (i, &(b, c)) in pairs.iter().enumerate() {
        fm[ids[i]] = b;
        gm[ids[i]] = c;
    }
    let f0 = Morphism::new(d.clone(), bg.clone(), fm)?;
    let g0 = Morphism::new(d, cg.clone(), gm)?;
    AmalgamResult::new(f0, g0)
}

/// Restricts the standard amalgamation to one connected component, the one
/// with the least canonical code.
pub fn component_amalgam(f: &Morphism, g: &Morphism) -> Result<AmalgamResult> {
    let full = standard(f, g)?;
    let d = &full.domain;
    let comps = d.components();
    let mut best: Option<(String, Vec<usize>)> = None;
    for comp in comps {
        let code = graph_canonical_code(&d.induced(&comp).with_root(None));
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            best = Some((code, comp));
        }
    }
    let comp = best.map(|b| b.1).ok_or_else(|| Error::Precondition("empty amalgamation".into()))?;
    let sub = Arc::new(d.induced(&comp));
    let restrict = |m: &Morphism| {
        let map = comp.iter().map(|&v| m.apply(v)).collect::<Vec<_>>();
        let mut by_name = vec![0; sub.len()];
        for (i, &v) in comp.iter().enumerate() {
            by_name[sub.index_of(d.name(v)).unwrap()] = map[i];
        }
        Morphism::new(sub.clone(), m.codomain().clone(), by_name)
    };
    AmalgamResult::new(restrict(&full.f0)?, restrict(&full.g0)?)
}

/// Standard amalgamation of rooted trees with `f` light confluent and `g`
/// confluent. The result is a rooted tree whose order is the product order.
pub fn rooted_light(f: &Morphism, g: &Morphism) -> Result<AmalgamResult> {
    f.rooted()?;
    g.rooted()?;
    if !f.is_light() || !f.is_confluent() {
        return Err(Error::Precondition("first map must be light confluent".into()));
    }
    if !g.is_confluent() {
        return Err(Error::Precondition("second map must be confluent".into()));
    }
    let res = standard(f, g)?;
    if !res.domain.is_tree() {
        return Err(Error::Precondition("amalgamation is not a tree".into()));
    }
    Ok(res)
}

/// Emits a copy of the cone at `v` of `t`, repeating successor cones so that
/// `extra(v)` further copies of the chosen successor are added at each vertex.
pub(crate) fn emit_cone(
    t: &RootedTree,
    v: usize,
    builder: &mut Builder,
    image: &mut Vec<usize>,
    parent: Option<usize>,
    grow: &dyn Fn(usize) -> Vec<usize>,
) -> usize {
    let id = builder.vertex(t.name(v));
    image.push(v);
    debug_assert_eq!(image.len(), builder.len());
    if let Some(p) = parent {
        builder.edge(p, id);
    }
    for c in grow(v) {
        emit_cone(t, c, builder, image, Some(id), grow);
    }
    id
}

fn regularize(t: &RootedTree, height: usize, sord: usize) -> Result<Morphism> {
    // Lengthen short branches; new vertices map to the end vertex.
    let g = t.graph_arc();
    let mut builder = Builder::new();
    let ids: Vec<usize> = (0..t.len()).map(|v| builder.vertex(t.name(v))).collect();
    let mut image: Vec<usize> = (0..t.len()).collect();
    for v in 0..t.len() {
        let Some(p) = t.parent(v) else { continue };
        if t.is_end(v) && t.height(v) < height {
            let mut prev = ids[p];
            for k in 0..height - t.height(v) {
                let id = builder.vertex(&format!("{}^{k}", t.name(v)));
                image.push(v);
                builder.edge(prev, id);
                prev = id;
            }
            builder.edge(prev, ids[v]);
        } else {
            builder.edge(ids[p], ids[v]);
        }
    }
    builder.set_root(ids[t.root()]);
    let (t1, bid) = builder.finish();
    let mut m1 = vec![0; t1.len()];
    for (b, &img) in image.iter().enumerate() {
        m1[bid[b]] = img;
    }
    let stretch = Morphism::new(t1.clone(), g.clone(), m1)?;
    // Multiply successor cones bottom-up until every non-end vertex has `sord` successors.
    let tt = RootedTree::new(t1.clone())?;
    let codes = tt.cone_codes();
    let grow = |v: usize| {
        let kids = tt.sorted_children(v, &codes);
        let mut out = kids.clone();
        if let Some(&first) = kids.first() {
            out.extend(std::iter::repeat_n(first, sord.saturating_sub(kids.len())));
        }
        out
    };
    let mut b2 = Builder::new();
    let mut img2 = Vec::new();
    let root = emit_cone(&tt, tt.root(), &mut b2, &mut img2, None, &grow);
    b2.set_root(root);
    let (s, sid) = b2.finish();
    let mut m2 = vec![0; s.len()];
    for (b, &img) in img2.iter().enumerate() {
        m2[sid[b]] = img;
    }
    let widen = Morphism::new(s, t1, m2)?;
    compose(&stretch, &widen)
}

/// Joint projection for rooted trees: a regular tree of the larger height
/// and successor order mapping onto both inputs by confluent maps.
pub fn jpp_rooted(a: &RootedTree, b: &RootedTree) -> Result<AmalgamResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Precondition("trees need at least two vertices".into()));
    }
    let k = a.tree_height().max(b.tree_height());
    let m = a.max_sord().max(b.max_sord());
    let fa = regularize(a, k, m)?;
    let fb = regularize(b, k, m)?;
    let (sa, sb) = (fa.domain_tree().unwrap(), fb.domain_tree().unwrap());
    let sigma = find_isomorphism(sa, None, sb, None)
        .ok_or_else(|| Error::Precondition("regularized trees differ".into()))?;
    let map = (0..sa.len()).map(|v| fb.apply(sigma[v])).collect();
    let g0 = Morphism::new(fa.domain().clone(), fb.codomain().clone(), map)?;
    AmalgamResult::new(fa, g0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vs: &[&str], es: &[(&str, &str)], root: Option<&str>) -> Arc<FiniteGraph> {
        Arc::new(FiniteGraph::new(vs.iter().copied(), es.iter().copied(), root).unwrap())
    }

    #[test]
    fn folds_of_a_path_give_a_four_cycle() {
        let p3 = graph(&["0", "1", "2"], &[("0", "1"), ("1", "2")], None);
        let p2 = graph(&["x", "y"], &[("x", "y")], None);
        let f = Morphism::from_named(p3.clone(), p2.clone(), [("0", "x"), ("1", "y"), ("2", "x")]).unwrap();
        let res = standard(&f, &f).unwrap();
        assert!(res.commutes(&f, &f));
        assert_eq!(res.domain.len(), 5);
        let comp = component_amalgam(&f, &f).unwrap();
        assert!(comp.domain.is_connected());
    }

    #[test]
    fn single_point_with_two_edges_gives_k4() {
        let a = graph(&["r"], &[], Some("r"));
        let e = graph(&["r", "s"], &[("r", "s")], Some("r"));
        let f = Morphism::from_named(e.clone(), a.clone(), [("r", "r"), ("s", "r")]).unwrap();
        let res = standard(&f, &f).unwrap();
        assert_eq!(res.domain.len(), 4);
        assert_eq!(res.domain.edge_count(), 6);
    }

    #[test]
    fn rooted_light_gives_a_tree() {
        let a1 = graph(&["r", "a", "b"], &[("r", "a"), ("r", "b")], Some("r"));
        let b = graph(&["r", "a", "a2", "b"], &[("r", "a"), ("r", "a2"), ("r", "b")], Some("r"));
        let f = Morphism::from_named(b, a1.clone(), [("r", "r"), ("a", "a"), ("a2", "a"), ("b", "b")]).unwrap();
        let c = graph(&["r", "x", "a", "b"], &[("r", "x"), ("x", "a"), ("r", "b")], Some("r"));
        let g = Morphism::from_named(c, a1, [("r", "r"), ("x", "a"), ("a", "a"), ("b", "b")]).unwrap();
        let res = rooted_light(&f, &g).unwrap();
        assert!(res.domain.is_tree());
        assert!(res.commutes(&f, &g));
        assert!(res.g0.is_light() && res.g0.is_confluent());
        assert!(res.f0.is_confluent());
    }

    #[test]
    fn jpp_of_path_and_a1() {
        let p = RootedTree::new(graph(&["r", "a", "b"], &[("r", "a"), ("a", "b")], Some("r"))).unwrap();
        let a1 = RootedTree::new(graph(&["r", "a", "b"], &[("r", "a"), ("r", "b")], Some("r"))).unwrap();
        let res = jpp_rooted(&p, &a1).unwrap();
        let s = RootedTree::new(res.domain.clone()).unwrap();
        assert_eq!(s.len(), 7);
        assert!(s.is_regular());
        assert!(res.f0.is_confluent() && res.g0.is_confluent());
    }
}
