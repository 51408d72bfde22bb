use std::sync::Arc;

use super::enumerate::{enumerate_rooted_trees, enumerate_trees, ClassSpec};
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::morphism::Morphism;
use crate::tree::RootedTree;

/// A commuting square found by exhaustive search.
#[derive(Clone, Debug)]
pub struct AmalgamSearch {
    pub domain: Arc<FiniteGraph>,
    pub to_b: Morphism,
    pub to_c: Morphism,
}

struct Joint<'a> {
    f: &'a Morphism,
    g: &'a Morphism,
    spec: ClassSpec,
    d: &'a Arc<FiniteGraph>,
    order: Vec<usize>,
    earlier: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    trees: Option<(RootedTree, RootedTree)>,
    fb: Vec<usize>,
    gc: Vec<usize>,
    hit_b: Vec<usize>,
    hit_c: Vec<usize>,
    open_b: usize,
    open_c: usize,
}

impl Joint<'_> {
    fn candidates(&self, i: usize) -> Vec<(usize, usize)> {
        let v = self.order[i];
        let (bg, cg) = (self.f.domain(), self.g.domain());
        let (bs, cs): (Vec<usize>, Vec<usize>) = match (&self.trees, self.parent[v]) {
            (Some((tb, tc)), Some(p)) => (
                std::iter::once(self.fb[p]).chain(tb.children(self.fb[p]).iter().copied()).collect(),
                std::iter::once(self.gc[p]).chain(tc.children(self.gc[p]).iter().copied()).collect(),
            ),
            (Some((tb, tc)), None) => (vec![tb.root()], vec![tc.root()]),
            (None, _) => match self.earlier[i].first() {
                Some(&u) => (
                    std::iter::once(self.fb[u]).chain(bg.neighbors(self.fb[u]).iter().copied()).collect(),
                    std::iter::once(self.gc[u]).chain(cg.neighbors(self.gc[u]).iter().copied()).collect(),
                ),
                None => ((0..bg.len()).collect(), (0..cg.len()).collect()),
            },
        };
        let mut out = Vec::new();
        for &b in &bs {
            for &c in &cs {
                if self.f.apply(b) == self.g.apply(c)
                    && self.earlier[i].iter().all(|&u| bg.linked(self.fb[u], b) && cg.linked(self.gc[u], c))
                {
                    out.push((b, c));
                }
            }
        }
        out
    }

    fn go(&mut self, i: usize) -> Option<(Morphism, Morphism)> {
        let left = self.order.len() - i;
        if self.open_b > left || self.open_c > left {
            return None;
        }
        if i == self.order.len() {
            let f0 = Morphism::new(self.d.clone(), self.f.domain().clone(), self.fb.clone()).ok()?;
            let g0 = Morphism::new(self.d.clone(), self.g.domain().clone(), self.gc.clone()).ok()?;
            return (self.spec.admits(&f0) && self.spec.admits(&g0)).then_some((f0, g0));
        }
        let v = self.order[i];
        for (b, c) in self.candidates(i) {
            self.fb[v] = b;
            self.gc[v] = c;
            self.hit_b[b] += 1;
            self.hit_c[c] += 1;
            self.open_b -= usize::from(self.hit_b[b] == 1);
            self.open_c -= usize::from(self.hit_c[c] == 1);
            let found = self.go(i + 1);
            self.open_b += usize::from(self.hit_b[b] == 1);
            self.open_c += usize::from(self.hit_c[c] == 1);
            self.hit_b[b] -= 1;
            self.hit_c[c] -= 1;
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Searches maps `d -> B`, `d -> C` in `spec` closing the square over
/// `f: B -> A` and `g: C -> A`. Every such pair factors through the
/// standard product, so the search runs over pairs with equal image in `A`.
pub fn search_amalgam_on(f: &Morphism, g: &Morphism, spec: ClassSpec, d: &Arc<FiniteGraph>) -> Option<AmalgamSearch> {
    if f.codomain() != g.codomain() || d.is_empty() {
        return None;
    }
    let trees = match (f.domain_tree(), g.domain_tree(), d.root()) {
        (Some(a), Some(b), Some(_)) => Some((a.clone(), b.clone())),
        _ => None,
    };
    let n = d.len();
    let (order, parent) = if trees.is_some() {
        let t = RootedTree::new(d.clone()).ok()?;
        (t.preorder().to_vec(), (0..n).map(|v| t.parent(v)).collect())
    } else {
        let mut seen = vec![false; n];
        let mut order = vec![0];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            for &w in d.neighbors(order[i]) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
            i += 1;
        }
        if order.len() != n {
            return None;
        }
        (order, vec![None; n])
    };
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let earlier = order.iter().map(|&v| d.neighbors(v).iter().copied().filter(|&w| pos[w] < pos[v]).collect()).collect();
    let mut joint = Joint {
        f,
        g,
        spec,
        d,
        order,
        earlier,
        parent,
        trees,
        fb: vec![usize::MAX; n],
        gc: vec![usize::MAX; n],
        hit_b: vec![0; f.domain().len()],
        hit_c: vec![0; g.domain().len()],
        open_b: f.domain().len(),
        open_c: g.domain().len(),
    };
    joint.go(0).map(|(to_b, to_c)| AmalgamSearch { domain: d.clone(), to_b, to_c })
}

/// Smallest tree amalgam with at most `max_vertices` vertices, searching
/// rooted trees when both inputs are rooted and unrooted trees otherwise.
pub fn search_amalgam(f: &Morphism, g: &Morphism, spec: ClassSpec, max_vertices: usize) -> Result<Option<AmalgamSearch>> {
    if f.codomain() != g.codomain() {
        return Err(Error::NotComposable);
    }
    let rooted = f.domain_tree().is_some() && g.domain_tree().is_some();
    let start = f.domain().len().max(g.domain().len());
    for n in start..=max_vertices {
        let candidates: Vec<Arc<FiniteGraph>> = if rooted {
            enumerate_rooted_trees(n).into_iter().map(|t| t.graph_arc().clone()).collect()
        } else {
            enumerate_trees(n).into_iter().map(Arc::new).collect()
        };
        for d in &candidates {
            if let Some(found) = search_amalgam_on(f, g, spec, d) {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}
