use std::sync::Arc;

use serde::Serialize;

use super::special::{special_failure, SpecialFailure};
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::morphism::{compose, compose_chain, Morphism};
use crate::ops::{contract, named_quotient};
use crate::tree::RootedTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    SplittingEdge,
    AddingEdge,
    ElementaryLightConfluent,
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub kind: FactorKind,
    pub map: Morphism,
}

/// `composite = iso ∘ factors[k-1] ∘ ... ∘ factors[0]`, where `factors[0]`
/// starts at the domain of `composite` and `iso` is an isomorphism onto its
/// codomain.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub factors: Vec<Factor>,
    pub iso: Morphism,
    pub composite: Morphism,
}

impl Decomposition {
    pub fn recompose(&self) -> Result<Morphism> {
        let mut chain = vec![self.iso.clone()];
        chain.extend(self.factors.iter().rev().map(|f| f.map.clone()));
        compose_chain(&chain)
    }

    pub fn kinds(&self) -> Vec<FactorKind> {
        self.factors.iter().map(|f| f.kind).collect()
    }
}

/// Why a decomposition could not be completed: the map left over when no
/// reduction applies, and the special-condition failure of the input.
#[derive(Clone, Debug)]
pub struct FailureWitness {
    pub remaining: Morphism,
    pub reason: Option<SpecialFailure>,
}

pub type Outcome = std::result::Result<Decomposition, FailureWitness>;

fn tree_of(g: &Arc<FiniteGraph>) -> RootedTree {
    RootedTree::new(g.clone()).expect("working map stays between rooted trees")
}

/// Rewrites `h` along a quotient `g: H -> G` with `h` constant on its fibers.
fn descend(h: &Morphism, g: &Morphism) -> Result<Morphism> {
    let mut map = vec![0; g.codomain().len()];
    for v in 0..g.domain().len() {
        map[g.apply(v)] = h.apply(v);
    }
    Morphism::new(g.codomain().clone(), h.codomain().clone(), map)
}

/// A non-root vertex of order two sharing its image with a neighbour,
/// contracted into that neighbour.
fn order_two_step(h: &Morphism) -> Result<Option<Morphism>> {
    let d = tree_of(h.domain());
    for a in 0..d.len() {
        if a == d.root() || d.sord(a) != 1 {
            continue;
        }
        let p = d.parent(a).unwrap();
        let c = d.children(a)[0];
        let keep = if h.apply(p) == h.apply(a) {
            p
        } else if h.apply(c) == h.apply(a) {
            c
        } else {
            continue;
        };
        return contract(h.domain(), a, keep).map(Some);
    }
    Ok(None)
}

/// Folds two successor cones of a maximal vertex whose cones share images.
fn fold_step(h: &Morphism) -> Result<Option<Morphism>> {
    let d = tree_of(h.domain());
    let m = h.codomain().len();
    let words = m.div_ceil(64);
    let mut img = vec![vec![0u64; words]; d.len()];
    for &v in d.preorder().iter().rev() {
        let a = h.apply(v);
        img[v][a / 64] |= 1 << (a % 64);
        if let Some(p) = d.parent(v) {
            let (lo, hi) = if p < v { img.split_at_mut(v) } else { img.split_at_mut(p) };
            let (pv, vv) = if p < v { (&mut lo[p], &hi[0]) } else { (&mut hi[0], &lo[v]) };
            for (x, y) in pv.iter_mut().zip(vv) {
                *x |= *y;
            }
        }
    }
    let meets = |x: usize, y: usize| img[x].iter().zip(&img[y]).any(|(a, b)| a & b != 0);
    let first_pair = |v: usize| -> Option<(usize, usize)> {
        let kids = d.children(v);
        for (i, &x) in kids.iter().enumerate() {
            for &y in &kids[i + 1..] {
                if meets(x, y) {
                    return Some((x, y));
                }
            }
        }
        None
    };
    let flagged: Vec<bool> = (0..d.len()).map(|v| first_pair(v).is_some()).collect();
    let mut flag_above = vec![false; d.len()];
    for &v in d.preorder().iter().rev() {
        if let Some(p) = d.parent(v) {
            flag_above[p] = flag_above[p] || flag_above[v] || flagged[v];
        }
    }
    let codes = d.cone_codes();
    let Some(v) = (0..d.len())
        .filter(|&v| flagged[v] && !flag_above[v])
        .min_by(|&x, &y| codes[x].cmp(&codes[y]).then(x.cmp(&y)))
    else {
        return Ok(None);
    };
    let (c1, c2) = first_pair(v).unwrap();
    let (s1, s2) = (d.subtree(c1), d.subtree(c2));
    let mut by_image = vec![usize::MAX; m];
    for &w in s1 {
        if std::mem::replace(&mut by_image[h.apply(w)], w) != usize::MAX {
            return Ok(None);
        }
    }
    if s2.len() != s1.len() {
        return Ok(None);
    }
    let mut class_of: Vec<usize> = (0..d.len()).collect();
    let mut seen = vec![false; m];
    for &w in s2 {
        let a = h.apply(w);
        if by_image[a] == usize::MAX || std::mem::replace(&mut seen[a], true) {
            return Ok(None);
        }
        class_of[w] = by_image[a];
    }
    let mut dense = vec![usize::MAX; d.len()];
    let mut next = 0;
    for v in 0..d.len() {
        let r = class_of[v];
        if dense[r] == usize::MAX {
            dense[r] = next;
            next += 1;
        }
    }
    let classes: Vec<usize> = class_of.iter().map(|&r| dense[r]).collect();
    named_quotient(h.domain(), &classes, |members| members.iter().copied().find(|&w| !d.leq(c2, w))).map(Some)
}

struct Run {
    factors: Vec<Factor>,
    current: Morphism,
}

impl Run {
    fn new(h: &Morphism) -> Self {
        Run { factors: Vec::new(), current: h.clone() }
    }

    fn push(&mut self, kind: FactorKind, g: Morphism) -> Result<()> {
        self.current = descend(&self.current, &g)?;
        self.factors.push(Factor { kind, map: g });
        Ok(())
    }

    /// Pushes the factors of a decomposition of a map on the current domain,
    /// then `removal`, which starts where that decomposition ends.
    fn absorb(&mut self, dec: Decomposition, removal: Morphism) -> Result<()> {
        let mut factors = dec.factors;
        let removal = match factors.last_mut() {
            Some(last) => {
                last.map = compose(&dec.iso, &last.map)?;
                removal
            }
            None => compose(&removal, &dec.iso)?,
        };
        for f in factors {
            self.push(f.kind, f.map)?;
        }
        self.push(FactorKind::AddingEdge, removal)
    }

    fn finish(self, original: &Morphism, star: bool) -> Result<Outcome> {
        if self.current.is_isomorphism() {
            Ok(Ok(Decomposition { factors: self.factors, iso: self.current, composite: original.clone() }))
        } else {
            Ok(Err(FailureWitness { remaining: self.current, reason: special_failure(original, star)? }))
        }
    }
}

fn require_rooted_confluent(h: &Morphism) -> Result<()> {
    h.rooted()?;
    if !h.is_confluent() {
        return Err(Error::Precondition("map is not confluent".into()));
    }
    Ok(())
}

/// Splits a confluent end-vertex preserving map into splitting-edge maps and
/// elementary light confluent maps, or reports why this is impossible.
pub fn decompose_simple_confluent(h: &Morphism) -> Result<Outcome> {
    require_rooted_confluent(h)?;
    if !h.is_end_vertex_preserving() {
        return Err(Error::Precondition("map is not end-vertex preserving".into()));
    }
    let mut run = Run::new(h);
    run_simple(&mut run)?;
    run.finish(h, false)
}

fn run_simple(run: &mut Run) -> Result<()> {
    loop {
        if run.current.is_isomorphism() {
            return Ok(());
        }
        if let Some(g) = order_two_step(&run.current)? {
            run.push(FactorKind::SplittingEdge, g)?;
        } else if let Some(g) = fold_step(&run.current)? {
            run.push(FactorKind::ElementaryLightConfluent, g)?;
        } else {
            return Ok(());
        }
    }
}

/// Light confluent maps as chains of elementary light confluent maps.
pub fn decompose_light_confluent(h: &Morphism) -> Result<Outcome> {
    require_rooted_confluent(h)?;
    if !h.is_light() {
        return Err(Error::Precondition("map is not light".into()));
    }
    let mut run = Run::new(h);
    while !run.current.is_isomorphism() {
        match fold_step(&run.current)? {
            Some(g) => run.push(FactorKind::ElementaryLightConfluent, g)?,
            None => break,
        }
    }
    run.finish(h, false)
}

/// A vertex `a` and successor `c` whose whole cone is mapped to the image of `a`.
fn collapsible_cone(h: &Morphism) -> Option<(usize, usize)> {
    let d = tree_of(h.domain());
    for a in 0..d.len() {
        for &c in d.children(a) {
            if d.subtree(c).iter().all(|&w| h.apply(w) == h.apply(a)) {
                return Some((a, c));
            }
        }
    }
    None
}

/// Like [`decompose_simple_confluent`] but also allows adding-edge factors;
/// succeeds exactly for the special* maps.
pub fn decompose_simple_star(h: &Morphism) -> Result<Outcome> {
    require_rooted_confluent(h)?;
    let mut run = Run::new(h);
    while let Some((a, c)) = collapsible_cone(&run.current) {
        let d = tree_of(run.current.domain());
        let cone = d.subtree(c).to_vec();
        let mut class_of: Vec<usize> = (0..d.len()).collect();
        for &w in &cone {
            class_of[w] = c;
        }
        let mut dense = vec![usize::MAX; d.len()];
        let mut next = 0;
        let classes: Vec<usize> = class_of
            .iter()
            .map(|&r| {
                if dense[r] == usize::MAX {
                    dense[r] = next;
                    next += 1;
                }
                dense[r]
            })
            .collect();
        let g1 = named_quotient(run.current.domain(), &classes, |m| m.contains(&c).then_some(c))?;
        let leaf = g1.apply(c);
        let removal = contract(g1.codomain(), leaf, g1.apply(a))?;
        if cone.len() == 1 {
            run.push(FactorKind::AddingEdge, removal)?;
            continue;
        }
        let inner = match decompose_simple_confluent(&g1)? {
            Ok(dec) => dec,
            Err(_) => return run.finish(h, true),
        };
        run.absorb(inner, removal)?;
    }
    if !run.current.is_end_vertex_preserving() {
        return run.finish(h, true);
    }
    run_simple(&mut run)?;
    run.finish(h, true)
}

/// Split chain from the domain side when `h` is a composition of
/// splitting-edge maps (and adding-edge maps with `star`).
pub fn simple_monotone_chain(h: &Morphism, star: bool) -> Result<Option<(Vec<Factor>, Morphism)>> {
    h.rooted()?;
    let mut run = Run::new(h);
    loop {
        if run.current.is_isomorphism() {
            return Ok(Some((run.factors, run.current)));
        }
        if let Some(g) = order_two_step(&run.current)? {
            run.push(FactorKind::SplittingEdge, g)?;
            continue;
        }
        if star {
            let d = tree_of(run.current.domain());
            let leaf = d.end_vertices().into_iter().find(|&e| {
                let p = d.parent(e).unwrap();
                run.current.apply(e) == run.current.apply(p)
            });
            if let Some(e) = leaf {
                let g = contract(run.current.domain(), e, d.parent(e).unwrap())?;
                run.push(FactorKind::AddingEdge, g)?;
                continue;
            }
        }
        return Ok(None);
    }
}

pub fn is_simple_monotone(h: &Morphism) -> Result<bool> {
    Ok(simple_monotone_chain(h, false)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FiniteGraph;

    fn tree(vs: &[&str], es: &[(&str, &str)]) -> Arc<FiniteGraph> {
        Arc::new(FiniteGraph::new(vs.iter().copied(), es.iter().copied(), Some("r")).unwrap())
    }

    fn a1() -> Arc<FiniteGraph> {
        tree(&["r", "x", "y"], &[("r", "x"), ("r", "y")])
    }

    #[test]
    fn split_then_fold() {
        let s = tree(&["r", "m", "a", "b", "c"], &[("r", "m"), ("m", "a"), ("m", "b"), ("r", "c")]);
        let f = Morphism::from_named(s, a1(), [("r", "r"), ("m", "x"), ("a", "x"), ("b", "x"), ("c", "y")]);
        let f = f.unwrap();
        assert!(!f.is_end_vertex_preserving() || f.is_confluent());
        let out = decompose_simple_confluent(&f).unwrap();
        let dec = out.unwrap_or_else(|w| panic!("failed: {:?}", w.reason));
        assert_eq!(dec.recompose().unwrap(), f);
    }

    #[test]
    fn root_gap_is_reported() {
        let s = tree(&["r", "u", "a", "b"], &[("r", "u"), ("u", "a"), ("u", "b")]);
        let f = Morphism::from_named(s, a1(), [("r", "r"), ("u", "r"), ("a", "x"), ("b", "y")]).unwrap();
        let out = decompose_simple_confluent(&f).unwrap();
        assert!(out.is_err());
    }

    #[test]
    fn star_removes_collapsed_cones() {
        let s = tree(&["r", "a", "b", "c", "d"], &[("r", "a"), ("r", "b"), ("r", "c"), ("c", "d")]);
        let f = Morphism::from_named(s, a1(), [("r", "r"), ("a", "x"), ("b", "y"), ("c", "r"), ("d", "r")]).unwrap();
        let dec = decompose_simple_star(&f).unwrap().unwrap_or_else(|w| panic!("{:?}", w.reason));
        assert_eq!(dec.recompose().unwrap(), f);
        assert!(dec.kinds().contains(&FactorKind::AddingEdge));
    }

    #[test]
    fn monotone_chain() {
        let s = tree(&["r", "p", "q", "x", "y"], &[("r", "p"), ("p", "q"), ("q", "x"), ("r", "y")]);
        let f = Morphism::from_named(s, a1(), [("r", "r"), ("p", "r"), ("q", "x"), ("x", "x"), ("y", "y")]).unwrap();
        let (chain, _) = simple_monotone_chain(&f, false).unwrap().unwrap();
        assert_eq!(chain.len(), 2);
        assert!(chain.iter().all(|c| c.map.is_splitting_edge()));
    }
}
