//! Monotone amalgamation for trees whose vertices have order at most three.

use std::collections::HashMap;
use std::sync::Arc;

use super::AmalgamResult;
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::morphism::Morphism;
use crate::ops::Builder;

/// How one side `h: S -> A` is laid out around the chosen centers.
struct Side<'a> {
    s: &'a FiniteGraph,
    center: Vec<usize>,
    /// For an edge `(a, b)` of `A`: path vertices over `a`, then over `b`,
    /// centers excluded.
    parts: HashMap<(usize, usize), (Vec<usize>, Vec<usize>)>,
    /// Off-path component hanging at a path vertex.
    hats: HashMap<usize, Vec<usize>>,
    /// Third component at the center of an order-two vertex of `A`.
    extra: HashMap<usize, Vec<usize>>,
}

fn component_avoiding(s: &FiniteGraph, start: usize, avoid: usize) -> Vec<usize> {
    let mut seen = vec![false; s.len()];
    seen[avoid] = true;
    seen[start] = true;
    let mut out = vec![start];
    let mut i = 0;
    while i < out.len() {
        for &w in s.neighbors(out[i]) {
            if !seen[w] {
                seen[w] = true;
                out.push(w);
            }
        }
        i += 1;
    }
    out
}

fn layout<'a>(h: &'a Morphism, a: &FiniteGraph) -> Result<Side<'a>> {
    let s = h.domain().as_ref();
    let mut attach: HashMap<(usize, usize), usize> = HashMap::new();
    for (u, v) in s.edges() {
        let (x, y) = (h.apply(u), h.apply(v));
        if x != y {
            attach.insert((x, y), u);
            attach.insert((y, x), v);
        }
    }
    let fibers = h.fibers();
    let mut center = vec![0; a.len()];
    for x in 0..a.len() {
        let pts: Vec<usize> = a.neighbors(x).iter().map(|&y| attach[&(x, y)]).collect();
        center[x] = match pts.len() {
            1 => *fibers[x]
                .iter()
                .find(|&&v| s.degree(v) == 1)
                .ok_or_else(|| Error::Precondition("fiber over an end vertex has no end vertex".into()))?,
            2 => *s.tree_path(pts[0], pts[1]).iter().min().unwrap(),
            3 => {
                let p01 = s.tree_path(pts[0], pts[1]);
                let p02 = s.tree_path(pts[0], pts[2]);
                let p12 = s.tree_path(pts[1], pts[2]);
                *p01.iter().find(|v| p02.contains(v) && p12.contains(v)).unwrap()
            }
            _ => return Err(Error::Precondition("vertex of order other than 1, 2 or 3".into())),
        };
    }
    let mut parts = HashMap::new();
    let mut on_path = vec![false; s.len()];
    for &c in &center {
        on_path[c] = true;
    }
    for (x, y) in a.edges() {
        let path = s.tree_path(center[x], center[y]);
        let inner = &path[1..path.len() - 1];
        let near: Vec<usize> = inner.iter().copied().filter(|&v| h.apply(v) == x).collect();
        let far: Vec<usize> = inner.iter().copied().filter(|&v| h.apply(v) == y).collect();
        for &v in inner {
            on_path[v] = true;
        }
        parts.insert((x, y), (near, far));
    }
    let mut hats = HashMap::new();
    let mut extra = HashMap::new();
    for v in 0..s.len() {
        if !on_path[v] {
            continue;
        }
        let off: Vec<usize> = s.neighbors(v).iter().copied().filter(|&w| !on_path[w]).collect();
        match off.as_slice() {
            [] => {}
            [z] => {
                let comp = component_avoiding(s, *z, v);
                if center.contains(&v) {
                    extra.insert(h.apply(v), comp);
                } else {
                    hats.insert(v, comp);
                }
            }
            _ => return Err(Error::Precondition("vertex of order more than three".into())),
        }
    }
    let covered = on_path.iter().filter(|&&b| b).count()
        + hats.values().map(Vec::len).sum::<usize>()
        + extra.values().map(Vec::len).sum::<usize>();
    if covered != s.len() {
        return Err(Error::Precondition("fibers are not laid out along the center paths".into()));
    }
    Ok(Side { s, center, parts, hats, extra })
}

struct Emitter {
    builder: Builder,
    to_b: Vec<usize>,
    to_c: Vec<usize>,
}

impl Emitter {
    fn vertex(&mut self, name: String, b: usize, c: usize) -> usize {
        self.to_b.push(b);
        self.to_c.push(c);
        self.builder.vertex(&name)
    }

    /// Copies a component of one side, attaching its first vertex to `at`.
    /// Copied vertices map to themselves on their own side and to `other` on
    /// the opposite side.
    fn component(&mut self, side: &Side, from_b: bool, comp: &[usize], at: usize, other: usize) {
        let tag = if from_b { "B" } else { "C" };
        let mut id = HashMap::new();
        for &v in comp {
            let name = format!("{tag}:{}", side.s.name(v));
            let nid = if from_b { self.vertex(name, v, other) } else { self.vertex(name, other, v) };
            id.insert(v, nid);
        }
        for &v in comp {
            for &w in side.s.neighbors(v) {
                if let Some(&j) = id.get(&w) {
                    if id[&v] < j {
                        self.builder.edge(id[&v], j);
                    }
                }
            }
        }
        self.builder.edge(at, id[&comp[0]]);
    }
}

fn check_input(f: &Morphism) -> Result<()> {
    let (d, c) = (f.domain(), f.codomain());
    if !d.is_tree() || !c.is_tree() {
        return Err(Error::NotATree);
    }
    if (0..d.len()).any(|v| d.degree(v) > 3) || (0..c.len()).any(|v| c.degree(v) > 3) {
        return Err(Error::Precondition("vertices of order more than three".into()));
    }
    if !f.is_monotone() {
        return Err(Error::Precondition("map is not monotone".into()));
    }
    Ok(())
}

fn unrooted(m: &Morphism) -> Result<Morphism> {
    let d = Arc::new(m.domain().as_ref().clone().with_root(None));
    let c = Arc::new(m.codomain().as_ref().clone().with_root(None));
    Morphism::new(d, c, m.map().to_vec())
}

/// Monotone amalgamation of monotone maps between trees of order at most
/// three; the amalgam again has order at most three.
pub fn m3(f: &Morphism, g: &Morphism) -> Result<AmalgamResult> {
    if f.codomain() != g.codomain() {
        return Err(Error::Precondition("maps have different codomains".into()));
    }
    let (f, g) = (unrooted(f)?, unrooted(g)?);
    check_input(&f)?;
    check_input(&g)?;
    let a = f.codomain().clone();
    if a.len() == 1 {
        return jpp_m3(f.domain(), g.domain());
    }
    let sb = layout(&f, &a)?;
    let sc = layout(&g, &a)?;
    let mut em = Emitter { builder: Builder::new(), to_b: Vec::new(), to_c: Vec::new() };
    let node: Vec<usize> =
        (0..a.len()).map(|x| em.vertex(format!("A:{}", a.name(x)), sb.center[x], sc.center[x])).collect();
    for (x, y) in a.edges() {
        let (bx, by) = &sb.parts[&(x, y)];
        let (cx, cy) = &sc.parts[&(x, y)];
        let b_last = bx.last().copied().unwrap_or(sb.center[x]);
        let c_first = cy.first().copied().unwrap_or(sc.center[y]);
        let mut prev = node[x];
        let mut step = |em: &mut Emitter, id: usize| {
            em.builder.edge(prev, id);
            prev = id;
        };
        for &v in bx {
            let id = em.vertex(format!("B:{}", sb.s.name(v)), v, sc.center[x]);
            step(&mut em, id);
            if let Some(hat) = sb.hats.get(&v) {
                em.component(&sb, true, hat, id, sc.center[x]);
            }
        }
        for &v in cx {
            let id = em.vertex(format!("C:{}", sc.s.name(v)), b_last, v);
            step(&mut em, id);
            if let Some(hat) = sc.hats.get(&v) {
                em.component(&sc, false, hat, id, b_last);
            }
        }
        for &v in by {
            let id = em.vertex(format!("B:{}", sb.s.name(v)), v, c_first);
            step(&mut em, id);
            if let Some(hat) = sb.hats.get(&v) {
                em.component(&sb, true, hat, id, c_first);
            }
        }
        for &v in cy {
            let id = em.vertex(format!("C:{}", sc.s.name(v)), sb.center[y], v);
            step(&mut em, id);
            if let Some(hat) = sc.hats.get(&v) {
                em.component(&sc, false, hat, id, sb.center[y]);
            }
        }
        em.builder.edge(prev, node[y]);
    }
    for x in 0..a.len() {
        let (eb, ec) = (sb.extra.get(&x), sc.extra.get(&x));
        if eb.is_none() && ec.is_none() {
            continue;
        }
        let prime = em.vertex(format!("A':{}", a.name(x)), sb.center[x], sc.center[x]);
        em.builder.edge(node[x], prime);
        if let Some(comp) = eb {
            em.component(&sb, true, comp, prime, sc.center[x]);
        }
        if let Some(comp) = ec {
            em.component(&sc, false, comp, prime, sb.center[x]);
        }
    }
    let Emitter { builder, to_b, to_c } = em;
    let (d, ids) = builder.finish();
    let mut fm = vec![0; d.len()];
    let mut gm = vec![0; d.len()];
    for (i, (&b, &c)) in to_b.iter().zip(&to_c).enumerate() {
        fm[ids[i]] = b;
        gm[ids[i]] = c;
    }
    AmalgamResult::new(Morphism::new(d.clone(), f.domain().clone(), fm)?, Morphism::new(d, g.domain().clone(), gm)?)
}

fn least_end(s: &FiniteGraph) -> usize {
    (0..s.len()).find(|&v| s.degree(v) <= 1).unwrap_or(0)
}

/// Wedge of `B` and `C` at their least end vertices; each map is the
/// identity on its own side and collapses the other side to the wedge point.
pub fn jpp_m3(b: &Arc<FiniteGraph>, c: &Arc<FiniteGraph>) -> Result<AmalgamResult> {
    if b.is_empty() || c.is_empty() || !b.is_tree() || !c.is_tree() {
        return Err(Error::NotATree);
    }
    let (eb, ec) = (least_end(b), least_end(c));
    let mut builder = Builder::new();
    let mut to_b = Vec::new();
    let mut to_c = Vec::new();
    let bid: Vec<usize> = (0..b.len())
        .map(|v| {
            to_b.push(v);
            to_c.push(ec);
            builder.vertex(&format!("B:{}", b.name(v)))
        })
        .collect();
    let cid: Vec<usize> = (0..c.len())
        .map(|v| {
            if v == ec {
                return bid[eb];
            }
            to_b.push(eb);
            to_c.push(v);
            builder.vertex(&format!("C:{}", c.name(v)))
        })
        .collect();
    to_c[bid[eb]] = ec;
    for (x, y) in b.edges() {
        builder.edge(bid[x], bid[y]);
    }
    for (x, y) in c.edges() {
        builder.edge(cid[x], cid[y]);
    }
    let (d, ids) = builder.finish();
    let mut fm = vec![0; d.len()];
    let mut gm = vec![0; d.len()];
    for i in 0..to_b.len() {
        fm[ids[i]] = to_b[i];
        gm[ids[i]] = to_c[i];
    }
    let plain = |g: &Arc<FiniteGraph>| Arc::new(g.as_ref().clone().with_root(None));
    AmalgamResult::new(Morphism::new(d.clone(), plain(b), fm)?, Morphism::new(d, plain(c), gm)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vs: &[&str], es: &[(&str, &str)]) -> Arc<FiniteGraph> {
        Arc::new(FiniteGraph::new(vs.iter().copied(), es.iter().copied(), None).unwrap())
    }

    #[test]
    fn two_collapses_of_a_triod() {
        let a = graph(&["c", "x", "y", "z"], &[("c", "x"), ("c", "y"), ("c", "z")]);
        let b = graph(&["c", "m", "x", "y", "z"], &[("c", "m"), ("m", "x"), ("c", "y"), ("c", "z")]);
        let f = Morphism::from_named(b, a.clone(), [("c", "c"), ("m", "x"), ("x", "x"), ("y", "y"), ("z", "z")]).unwrap();
        let c = graph(&["c", "n", "x", "y", "z"], &[("c", "n"), ("n", "y"), ("c", "x"), ("c", "z")]);
        let g = Morphism::from_named(c, a, [("c", "c"), ("n", "c"), ("x", "x"), ("y", "y"), ("z", "z")]).unwrap();
        let res = m3(&f, &g).unwrap();
        assert!(res.commutes(&f, &g));
        assert!(res.f0.is_monotone() && res.g0.is_monotone());
        assert!(res.domain.is_tree());
        assert!((0..res.domain.len()).all(|v| res.domain.degree(v) <= 3));
    }

    #[test]
    fn wedge() {
        let b = graph(&["0", "1", "2"], &[("0", "1"), ("1", "2")]);
        let c = graph(&["p", "q"], &[("p", "q")]);
        let res = jpp_m3(&b, &c).unwrap();
        assert_eq!(res.domain.len(), 4);
        assert!(res.f0.is_monotone() && res.g0.is_monotone());
        assert!((0..res.domain.len()).all(|v| res.domain.degree(v) <= 3));
    }
}
