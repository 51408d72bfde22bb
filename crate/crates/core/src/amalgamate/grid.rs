//! Amalgamation of simple-monotone and simple-confluent maps, filling a grid
//! of elementary cells.

use std::sync::Arc;

use super::{rooted_light, AmalgamResult};
use crate::error::{Error, Result};
use crate::factorize::{decompose_simple_confluent, decompose_simple_star, simple_monotone_chain, Decomposition};
use crate::graph::FiniteGraph;
use crate::morphism::{compose, compose_chain, Morphism};
use crate::ops::Builder;

/// Cells allowed before giving up; the grids met in practice are far smaller.
const MAX_CELLS: usize = 100_000;

/// Chains are listed codomain-first: `[h1, h2, ..]` stands for `h1 ∘ h2 ∘ ..`.
type Chain = Vec<Morphism>;

/// Where a one-vertex generator inserts its new vertex into the codomain.
enum Insertion {
    Split { new: usize, ends: (usize, usize) },
    Add { new: usize },
}

impl Insertion {
    fn new_vertex(&self) -> usize {
        match *self {
            Insertion::Split { new, .. } | Insertion::Add { new } => new,
        }
    }
}

fn insertion(s: &Morphism) -> Result<Insertion> {
    let b = s.domain();
    let pair = s
        .fibers()
        .into_iter()
        .find(|f| f.len() == 2)
        .ok_or_else(|| Error::Precondition("generator has no merged pair".into()))?;
    // A split next to an end vertex also reads as an added end vertex; the
    // split reading is preferred so that split-only inputs give split-only legs.
    let candidates = [(pair[0], pair[1]), (pair[1], pair[0])];
    for (x, keep) in candidates {
        if b.root() != Some(x) && b.degree(x) == 2 {
            let other = *b.neighbors(x).iter().find(|&&w| w != keep).unwrap();
            return Ok(Insertion::Split { new: x, ends: (s.apply(keep), s.apply(other)) });
        }
    }
    for (x, _) in candidates {
        if b.root() != Some(x) && b.degree(x) == 1 {
            return Ok(Insertion::Add { new: x });
        }
    }
    Err(Error::Precondition("map is neither a splitting-edge nor an adding-edge map".into()))
}

fn same_edge(a: (usize, usize), b: (usize, usize)) -> bool {
    a == b || a == (b.1, b.0)
}

/// Amalgamates two generators `s: B -> A`, `t: C -> A` by inserting both new
/// vertices into `A`. Each leg merges one new vertex back.
fn generator_cell(s: &Morphism, t: &Morphism) -> Result<(Chain, Chain)> {
    let a = s.codomain();
    let (is, it) = (insertion(s)?, insertion(t)?);
    let (x, y) = (is.new_vertex(), it.new_vertex());
    let mut builder = Builder::new();
    for v in 0..a.len() {
        builder.vertex(a.name(v));
    }
    let nx = builder.vertex(s.domain().name(x));
    let ny = builder.vertex(t.domain().name(y));
    let lift = |m: &Morphism, new: usize, id: usize, v: usize| if v == new { id } else { m.apply(v) };
    let from_b: Vec<(usize, usize)> =
        s.domain().edges().into_iter().map(|(u, v)| (lift(s, x, nx, u), lift(s, x, nx, v))).collect();
    let from_c: Vec<(usize, usize)> =
        t.domain().edges().into_iter().map(|(u, v)| (lift(t, y, ny, u), lift(t, y, ny, v))).collect();
    let on_a = |e: &(usize, usize)| e.0 < a.len() && e.1 < a.len();
    let mut edges: Vec<(usize, usize)> = from_b
        .iter()
        .filter(|e| !on_a(e) || from_c.iter().any(|f| same_edge(**e, *f)))
        .copied()
        .collect();
    edges.extend(from_c.iter().filter(|e| !on_a(e)).copied());
    if let (Insertion::Split { ends: eb, .. }, Insertion::Split { ends: ec, .. }) = (&is, &it) {
        if same_edge(*eb, *ec) {
            // Both split one edge `p - q`: put the two new vertices in a row,
            // the one mapped to `p` next to `p`.
            let (p, q) = *eb;
            let (first, second) = if s.apply(x) == p || t.apply(y) != p { (nx, ny) } else { (ny, nx) };
            edges.retain(|&(u, v)| u != nx && v != nx && u != ny && v != ny);
            edges.extend([(p, first), (first, second), (second, q)]);
        }
    }
    for (u, v) in edges {
        builder.edge(u, v);
    }
    if let Some(r) = a.root() {
        builder.set_root(r);
    }
    let (d, ids) = builder.finish();
    let section = |m: &Morphism, new: usize| {
        let mut out = vec![usize::MAX; a.len()];
        for v in 0..m.domain().len() {
            if v != new {
                out[m.apply(v)] = v;
            }
        }
        out
    };
    let (sec_b, sec_c) = (section(s, x), section(t, y));
    // Builder ids follow insertion order: A's vertices, then x, then y.
    let mut fm = vec![usize::MAX; d.len()];
    let mut gm = vec![usize::MAX; d.len()];
    for v in 0..a.len() {
        fm[ids[v]] = sec_b[v];
        gm[ids[v]] = sec_c[v];
    }
    fm[ids[nx]] = x;
    gm[ids[ny]] = y;
    let pick = |map: &[usize], leg: &Morphism, target: usize, at: usize| {
        d.neighbors(at).iter().map(|&n| map[n]).find(|&b| b != usize::MAX && leg.apply(b) == target)
    };
    fm[ids[ny]] = pick(&fm, s, t.apply(y), ids[ny])
        .ok_or_else(|| Error::InvalidMorphism("no neighbor to merge the second new vertex into".into()))?;
    gm[ids[nx]] = pick(&gm, t, s.apply(x), ids[nx])
        .ok_or_else(|| Error::InvalidMorphism("no neighbor to merge the first new vertex into".into()))?;
    let f0 = Morphism::new(d.clone(), s.domain().clone(), fm)?;
    let g0 = Morphism::new(d, t.domain().clone(), gm)?;
    Ok((vec![f0], vec![g0]))
}

/// A monotone leg as a chain of generators.
fn generator_chain(m: &Morphism) -> Result<Chain> {
    let (factors, iso) = simple_monotone_chain(m, true)?
        .ok_or_else(|| Error::Precondition("monotone leg is not a composition of generators".into()))?;
    Ok(fold_iso(factors.into_iter().map(|f| f.map).collect(), iso))
}

/// Turns domain-first factors followed by an isomorphism into a
/// codomain-first chain, absorbing the isomorphism into the last factor.
fn fold_iso(mut factors: Vec<Morphism>, iso: Morphism) -> Chain {
    match factors.pop() {
        Some(last) => {
            let mut chain = vec![compose(&iso, &last).expect("isomorphism follows the last factor")];
            chain.extend(factors.into_iter().rev());
            chain
        }
        None => vec![iso],
    }
}

/// Amalgamates a generator `s: B -> A` with a light confluent `t: C -> A` by
/// inserting a copy of the new vertex of `s` over every preimage under `t` of
/// the place where `s` inserts it.
fn generator_light_cell(s: &Morphism, t: &Morphism) -> Result<(Chain, Chain)> {
    let ins = insertion(s)?;
    let x = ins.new_vertex();
    let c = t.domain();
    let mut builder = Builder::new();
    for v in 0..c.len() {
        builder.vertex(c.name(v));
    }
    if let Some(r) = c.root() {
        builder.set_root(r);
    }
    let mut to_b: Vec<usize> = (0..c.len()).collect();
    let mut to_c: Vec<usize> = (0..c.len()).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let name = s.domain().name(x);
    match ins {
        Insertion::Split { ends: (p, q), .. } => {
            for (u, w) in c.edges() {
                let (lo, hi) = match (t.apply(u), t.apply(w)) {
                    (a, b) if (a, b) == (p, q) => (u, w),
                    (a, b) if (a, b) == (q, p) => (w, u),
                    _ => {
                        edges.push((u, w));
                        continue;
                    }
                };
                let id = builder.vertex(name);
                to_b.push(usize::MAX);
                to_c.push(lo);
                edges.extend([(lo, id), (id, hi)]);
            }
        }
        Insertion::Add { .. } => {
            edges.extend(c.edges());
            for u in 0..c.len() {
                if t.apply(u) == s.apply(x) {
                    let id = builder.vertex(name);
                    to_b.push(usize::MAX);
                    to_c.push(u);
                    edges.push((u, id));
                }
            }
        }
    }
    for (u, w) in edges {
        builder.edge(u, w);
    }
    let (d, fin) = builder.finish();
    let mut sec = vec![usize::MAX; s.codomain().len()];
    for v in 0..s.domain().len() {
        if v != x {
            sec[s.apply(v)] = v;
        }
    }
    let mut fm = vec![0; d.len()];
    let mut gm = vec![0; d.len()];
    for (i, (&b, &cc)) in to_b.iter().zip(&to_c).enumerate() {
        fm[fin[i]] = if b == usize::MAX { x } else { sec[t.apply(cc)] };
        gm[fin[i]] = cc;
    }
    let f0 = Morphism::new(d.clone(), s.domain().clone(), fm)?;
    let g0 = Morphism::new(d, c.clone(), gm)?;
    Ok((vec![f0], generator_chain(&g0)?))
}

fn swap<A, B>((a, b): (A, B)) -> (B, A) {
    (b, a)
}

fn cell(s: &Morphism, t: &Morphism) -> Result<(Chain, Chain)> {
    match (s.is_light(), t.is_light()) {
        (true, true) => {
            let r = rooted_light(s, t)?;
            Ok((vec![r.f0], vec![r.g0]))
        }
        (false, true) => generator_light_cell(s, t),
        (true, false) => generator_light_cell(t, s).map(swap),
        (false, false) => generator_cell(s, t),
    }
}

struct Grid {
    cells: usize,
}

impl Grid {
    /// Legs `(p, q)` of an amalgam of the composites of `f` and `g`.
    fn fill(&mut self, f: &[Morphism], g: &[Morphism]) -> Result<(Chain, Chain)> {
        let (Some((s, f_rest)), Some((t, g_rest))) = (f.split_first(), g.split_first()) else {
            return Ok((g.to_vec(), f.to_vec()));
        };
        self.cells += 1;
        if self.cells > MAX_CELLS {
            return Err(Error::Precondition("amalgamation grid too large".into()));
        }
        let (a, b) = cell(s, t)?;
        let (p, q) = self.fill(f_rest, &a)?;
        let mut down = b;
        down.extend(q);
        let (r, w) = self.fill(&down, g_rest)?;
        let mut left = p;
        left.extend(r);
        Ok((left, w))
    }
}

fn realize(chain: &[Morphism], domain: &Arc<FiniteGraph>) -> Result<Morphism> {
    if chain.is_empty() {
        Ok(Morphism::identity(domain.clone()))
    } else {
        compose_chain(chain)
    }
}

fn amalgamate_chains(f: &Morphism, g: &Morphism, fc: Chain, gc: Chain) -> Result<AmalgamResult> {
    if f.codomain() != g.codomain() {
        return Err(Error::Precondition("maps have different codomains".into()));
    }
    let (p, q) = Grid { cells: 0 }.fill(&fc, &gc)?;
    let d = p
        .last()
        .or(q.last())
        .map(|m| m.domain().clone())
        .unwrap_or_else(|| f.domain().clone());
    let res = AmalgamResult::new(realize(&p, &d)?, realize(&q, &d)?)?;
    if !res.commutes(f, g) {
        return Err(Error::InvalidMorphism("amalgamation square does not commute".into()));
    }
    Ok(res)
}

/// Amalgamation of two simple-monotone (or simple*-monotone) maps; both legs
/// are compositions of splitting-edge and adding-edge maps.
pub fn simple_monotone_pair(f: &Morphism, g: &Morphism) -> Result<AmalgamResult> {
    let fc = generator_chain(f).map_err(|_| Error::Precondition("first map is not simple*-monotone".into()))?;
    let gc = generator_chain(g).map_err(|_| Error::Precondition("second map is not simple*-monotone".into()))?;
    amalgamate_chains(f, g, fc, gc)
}

/// Amalgamation of a simple(*)-monotone `f: B -> A` with a light confluent
/// `g: C -> A`: `f0` is light confluent and `g0` simple(*)-monotone.
pub fn mono_light_pair(f: &Morphism, g: &Morphism) -> Result<AmalgamResult> {
    let fc = generator_chain(f).map_err(|_| Error::Precondition("first map is not simple*-monotone".into()))?;
    if !g.is_light() || !g.is_confluent() {
        return Err(Error::Precondition("second map must be light confluent".into()));
    }
    amalgamate_chains(f, g, fc, vec![g.clone()])
}

/// Codomain-first stages: runs of light factors composed into one map,
/// generators kept one by one.
fn stages(dec: Decomposition) -> Result<Chain> {
    let chain = fold_iso(dec.factors.into_iter().map(|f| f.map).collect(), dec.iso);
    let mut out: Chain = Vec::new();
    for m in chain {
        match out.last_mut() {
            Some(prev) if prev.is_light() && m.is_light() => *prev = compose(prev, &m)?,
            _ => out.push(m),
        }
    }
    Ok(out)
}

fn decompose(h: &Morphism, star: bool, which: &str) -> Result<Chain> {
    let outcome = if star { decompose_simple_star(h)? } else { decompose_simple_confluent(h)? };
    let kind = if star { "simple*-confluent" } else { "simple-confluent" };
    stages(outcome.map_err(|_| Error::Precondition(format!("{which} map is not {kind}")))?)
}

/// Amalgamation of two simple-confluent maps (simple*-confluent with `star`)
/// whose legs are again of the same kind.
pub fn simple_confluent_pair(f: &Morphism, g: &Morphism, star: bool) -> Result<AmalgamResult> {
    let fc = decompose(f, star, "first")?;
    let gc = decompose(g, star, "second")?;
    amalgamate_chains(f, g, fc, gc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::split_edge;

    fn tree(vs: &[&str], es: &[(&str, &str)]) -> Arc<FiniteGraph> {
        Arc::new(FiniteGraph::new(vs.iter().copied(), es.iter().copied(), Some("r")).unwrap())
    }

    #[test]
    fn shared_edge_split_twice() {
        let a = tree(&["r", "a"], &[("r", "a")]);
        let f = split_edge(&a, "r", "a", "r", Some("x")).unwrap();
        let g = split_edge(&a, "r", "a", "a", Some("y")).unwrap();
        let res = simple_monotone_pair(&f, &g).unwrap();
        assert_eq!(res.domain.len(), 4);
        assert!(res.domain.is_arc());
        assert!(res.f0.is_splitting_edge() && res.g0.is_splitting_edge());
        let (f, g) = (g, f);
        let res = simple_monotone_pair(&f, &g).unwrap();
        assert_eq!(res.domain.len(), 4);
    }

    #[test]
    fn distinct_edges_split_together() {
        let a = tree(&["r", "a", "b"], &[("r", "a"), ("r", "b")]);
        let f = split_edge(&a, "r", "a", "a", None).unwrap();
        let g = split_edge(&a, "r", "b", "r", None).unwrap();
        let res = simple_monotone_pair(&f, &g).unwrap();
        assert_eq!(res.domain.len(), 5);
        assert!(res.f0.is_splitting_edge() && res.g0.is_splitting_edge());
    }

    #[test]
    fn identity_legs() {
        let a = tree(&["r", "a", "b"], &[("r", "a"), ("r", "b")]);
        let id = Morphism::identity(a.clone());
        let res = simple_confluent_pair(&id, &id, false).unwrap();
        assert!(res.f0.is_isomorphism() && res.g0.is_isomorphism());
    }
}
