use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::tree::RootedTree;

/// A vertex `q` over a ramification vertex `p` together with the induced
/// assignment of successors of `q` to successors of `p` (`None` when the
/// cone of that successor is mapped onto `p` alone).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialVertex {
    pub vertex: usize,
    pub assignment: Vec<(usize, Option<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecialFailure {
    NotConfluent,
    NotEndVertexPreserving { vertex: usize },
    RootNotSpecial { ramification: usize },
    NoSpecialBelow { ramification: usize, vertex: usize },
}

/// For each successor `c` of `q`, the successors of `p` whose cones meet `f(C̄_c)`.
fn cone_hits(f: &Morphism, d: &RootedTree, c: &RootedTree, q: usize, p: usize) -> Vec<(usize, Vec<usize>)> {
    d.children(q)
        .iter()
        .map(|&k| {
            let mut hit: Vec<usize> =
                d.subtree(k).iter().filter_map(|&w| c.child_toward(p, f.apply(w))).collect();
            hit.sort_unstable();
            hit.dedup();
            (k, hit)
        })
        .collect()
}

fn check_special(f: &Morphism, d: &RootedTree, c: &RootedTree, q: usize, p: usize, star: bool) -> Option<SpecialVertex> {
    let hits = cone_hits(f, d, c, q, p);
    let mut covered = vec![false; c.len()];
    let mut assignment = Vec::with_capacity(hits.len());
    for (k, hit) in hits {
        match hit.len() {
            1 => {
                covered[hit[0]] = true;
                assignment.push((k, Some(hit[0])));
            }
            0 if star => assignment.push((k, None)),
            _ => return None,
        }
    }
    c.children(p).iter().all(|&x| covered[x]).then_some(SpecialVertex { vertex: q, assignment })
}

fn special_set(f: &Morphism, p: usize, star: bool) -> Result<Vec<SpecialVertex>> {
    let (d, c) = f.rooted()?;
    if !c.is_ramification(p) {
        return Err(Error::Precondition(format!("`{}` is not a ramification vertex", c.name(p))));
    }
    if !f.is_confluent() {
        return Err(Error::Precondition("map is not confluent".into()));
    }
    Ok(f.fiber(p).into_iter().filter_map(|q| check_special(f, d, c, q, p, star)).collect())
}

/// Vertices special for the ramification vertex `p`: every successor cone
/// covers exactly one successor cone of `p`, and all of them are covered.
pub fn special_vertices(f: &Morphism, p: usize) -> Result<Vec<SpecialVertex>> {
    special_set(f, p, false)
}

/// Relaxed variant where a successor cone may also map onto `p` alone.
pub fn special_vertices_star(f: &Morphism, p: usize) -> Result<Vec<SpecialVertex>> {
    special_set(f, p, true)
}

/// First reason `f` is not special (or not special*, with `star`), if any.
///
/// Besides the condition below every vertex mapped strictly above a
/// ramification vertex, the root of the domain must itself be special for
/// the root of the codomain whenever the latter ramifies.
pub fn special_failure(f: &Morphism, star: bool) -> Result<Option<SpecialFailure>> {
    let (d, c) = f.rooted()?;
    if !f.is_confluent() {
        return Ok(Some(SpecialFailure::NotConfluent));
    }
    if !star {
        if let Some(e) = d.end_vertices().into_iter().find(|&e| !c.is_end(f.apply(e))) {
            return Ok(Some(SpecialFailure::NotEndVertexPreserving { vertex: e }));
        }
    }
    let fibers = f.fibers();
    for x in (0..c.len()).filter(|&x| c.is_ramification(x)) {
        let mut special = vec![false; d.len()];
        for &q in &fibers[x] {
            if check_special(f, d, c, q, x, star).is_some() {
                special[q] = true;
            }
        }
        if x == c.root() && !special[d.root()] {
            return Ok(Some(SpecialFailure::RootNotSpecial { ramification: x }));
        }
        let mut below = vec![false; d.len()];
        for &v in d.preorder() {
            if let Some(p) = d.parent(v) {
                below[v] = below[p] || special[p];
            }
            if c.lt(x, f.apply(v)) && !below[v] {
                return Ok(Some(SpecialFailure::NoSpecialBelow { ramification: x, vertex: v }));
            }
        }
    }
    Ok(None)
}

pub fn is_special(f: &Morphism) -> Result<bool> {
    if !f.is_confluent() {
        return Err(Error::Precondition("map is not confluent".into()));
    }
    Ok(special_failure(f, false)?.is_none())
}

pub fn is_special_star(f: &Morphism) -> Result<bool> {
    if !f.is_confluent() {
        return Err(Error::Precondition("map is not confluent".into()));
    }
    Ok(special_failure(f, true)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FiniteGraph;
    use std::sync::Arc;

    fn tree(vs: &[&str], es: &[(&str, &str)]) -> Arc<FiniteGraph> {
        Arc::new(FiniteGraph::new(vs.iter().copied(), es.iter().copied(), Some("r")).unwrap())
    }

    #[test]
    fn fold_of_two_leaves_has_root_special() {
        let s = tree(&["r", "a", "b", "c", "d"], &[("r", "a"), ("r", "b"), ("r", "c"), ("r", "d")]);
        let t = tree(&["r", "x", "y"], &[("r", "x"), ("r", "y")]);
        let f = Morphism::from_named(s, t.clone(), [("r", "r"), ("a", "x"), ("b", "x"), ("c", "y"), ("d", "y")]).unwrap();
        let sv = special_vertices(&f, t.require("r").unwrap()).unwrap();
        assert_eq!(sv.len(), 1);
        assert!(is_special(&f).unwrap());
    }

    #[test]
    fn collapsed_root_edge_is_not_special() {
        let s = tree(&["r", "u", "a", "b"], &[("r", "u"), ("u", "a"), ("u", "b")]);
        let t = tree(&["r", "x", "y"], &[("r", "x"), ("r", "y")]);
        let f = Morphism::from_named(s, t, [("r", "r"), ("u", "r"), ("a", "x"), ("b", "y")]).unwrap();
        assert!(f.is_confluent() && f.is_end_vertex_preserving());
        assert_eq!(special_failure(&f, false).unwrap(), Some(SpecialFailure::RootNotSpecial { ramification: 0 }));
    }

    #[test]
    fn star_allows_cones_over_the_vertex() {
        let s = tree(&["r", "a", "b", "c"], &[("r", "a"), ("r", "b"), ("r", "c")]);
        let t = tree(&["r", "x", "y"], &[("r", "x"), ("r", "y")]);
        let f = Morphism::from_named(s, t, [("r", "r"), ("a", "x"), ("b", "y"), ("c", "r")]).unwrap();
        assert!(!is_special(&f).unwrap());
        assert!(is_special_star(&f).unwrap());
    }

    #[test]
    fn non_ramification_is_an_error() {
        let s = tree(&["r", "a"], &[("r", "a")]);
        let f = Morphism::identity(s);
        assert!(special_vertices(&f, 0).is_err());
    }
}
