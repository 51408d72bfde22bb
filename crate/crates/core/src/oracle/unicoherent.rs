use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;

/// Every two connected subgraphs (vertex set plus a subset of the edges
/// among them) meet in a connected subgraph.
///
/// Only subgraphs whose edges form a tree are enumerated: dropping edges
/// from `P` and `Q` keeps their vertex sets and can only disconnect the
/// intersection further, so a failing pair can always be thinned to
/// spanning trees. For forests, connectivity of the intersection is
/// `|V| = |E| + 1` (or empty).
pub fn is_hereditarily_unicoherent(g: &FiniteGraph) -> Result<bool> {
    let n = g.len();
    let edges = g.edges();
    if n > 64 || edges.len() > 64 {
        return Err(Error::Precondition("graph too large for the exhaustive check".into()));
    }
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    let mut stack: Vec<(u64, u64)> = (0..n).map(|v| (1u64 << v, 0u64)).collect();
    while let Some((vm, em)) = stack.pop() {
        if !seen.insert((vm, em)) {
            continue;
        }
        for (i, &(a, b)) in edges.iter().enumerate() {
            let (ia, ib) = (vm >> a & 1 == 1, vm >> b & 1 == 1);
            if ia != ib {
                stack.push((vm | 1 << a | 1 << b, em | 1 << i));
            }
        }
    }
    let subs: Vec<(u64, u64)> = seen.into_iter().collect();
    for (i, &(v1, e1)) in subs.iter().enumerate() {
        for &(v2, e2) in &subs[i + 1..] {
            let v = v1 & v2;
            if v != 0 && v.count_ones() != (e1 & e2).count_ones() + 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_fails_path_passes() {
        let c3 = FiniteGraph::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")], None).unwrap();
        assert!(!is_hereditarily_unicoherent(&c3).unwrap());
        let p = FiniteGraph::new(["a", "b", "c"], [("a", "b"), ("b", "c")], None).unwrap();
        assert!(is_hereditarily_unicoherent(&p).unwrap());
    }
}
