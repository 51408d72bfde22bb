//! Tree operations used to build the stages of the sequence.

use std::sync::Arc;

use crate::amalgamate::emit_cone;
use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::ops::Builder;
use crate::tree::RootedTree;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Replaces every edge `a - b` (`a` below `b`) by `a - a>b - b<a - b`, the
/// new vertices mapped to the nearer old endpoint.
pub fn double_split(t: &RootedTree) -> Result<Morphism> {
    let mut builder = Builder::new();
    let ids: Vec<usize> = (0..t.len()).map(|v| builder.vertex(t.name(v))).collect();
    let mut image: Vec<usize> = (0..t.len()).collect();
    for v in 0..t.len() {
        let Some(p) = t.parent(v) else { continue };
        let low = builder.vertex(&format!("{}>{}", t.name(p), t.name(v)));
        image.push(p);
        let high = builder.vertex(&format!("{}<{}", t.name(v), t.name(p)));
        image.push(v);
        builder.edge(ids[p], low);
        builder.edge(low, high);
        builder.edge(high, ids[v]);
    }
    builder.set_root(ids[t.root()]);
    finish(builder, &image, t.graph_arc())
}

fn finish(builder: Builder, image: &[usize], codomain: &Arc<crate::graph::FiniteGraph>) -> Result<Morphism> {
    let (d, fin) = builder.finish();
    let mut map = vec![0; d.len()];
    for (b, &img) in image.iter().enumerate() {
        map[fin[b]] = img;
    }
    Morphism::new(d, codomain.clone(), map)
}

/// Copies `t`, letting `grow(v)` list the successors (with repetitions) to
/// emit below each copy of `v`. Copies map back to their originals.
pub(crate) fn replicate(t: &RootedTree, grow: &dyn Fn(usize) -> Vec<usize>) -> Result<Morphism> {
    let mut builder = Builder::new();
    let mut image = Vec::new();
    let root = emit_cone(t, t.root(), &mut builder, &mut image, None, grow);
    builder.set_root(root);
    finish(builder, &image, t.graph_arc())
}

/// Repeats successor cones until every vertex other than an end vertex has
/// exactly `n` successors. `n` must be a multiple of every successor order.
pub fn multiply_branches(t: &RootedTree, n: usize) -> Result<Morphism> {
    let l = (0..t.len()).filter(|&v| !t.is_end(v)).map(|v| t.sord(v)).filter(|&s| s > 0).fold(1, lcm);
    if n == 0 || n % l != 0 {
        return Err(Error::Precondition(format!("{n} is not a multiple of the successor orders (lcm {l})")));
    }
    replicate(t, &|v| {
        let kids = t.children(v);
        if kids.is_empty() {
            return Vec::new();
        }
        let k = n / kids.len();
        kids.iter().flat_map(|&c| std::iter::repeat_n(c, k)).collect()
    })
}

/// Validated colors: `colors[v]` is the color of `v` among the successors of
/// its parent; the colors used at each vertex form an initial segment.
fn color_counts(t: &RootedTree, colors: &[usize]) -> Result<Vec<Vec<usize>>> {
    if colors.len() != t.len() {
        return Err(Error::Precondition("one color per vertex is required".into()));
    }
    (0..t.len())
        .map(|v| {
            let mut counts: Vec<usize> = Vec::new();
            for &c in t.children(v) {
                let i = colors[c];
                if counts.len() <= i {
                    counts.resize(i + 1, 0);
                }
                counts[i] += 1;
            }
            if counts.contains(&0) {
                return Err(Error::Precondition(format!(
                    "colors at `{}` do not form an initial segment",
                    t.name(v)
                )));
            }
            Ok(counts)
        })
        .collect()
}

/// Repeats successor cones so that every vertex over `a` gets exactly `n / k`
/// successors of each color, where `k` is the number of colors at `a`.
pub fn colored_add_branches(t: &RootedTree, colors: &[usize], n: usize) -> Result<Morphism> {
    let counts = color_counts(t, colors)?;
    for (v, cs) in counts.iter().enumerate() {
        if cs.is_empty() {
            continue;
        }
        let k = cs.len();
        if n % k != 0 || cs.iter().any(|&m| m > n / k) {
            return Err(Error::Precondition(format!(
                "parameter {n} does not fit the {k}-coloring at `{}`",
                t.name(v)
            )));
        }
    }
    replicate(t, &|v| {
        let kids = t.children(v);
        let cs = &counts[v];
        let mut out = kids.to_vec();
        for (i, &m) in cs.iter().enumerate() {
            let first = *kids.iter().find(|&&c| colors[c] == i).unwrap();
            out.extend(std::iter::repeat_n(first, n / cs.len() - m));
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FiniteGraph;

    fn a1() -> RootedTree {
        RootedTree::from_graph(FiniteGraph::new(["r", "x", "y"], [("r", "x"), ("r", "y")], Some("r")).unwrap()).unwrap()
    }

    #[test]
    fn double_split_of_a1() {
        let d = double_split(&a1()).unwrap();
        assert_eq!(d.domain().len(), 7);
        let t = d.domain_tree().unwrap();
        assert_eq!(t.tree_height(), 3);
        assert!(crate::factorize::is_simple_monotone(&d).unwrap());
    }

    #[test]
    fn multiply_a1() {
        assert_eq!(multiply_branches(&a1(), 2).unwrap().domain().len(), 3);
        assert_eq!(multiply_branches(&a1(), 4).unwrap().domain().len(), 5);
        assert!(multiply_branches(&a1(), 3).is_err());
        let d = double_split(&a1()).unwrap();
        let u = multiply_branches(d.domain_tree().unwrap(), 4).unwrap();
        assert_eq!(u.domain().len(), 85);
        assert!(u.is_light() && u.is_confluent());
    }

    #[test]
    fn colored_branches() {
        let t = a1();
        let trivial = colored_add_branches(&t, &[0, 0, 0], 2).unwrap();
        assert_eq!(trivial.domain().len(), 3);
        let two = colored_add_branches(&t, &[0, 0, 1], 2).unwrap();
        assert_eq!(two.domain().len(), 3);
        let four = colored_add_branches(&t, &[0, 0, 1], 4).unwrap();
        assert_eq!(four.domain().len(), 5);
        let s = four.domain_tree().unwrap();
        let per_color = |c| s.children(s.root()).iter().filter(|&&k| four.apply(k) == c).count();
        assert_eq!((per_color(1), per_color(2)), (2, 2));
        assert!(colored_add_branches(&t, &[0, 0, 1], 3).is_err());
    }
}
