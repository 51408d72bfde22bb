//! Discrete version of the dendroid construction: an arc over `[0, 1]` is
//! doubled once per sequence entry `d`, the two copies glued along all
//! points of height at most `d`. Vertices sit at `0`, `1` and every entry.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::morphism::Morphism;
use crate::ops::Builder;
use crate::tree::RootedTree;

pub type Rational = Ratio<i64>;

/// Largest number of vertices `mn_tree` will build.
const MAX_VERTICES: u128 = 1 << 22;

/// A finite sequence of rationals in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MnSequence {
    entries: Vec<Rational>,
}

impl MnSequence {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|d| **d < Rational::zero() || **d >= Rational::one()) {
            return Err(Error::Precondition(format!("entry {bad} is outside [0, 1)")));
        }
        if entries.len() > 62 {
            return Err(Error::Precondition("at most 62 entries are supported".into()));
        }
        Ok(MnSequence { entries })
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn prefix(&self, m: usize) -> MnSequence {
        MnSequence { entries: self.entries[..m.min(self.len())].to_vec() }
    }

    pub fn is_prefix_of(&self, other: &MnSequence) -> bool {
        other.entries.starts_with(&self.entries)
    }

    /// `0`, `1` and the distinct entries, increasing.
    fn grid(&self) -> Vec<Rational> {
        let mut g: Vec<Rational> = self.entries.clone();
        g.push(Rational::zero());
        g.push(Rational::one());
        g.sort();
        g.dedup();
        g
    }

    /// Address bits that are still free at height `h`.
    fn free_mask(&self, h: Rational) -> u64 {
        self.entries.iter().enumerate().filter(|(_, d)| **d < h).fold(0, |m, (i, _)| m | 1 << i)
    }
}

impl FromStr for MnSequence {
    type Err = Error;

    /// Parses a comma-separated list such as `2/3, 1/3, 0`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| Rational::from_str(t).map_err(|_| Error::Parse(format!("`{t}` is not a fraction"))))
            .collect::<Result<Vec<_>>>()?;
        MnSequence::new(entries)
    }
}

impl fmt::Display for MnSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The tree of a sequence with the height of every vertex. A vertex is a
/// height of the grid together with the address of the copy it lies in;
/// address bits of entries at or above the height are zero.
#[derive(Clone, Debug)]
pub struct MnTree {
    pub sequence: MnSequence,
    pub tree: RootedTree,
    pub heights: Vec<Rational>,
    grid: Vec<Rational>,
    index: HashMap<(usize, u64), usize>,
    level: Vec<usize>,
    address: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MnVertexJson {
    pub name: String,
    pub height: String,
}

impl MnTree {
    pub fn graph(&self) -> &Arc<FiniteGraph> {
        self.tree.graph_arc()
    }

    pub fn leaf_count(&self) -> usize {
        self.tree.end_vertices().len()
    }

    /// Heights of all vertices, for serialization.
    pub fn vertex_heights(&self) -> Vec<MnVertexJson> {
        (0..self.tree.len())
            .map(|v| MnVertexJson { name: self.tree.name(v).to_string(), height: self.heights[v].to_string() })
            .collect()
    }

    /// Heights as positions in the increasing list of distinct heights.
    pub fn height_ranks(&self) -> Vec<usize> {
        self.level.clone()
    }
}

fn bit_string(mask: u64, n: usize) -> String {
    (0..n).map(|i| if mask >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// All submasks of `mask`, increasing.
fn submasks(mask: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut s = mask;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    out.reverse();
    out
}

pub fn mn_tree(seq: &MnSequence) -> Result<MnTree> {
    let grid = seq.grid();
    let n = seq.len();
    let masks: Vec<u64> = grid.iter().map(|&h| seq.free_mask(h)).collect();
    let needed: u128 = masks.iter().map(|m| 1u128 << m.count_ones()).sum();
    if needed > MAX_VERTICES {
        return Err(Error::CapExceeded { needed, cap: MAX_VERTICES as u64 });
    }
    let mut builder = Builder::new();
    let mut index = HashMap::new();
    let mut keys = Vec::new();
    for (j, &h) in grid.iter().enumerate() {
        for a in submasks(masks[j]) {
            let id = builder.vertex(&format!("{h}|{}", bit_string(a, n)));
            if j > 0 {
                builder.edge(index[&(j - 1, a & masks[j - 1])], id);
            }
            index.insert((j, a), id);
            keys.push((j, a));
        }
    }
    builder.set_root(0);
    let (g, fin) = builder.finish();
    let mut level = vec![0; g.len()];
    let mut address = vec![0; g.len()];
    let mut heights = vec![Rational::zero(); g.len()];
    for (b, &(j, a)) in keys.iter().enumerate() {
        level[fin[b]] = j;
        address[fin[b]] = a;
        heights[fin[b]] = grid[j];
    }
    let index = index.into_iter().map(|(k, b)| (k, fin[b])).collect();
    Ok(MnTree { sequence: seq.clone(), tree: RootedTree::new(g)?, heights, grid, index, level, address })
}

/// The map from the tree of `full` onto the tree of its initial segment
/// `prefix`: later doublings are folded, and heights missing from the
/// smaller grid drop to the next grid height below.
pub fn mn_map(prefix: &MnTree, full: &MnTree) -> Result<Morphism> {
    if !prefix.sequence.is_prefix_of(&full.sequence) {
        return Err(Error::Precondition("first sequence is not an initial segment of the second".into()));
    }
    let keep: u64 = if prefix.sequence.len() == 64 { u64::MAX } else { (1u64 << prefix.sequence.len()) - 1 };
    let map = (0..full.tree.len())
        .map(|v| {
            let h = full.grid[full.level[v]];
            let j = prefix.grid.partition_point(|&x| x <= h) - 1;
            let a = full.address[v] & keep & prefix.sequence.free_mask(prefix.grid[j]);
            prefix.index[&(j, a)]
        })
        .collect();
    Morphism::new(full.graph().clone(), prefix.graph().clone(), map)
}

/// A witness that two sequences are order equivalent: the increasing
/// bijection between their values (including 0), or `None`.
pub fn order_equivalent(d: &MnSequence, e: &MnSequence) -> Result<Option<Vec<(Rational, Rational)>>> {
    if d.len() != e.len() {
        return Err(Error::Precondition("sequences have different lengths".into()));
    }
    let zero = Rational::zero();
    let (ds, es) = (d.entries(), e.entries());
    for i in 0..ds.len() {
        if ds[i].cmp(&zero) != es[i].cmp(&zero) {
            return Ok(None);
        }
        for j in 0..ds.len() {
            if ds[i].cmp(&ds[j]) != es[i].cmp(&es[j]) {
                return Ok(None);
            }
        }
    }
    let mut pairs: Vec<(Rational, Rational)> = ds.iter().copied().zip(es.iter().copied()).collect();
    pairs.push((zero, zero));
    pairs.sort();
    pairs.dedup();
    Ok(Some(pairs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> MnSequence {
        s.parse().unwrap()
    }

    #[test]
    fn small_trees() {
        let empty = mn_tree(&seq("")).unwrap();
        assert_eq!(empty.tree.len(), 2);
        assert_eq!(empty.heights, vec![Rational::zero(), Rational::one()]);
        let wedge = mn_tree(&seq("0")).unwrap();
        assert_eq!(wedge.tree.len(), 3);
        assert_eq!(wedge.tree.sord(wedge.tree.root()), 2);
        let t = mn_tree(&seq("2/3,2/3,1/3,1/3,0")).unwrap();
        assert_eq!(t.leaf_count(), 32);
    }

    #[test]
    fn maps() {
        let a = mn_tree(&seq("2/3")).unwrap();
        let b = mn_tree(&seq("2/3,1/3")).unwrap();
        let f = mn_map(&a, &b).unwrap();
        assert!(f.is_confluent());
        assert!(mn_map(&b, &b).unwrap().is_isomorphism());
        assert!(mn_map(&b, &a).is_err());
        let e = mn_tree(&seq("")).unwrap();
        let w = mn_tree(&seq("0")).unwrap();
        assert_eq!(mn_map(&e, &w).unwrap().codomain().len(), 2);
    }

    #[test]
    fn order_types() {
        assert!(order_equivalent(&seq("1/2"), &seq("1/3")).unwrap().is_some());
        assert!(order_equivalent(&seq("1/3,2/3"), &seq("2/3,1/3")).unwrap().is_none());
        assert!(order_equivalent(&seq("0,1/2"), &seq("1/4,1/2")).unwrap().is_none());
        assert!(order_equivalent(&seq("1/2"), &seq("1/2,0")).is_err());
    }
}
