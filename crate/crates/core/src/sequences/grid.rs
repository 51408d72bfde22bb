//! The grid of trees `A_{nk}` (`n <= k`): each row starts at the stage
//! `A_n` and continues by double splits; the maps down the columns are
//! light confluent, obtained from the standard amalgamation.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Ratio;

use super::fraisse::{bonding_factors, stage};
use super::operations::double_split;
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::morphism::{compose, Morphism};
use crate::ops::Builder;
use crate::tree::RootedTree;

/// Lazily computed grid with memoized trees and maps.
pub struct Grid {
    cap: u64,
    trees: HashMap<(usize, usize), RootedTree>,
    horizontal: HashMap<(usize, usize), Morphism>,
    vertical: HashMap<(usize, usize), Morphism>,
}

impl Grid {
    pub fn new(cap: u64) -> Self {
        Grid { cap, trees: HashMap::new(), horizontal: HashMap::new(), vertical: HashMap::new() }
    }

    fn check(n: usize, k: usize) -> Result<()> {
        if n == 0 || n > k {
            return Err(Error::Precondition(format!("grid position ({n}, {k}) needs 1 <= n <= k")));
        }
        Ok(())
    }

    /// `A_{nk}`.
    pub fn tree(&mut self, n: usize, k: usize) -> Result<RootedTree> {
        Self::check(n, k)?;
        if let Some(t) = self.trees.get(&(n, k)) {
            return Ok(t.clone());
        }
        let t = if n == k { stage(n, self.cap)? } else { self.horizontal(n, k - 1)?.domain_tree().unwrap().clone() };
        self.trees.insert((n, k), t.clone());
        Ok(t)
    }

    /// The double split `A_{n(k+1)} -> A_{nk}`.
    pub fn horizontal(&mut self, n: usize, k: usize) -> Result<Morphism> {
        Self::check(n, k)?;
        if let Some(m) = self.horizontal.get(&(n, k)) {
            return Ok(m.clone());
        }
        let m = double_split(&self.tree(n, k)?)?;
        self.horizontal.insert((n, k), m.clone());
        Ok(m)
    }

    /// The light confluent map `A_{(n+1)k} -> A_{nk}`, for `n < k`.
    pub fn vertical(&mut self, n: usize, k: usize) -> Result<Morphism> {
        Self::check(n + 1, k)?;
        if let Some(m) = self.vertical.get(&(n, k)) {
            return Ok(m.clone());
        }
        let m = if k == n + 1 {
            bonding_factors(n, self.cap)?.0
        } else {
            let down = self.vertical(n, k - 1)?;
            let across = self.horizontal(n, k - 1)?;
            let split = self.horizontal(n + 1, k - 1)?;
            lift_over_double_split(&down, &split, &across)?
        };
        self.vertical.insert((n, k), m.clone());
        Ok(m)
    }

    /// Whether the square with corner `A_{nk}` commutes: going right then
    /// down equals going down then right.
    pub fn square_commutes(&mut self, n: usize, k: usize) -> Result<bool> {
        let a = compose(&self.vertical(n, k)?, &self.horizontal(n + 1, k)?)?;
        let b = compose(&self.horizontal(n, k)?, &self.vertical(n, k + 1)?)?;
        Ok(a.domain() == b.domain() && a.map() == b.map())
    }
}

/// Given `f: B -> A` and the double splits `d_B`, `d_A`, builds the map
/// `g: d(B) -> d(A)` with `d_A . g = f . d_B`: every copy of an edge of `B`
/// goes to the copy of its image edge.
pub fn lift_over_double_split(f: &Morphism, d_b: &Morphism, d_a: &Morphism) -> Result<Morphism> {
    let db = d_b.domain_tree().ok_or_else(|| Error::Precondition("double split domain is not rooted".into()))?;
    let da = d_a.domain_tree().ok_or_else(|| Error::Precondition("double split domain is not rooted".into()))?;
    let mut target = vec![usize::MAX; db.len()];
    // Originals sit at heights divisible by three in a double split.
    let mut original = HashMap::new();
    for u in 0..da.len() {
        if da.height(u) % 3 == 0 {
            original.insert(d_a.apply(u), u);
        }
    }
    for &w in db.preorder() {
        let x = d_b.apply(w);
        target[w] = match db.height(w) % 3 {
            0 => original[&f.apply(x)],
            1 => {
                let up = target[db.parent(w).unwrap()];
                let child = db.children(w)[0];
                let y = f.apply(d_b.apply(db.children(child)[0]));
                *da.children(up)
                    .iter()
                    .find(|&&u| da.children(da.children(u)[0]).iter().any(|&c| d_a.apply(c) == y))
                    .ok_or_else(|| Error::InvalidMorphism("image edge is missing".into()))?
            }
            _ => da.children(target[db.parent(w).unwrap()])[0],
        };
    }
    let g = Morphism::new(db.graph_arc().clone(), da.graph_arc().clone(), target)?;
    let a = compose(d_a, &g)?;
    let b = compose(f, d_b)?;
    if a.map() != b.map() {
        return Err(Error::InvalidMorphism("lifted square does not commute".into()));
    }
    Ok(g)
}

/// Suppresses vertices with exactly one successor (other than the root) and
/// labels the remaining vertices with their relative height `ht / ht(T)`.
pub fn skeleton(t: &RootedTree) -> Result<(RootedTree, Vec<Ratio<i64>>)> {
    let keep: Vec<bool> = (0..t.len()).map(|v| v == t.root() || t.sord(v) != 1).collect();
    let total = t.tree_height().max(1) as i64;
    let mut builder = Builder::new();
    let mut id = vec![usize::MAX; t.len()];
    let mut heights = Vec::new();
    for &v in t.preorder() {
        if !keep[v] {
            continue;
        }
        id[v] = builder.vertex(t.name(v));
        heights.push(Ratio::new(t.height(v) as i64, total));
        let mut p = t.parent(v);
        while let Some(q) = p {
            if keep[q] {
                builder.edge(id[q], id[v]);
                break;
            }
            p = t.parent(q);
        }
    }
    builder.set_root(id[t.root()]);
    let (g, fin): (Arc<FiniteGraph>, Vec<usize>) = builder.finish();
    let mut h = vec![Ratio::new(0, 1); g.len()];
    for (b, r) in heights.into_iter().enumerate() {
        h[fin[b]] = r;
    }
    Ok((RootedTree::new(g)?, h))
}
