//! Planar layout of trees with rational heights.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::dot::escape;
use crate::error::{Error, Result};
use crate::tree::RootedTree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayoutPoint {
    pub name: String,
    pub x: String,
    pub y: String,
}

/// Exact coordinates: leaves are spaced one unit apart in the order of a
/// depth-first walk with successors sorted by canonical code; an inner
/// vertex sits midway between its outermost successors. The height is `y`.
#[derive(Clone, Debug)]
pub struct Layout {
    pub names: Vec<String>,
    pub x: Vec<Ratio<i64>>,
    pub y: Vec<Ratio<i64>>,
    pub edges: Vec<(usize, usize)>,
}

pub fn geometric_layout(t: &RootedTree, heights: &[Ratio<i64>]) -> Result<Layout> {
    if heights.len() != t.len() {
        return Err(Error::Precondition("one height per vertex is required".into()));
    }
    let codes = t.cone_codes();
    let mut x = vec![Ratio::zero(); t.len()];
    let mut next = 0i64;
    // Post-order walk with sorted successors.
    let mut stack = vec![(t.root(), false)];
    while let Some((v, done)) = stack.pop() {
        let kids = t.sorted_children(v, &codes);
        if done || kids.is_empty() {
            if kids.is_empty() {
                x[v] = Ratio::from_integer(next);
                next += 1;
            } else {
                let lo = kids.iter().map(|&k| x[k]).min().unwrap();
                let hi = kids.iter().map(|&k| x[k]).max().unwrap();
                x[v] = (lo + hi) / 2;
            }
            continue;
        }
        stack.push((v, true));
        for &k in kids.iter().rev() {
            stack.push((k, false));
        }
    }
    let names = (0..t.len()).map(|v| t.name(v).to_string()).collect();
    let edges = t.graph().edges();
    Ok(Layout { names, x, y: heights.to_vec(), edges })
}

/// Decimal rendering with `digits` places, computed exactly.
fn decimal(r: Ratio<i64>, digits: u32) -> String {
    let scale = 10i64.pow(digits);
    let scaled = (r * scale).round().to_integer();
    let sign = if scaled < 0 { "-" } else { "" };
    let a = scaled.abs();
    format!("{sign}{}.{:0width$}", a / scale, a % scale, width = digits as usize)
}

impl Layout {
    pub fn points(&self) -> Vec<LayoutPoint> {
        (0..self.names.len())
            .map(|v| LayoutPoint { name: self.names[v].clone(), x: self.x[v].to_string(), y: self.y[v].to_string() })
            .collect()
    }

    pub fn leaf_count(&self) -> usize {
        let mut deg = vec![0; self.names.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        // The root of a one-vertex tree has degree 0 and counts as no leaf.
        let root_is_leaf = self.y.iter().position(|y| y.is_zero()).map(|r| deg[r] == 1).unwrap_or(false);
        deg.iter().filter(|&&d| d == 1).count() - usize::from(root_is_leaf)
    }

    /// DOT text with fixed positions; `x` and `y` also carry exact values.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph layout {\n  node [shape=point];\n");
        for v in 0..self.names.len() {
            let (x, y) = (self.x[v], self.y[v]);
            let neg = if y.is_negative() { "-" } else { "" };
            out.push_str(&format!(
                "  \"{}\" [pos=\"{},{}{}!\", x=\"{}\", y=\"{}\"];\n",
                escape(&self.names[v]),
                decimal(x, 4),
                neg,
                decimal(y.abs() * 4, 4),
                x,
                y
            ));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  \"{}\" -- \"{}\";\n", escape(&self.names[a]), escape(&self.names[b])));
        }
        out.push_str("}\n");
        out
    }
}
