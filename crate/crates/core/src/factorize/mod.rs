//! Monotone-light factorization, special vertices and decompositions of tree
//! epimorphisms into elementary factors.

mod decompose;
mod special;

pub use decompose::{
    decompose_light_confluent, decompose_simple_confluent, decompose_simple_star, simple_monotone_chain,
    is_simple_monotone, Decomposition, Factor, FactorKind, FailureWitness, Outcome,
};
pub use special::{
    is_special, is_special_star, special_failure, special_vertices, special_vertices_star, SpecialFailure,
    SpecialVertex,
};

use std::sync::Arc;

use crate::error::Result;
use crate::morphism::Morphism;
use crate::ops::quotient;

/// Splits `f` as `l ∘ m` with `m` monotone and `l` light. The middle space
/// collapses each component of each fiber; classes keep their least name.
pub fn monotone_light(f: &Morphism) -> Result<(Morphism, Morphism)> {
    let g = f.domain();
    let mut class_of = vec![0; g.len()];
    let mut count = 0;
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for fiber in f.fibers() {
        comps.extend(g.components_in(&fiber));
    }
    comps.sort_by_key(|c| c[0]);
    for c in &comps {
        for &v in c {
            class_of[v] = count;
        }
        count += 1;
    }
    let m = quotient(g, &class_of)?;
    let mid: &Arc<_> = m.codomain();
    let mut lmap = vec![0; mid.len()];
    for v in 0..g.len() {
        lmap[m.apply(v)] = f.apply(v);
    }
    let l = Morphism::new(mid.clone(), f.codomain().clone(), lmap)?;
    Ok((m, l))
}
