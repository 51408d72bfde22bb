use crate::error::{Error, Result};
use crate::morphism::{compose_chain, Morphism};
use crate::tree::RootedTree;

use super::ClassSpec;

/// A map `psi: stage_n -> A` with `phi . psi` equal to the bonding composite.
#[derive(Clone, Debug)]
pub struct ExtensionWitness {
    pub n: usize,
    pub psi: Morphism,
}

/// Searches the stages `m..=horizon` of a sequence for a factorization of the
/// bonding composite through `phi: A -> stage_m`. `bonding[i]` maps stage
/// `i + 1` onto stage `i`. `Ok(None)` means the horizon was exhausted.
pub fn check_extension(
    bonding: &[Morphism],
    phi: &Morphism,
    m: usize,
    horizon: usize,
    spec: ClassSpec,
) -> Result<Option<ExtensionWitness>> {
    if horizon > bonding.len() || m > horizon {
        return Err(Error::Precondition(format!(
            "need m <= horizon <= {} (got m = {m}, horizon = {horizon})",
            bonding.len()
        )));
    }
    let stage_m = if m == 0 { bonding[0].codomain() } else { bonding[m - 1].domain() };
    if phi.codomain() != stage_m {
        return Err(Error::Precondition("phi does not map onto stage m".into()));
    }
    let (a, _) = phi.rooted()?;
    for n in m..=horizon {
        let alpha = if n == m {
            Morphism::identity(stage_m.clone())
        } else {
            let chain: Vec<Morphism> = bonding[m..n].to_vec();
            compose_chain(&chain)?
        };
        if let Some(psi) = factor_through(&alpha, phi, a, spec)? {
            return Ok(Some(ExtensionWitness { n, psi }));
        }
    }
    Ok(None)
}

/// Backtracking over vertex images in preorder: each vertex goes into the
/// `phi`-fiber over its `alpha`-image, at or just above its parent's image.
fn factor_through(alpha: &Morphism, phi: &Morphism, a: &RootedTree, spec: ClassSpec) -> Result<Option<Morphism>> {
    let s = alpha.domain_tree().ok_or_else(|| Error::Precondition("stages must be rooted trees".into()))?;
    let fibers = phi.fibers();
    let order = s.preorder().to_vec();
    let mut psi = vec![usize::MAX; s.len()];
    let mut hits = vec![0usize; a.len()];
    let mut found = None;
    let mut state = Search { s, a, alpha, fibers: &fibers, order: &order, spec, psi: &mut psi, hits: &mut hits };
    state.go(0, a.len(), &mut found)?;
    Ok(found)
}

struct Search<'a> {
    s: &'a RootedTree,
    a: &'a RootedTree,
    alpha: &'a Morphism,
    fibers: &'a [Vec<usize>],
    order: &'a [usize],
    spec: ClassSpec,
    psi: &'a mut Vec<usize>,
    hits: &'a mut Vec<usize>,
}

impl Search<'_> {
    fn go(&mut self, i: usize, uncovered: usize, found: &mut Option<Morphism>) -> Result<()> {
        if found.is_some() || uncovered > self.order.len() - i {
            return Ok(());
        }
        if i == self.order.len() {
            if let Ok(psi) =
                Morphism::new(self.s.graph_arc().clone(), self.a.graph_arc().clone(), self.psi.clone())
            {
                if self.spec.admits(&psi) {
                    *found = Some(psi);
                }
            }
            return Ok(());
        }
        let v = self.order[i];
        for &c in &self.fibers[self.alpha.apply(v)] {
            let fits = match self.s.parent(v) {
                None => c == self.a.root(),
                Some(p) => c == self.psi[p] || self.a.parent(c) == Some(self.psi[p]),
            };
            if !fits {
                continue;
            }
            self.psi[v] = c;
            self.hits[c] += 1;
            let now = uncovered - usize::from(self.hits[c] == 1);
            self.go(i + 1, now, found)?;
            self.hits[c] -= 1;
            self.psi[v] = usize::MAX;
            if found.is_some() {
                break;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FiniteGraph;
    use crate::sequences::multiply_branches;

    fn cherry() -> RootedTree {
        RootedTree::from_graph(FiniteGraph::new(["r", "x", "y"], [("r", "x"), ("r", "y")], Some("r")).unwrap()).unwrap()
    }

    /// Stages obtained by doubling every successor cone.
    fn doublings(count: usize) -> Vec<Morphism> {
        let mut t = cherry();
        let mut out = Vec::new();
        for _ in 0..count {
            let f = multiply_branches(&t, 2 * t.max_sord()).unwrap();
            t = f.domain_tree().unwrap().clone();
            out.push(f);
        }
        out
    }

    #[test]
    fn identity_extends_at_once() {
        let seq = doublings(2);
        let phi = Morphism::identity(seq[0].domain().clone());
        let w = check_extension(&seq, &phi, 1, 2, ClassSpec::ANY).unwrap().unwrap();
        assert_eq!(w.n, 1);
        assert!(w.psi.is_isomorphism());
    }

    #[test]
    fn one_doubling_is_met_one_stage_later() {
        let seq = doublings(2);
        let w = check_extension(&seq, &seq[0], 0, 2, ClassSpec::CONFLUENT).unwrap().unwrap();
        assert_eq!(w.n, 1);
    }

    #[test]
    fn taller_tree_exhausts_the_horizon() {
        let seq = doublings(2);
        let a = FiniteGraph::new(["r", "x", "z", "y"], [("r", "x"), ("x", "z"), ("r", "y")], Some("r")).unwrap();
        let phi = Morphism::from_named(a.into(), seq[0].codomain().clone(), [("r", "r"), ("x", "x"), ("z", "x"), ("y", "y")])
            .unwrap();
        assert!(check_extension(&seq, &phi, 0, 2, ClassSpec::ANY).unwrap().is_none());
    }
}
