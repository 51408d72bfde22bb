use std::collections::HashMap;
use std::sync::Arc;

use crate::graph::FiniteGraph;
use crate::morphism::Morphism;
use crate::ops::{contract, named_quotient};
use crate::tree::RootedTree;

/// Decides membership in the classes generated by splitting-edge maps,
/// light confluent maps and (optionally) adding-edge maps by searching all
/// factorizations from the domain side. Results are memoized per codomain
/// on the labelled shape of the remaining map.
pub struct BruteOracle {
    star: bool,
    monotone_only: bool,
    memo: HashMap<(String, String), bool>,
}

impl BruteOracle {
    /// `star` adds adding-edge maps to the generators; `monotone_only`
    /// drops light confluent maps.
    pub fn new(star: bool, monotone_only: bool) -> Self {
        BruteOracle { star, monotone_only, memo: HashMap::new() }
    }

    fn key(g: &Morphism) -> (String, String) {
        let d = g.domain_tree().expect("rooted trees");
        let cod = g.codomain();
        let ckey = format!("{:?}|{:?}", cod.names(), cod.edges());
        (ckey, d.canonical_code_labeled(g.map()))
    }

    /// Every single generator `k` through which `g` factors, with the
    /// induced remainder.
    fn steps(&self, g: &Morphism) -> Vec<(Morphism, Morphism)> {
        let d = g.domain_tree().expect("rooted trees").clone();
        let mut out = Vec::new();
        let mut push = |k: Morphism| {
            let mut map = vec![0; k.codomain().len()];
            for v in 0..d.len() {
                map[k.apply(v)] = g.apply(v);
            }
            if let Ok(rest) = Morphism::new(k.codomain().clone(), g.codomain().clone(), map) {
                out.push((k, rest));
            }
        };
        for x in 0..d.len() {
            if x == d.root() {
                continue;
            }
            let p = d.parent(x).unwrap();
            if d.sord(x) == 1 {
                for y in [p, d.children(x)[0]] {
                    if g.apply(x) == g.apply(y) {
                        push(contract(g.domain(), x, y).unwrap());
                    }
                }
            } else if self.star && d.sord(x) == 0 && g.apply(x) == g.apply(p) {
                push(contract(g.domain(), x, p).unwrap());
            }
        }
        if !self.monotone_only {
            for k in light_confluent_quotients(g, &d) {
                push(k);
            }
        }
        out
    }

    pub fn decide(&mut self, g: &Morphism) -> bool {
        if g.is_isomorphism() {
            return true;
        }
        let key = Self::key(g);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let result = self.steps(g).into_iter().any(|(_, rest)| self.decide(&rest));
        self.memo.insert(key, result);
        result
    }

    /// Generator chain from the domain side followed by the final isomorphism.
    pub fn chain(&mut self, g: &Morphism) -> Option<Vec<Morphism>> {
        if g.is_isomorphism() {
            return Some(vec![g.clone()]);
        }
        for (k, rest) in self.steps(g) {
            if self.decide(&rest) {
                let mut tail = self.chain(&rest)?;
                tail.insert(0, k);
                return Some(tail);
            }
        }
        None
    }
}

impl RootedTree {
    pub(crate) fn canonical_code_labeled(&self, labels: &[usize]) -> String {
        self.labeled_cone_codes(labels).swap_remove(self.root())
    }
}

/// All non-trivial light confluent quotients of the domain whose classes lie
/// inside fibers of `g`.
fn light_confluent_quotients(g: &Morphism, d: &RootedTree) -> Vec<Morphism> {
    let dom: &Arc<FiniteGraph> = g.domain();
    let n = d.len();
    let order: Vec<usize> = (0..n).collect();
    let mut class_of = vec![usize::MAX; n];
    let mut class_fiber: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    fn rec(
        i: usize,
        order: &[usize],
        g: &Morphism,
        dom: &Arc<FiniteGraph>,
        class_of: &mut Vec<usize>,
        class_fiber: &mut Vec<usize>,
        out: &mut Vec<Morphism>,
    ) {
        if i == order.len() {
            if class_fiber.len() == order.len() {
                return;
            }
            let k = class_fiber.len();
            let edges: std::collections::HashSet<(usize, usize)> = dom
                .edges()
                .into_iter()
                .map(|(a, b)| (class_of[a].min(class_of[b]), class_of[a].max(class_of[b])))
                .collect();
            if edges.len() + 1 != k {
                return;
            }
            if let Ok(q) = named_quotient(dom, class_of, |_| None) {
                if q.codomain().is_tree() && q.is_confluent() && q.domain_tree().is_some() {
                    out.push(q);
                }
            }
            return;
        }
        let v = order[i];
        let fv = g.apply(v);
        for c in 0..class_fiber.len() {
            if class_fiber[c] != fv {
                continue;
            }
            if dom.neighbors(v).iter().any(|&w| class_of[w] == c) {
                continue;
            }
            class_of[v] = c;
            rec(i + 1, order, g, dom, class_of, class_fiber, out);
        }
        class_of[v] = class_fiber.len();
        class_fiber.push(fv);
        rec(i + 1, order, g, dom, class_of, class_fiber, out);
        class_fiber.pop();
        class_of[v] = usize::MAX;
    }
    rec(0, &order, g, dom, &mut class_of, &mut class_fiber, &mut out);
    out
}

/// Whether `f` is a composition of splitting-edge and light confluent maps
/// (plus adding-edge maps with `star`), with a witnessing chain.
pub fn brute_simple_confluent(f: &Morphism, star: bool) -> Option<Vec<Morphism>> {
    f.rooted().ok()?;
    BruteOracle::new(star, false).chain(f)
}

/// Whether `f` is a composition of splitting-edge maps (plus adding-edge
/// maps with `star`).
pub fn brute_simple_monotone(f: &Morphism, star: bool) -> Option<Vec<Morphism>> {
    f.rooted().ok()?;
    BruteOracle::new(star, true).chain(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(vs: &[&str], es: &[(&str, &str)]) -> Arc<FiniteGraph> {
        Arc::new(FiniteGraph::new(vs.iter().copied(), es.iter().copied(), Some("r")).unwrap())
    }

    #[test]
    fn collapsed_root_edge_is_not_generated() {
        let s = tree(&["r", "u", "a", "b"], &[("r", "u"), ("u", "a"), ("u", "b")]);
        let t = tree(&["r", "x", "y"], &[("r", "x"), ("r", "y")]);
        let f = Morphism::from_named(s, t, [("r", "r"), ("u", "r"), ("a", "x"), ("b", "y")]).unwrap();
        assert!(brute_simple_confluent(&f, false).is_none());
    }

    #[test]
    fn fold_is_generated() {
        let s = tree(&["r", "a", "b"], &[("r", "a"), ("r", "b")]);
        let t = tree(&["r", "x"], &[("r", "x")]);
        let f = Morphism::from_named(s, t, [("r", "r"), ("a", "x"), ("b", "x")]).unwrap();
        let chain = brute_simple_confluent(&f, false).unwrap();
        assert_eq!(chain.len(), 2);
        assert!(brute_simple_monotone(&f, false).is_none());
    }
}
