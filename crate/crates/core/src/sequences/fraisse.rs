//! The sequence `A_1 <- A_2 <- ...` of regular rooted trees, the check that
//! a map between stages has the shape of the bonding maps, and the
//! extension of simple-confluent maps onto a stage.

use std::sync::Arc;

use serde::Serialize;

use super::operations::{colored_add_branches, double_split, replicate};
use crate::error::{Error, Result};
use crate::factorize::{special_failure, special_vertices};
use crate::graph::FiniteGraph;
use crate::morphism::{compose, compose_chain, Morphism};
use crate::ops::Builder;
use crate::tree::{find_isomorphism, RootedTree};

/// Default bound on the number of vertices of a materialized stage.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// The cap from `FRAISSE_CAP` when set and valid, else [`DEFAULT_CAP`].
pub fn cap_from_env() -> u64 {
    std::env::var("FRAISSE_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

/// Height `3^(m-1)` of `A_m`.
pub fn stage_height(m: usize) -> usize {
    3usize.pow(m as u32 - 1)
}

/// Successor order `2^m` of `A_m`.
pub fn stage_sord(m: usize) -> usize {
    1 << m
}

/// Number of vertices of `A_m`, saturating at `u128::MAX`.
pub fn projected_size(m: usize) -> u128 {
    if m == 0 {
        return 1;
    }
    let (h, b) = (3u128.saturating_pow(m as u32 - 1), 1u128 << m.min(127));
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for _ in 0..=h {
        total = total.saturating_add(term);
        if total == u128::MAX {
            break;
        }
        term = term.saturating_mul(b);
    }
    total
}

fn check_cap(m: usize, cap: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::Precondition("stages are numbered from 1".into()));
    }
    let needed = projected_size(m);
    if needed > cap as u128 {
        return Err(Error::CapExceeded { needed, cap });
    }
    Ok(())
}

/// `A_1`: a root `r` with two leaves `x`, `y`.
pub fn first_stage() -> RootedTree {
    RootedTree::from_graph(FiniteGraph::new(["r", "x", "y"], [("r", "x"), ("r", "y")], Some("r")).unwrap()).unwrap()
}

/// The two factors of the bonding map `f_m = d ∘ u`: the multiplying
/// branches map `u: A_{m+1} -> d(A_m)` with parameter `2^(m+1)` and the
/// double split `d: d(A_m) -> A_m`.
pub fn bonding_factors(m: usize, cap: u64) -> Result<(Morphism, Morphism)> {
    check_cap(m + 1, cap)?;
    let mut a = first_stage();
    let mut i = 1;
    loop {
        let d = double_split(&a)?;
        let u = super::operations::multiply_branches(d.domain_tree().unwrap(), stage_sord(i + 1))?;
        if i == m {
            return Ok((u, d));
        }
        a = u.domain_tree().unwrap().clone();
        i += 1;
    }
}

/// The stage `A_m`.
pub fn stage(m: usize, cap: u64) -> Result<RootedTree> {
    check_cap(m, cap)?;
    if m == 1 {
        return Ok(first_stage());
    }
    let (u, _) = bonding_factors(m - 1, cap)?;
    Ok(u.domain_tree().unwrap().clone())
}

/// The bonding map `f_m: A_{m+1} -> A_m`.
pub fn bonding_map(m: usize, cap: u64) -> Result<Morphism> {
    let (u, d) = bonding_factors(m, cap)?;
    compose(&d, &u)
}

/// `f^n_m = f_m ∘ ... ∘ f_{n-1}: A_n -> A_m`, the identity when `m = n`.
pub fn bonding_composite(m: usize, n: usize, cap: u64) -> Result<Morphism> {
    if m > n {
        return Err(Error::Precondition("the first stage index must not exceed the second".into()));
    }
    if m == n {
        return Ok(Morphism::identity(stage(m, cap)?.graph_arc().clone()));
    }
    let chain = (m..n).map(|i| bonding_map(i, cap)).collect::<Result<Vec<_>>>()?;
    compose_chain(&chain)
}

/// Height thresholds `0 = t_0 <= s_0 < t_1 <= ... < t_k = s_k = l` of the
/// bonding composite `A_n -> A_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InternCharProfile {
    pub k: usize,
    pub l: usize,
    pub t: Vec<usize>,
    pub s: Vec<usize>,
}

impl InternCharProfile {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::Precondition("need 1 <= m <= n".into()));
        }
        let k = stage_height(m);
        let p = 3usize.pow((n - m) as u32);
        let (up, stay) = (p.div_ceil(2), (p - 1) / 2);
        let mut t = vec![0];
        let mut s = vec![stay];
        for _ in 1..k {
            let ti = s.last().unwrap() + up;
            t.push(ti);
            s.push(ti + stay);
        }
        let l = s.last().unwrap() + up;
        t.push(l);
        s.push(l);
        Ok(InternCharProfile { k, l, t, s })
    }

    /// Height band of domain vertices over codomain height `i`.
    pub fn band(&self, i: usize) -> (usize, usize) {
        if i == 0 { (0, self.s[0]) } else { (self.s[i - 1] + 1, self.s[i]) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InternCharReport {
    pub holds: bool,
    pub profile: InternCharProfile,
    pub failures: Vec<String>,
}

fn stage_shape(t: &RootedTree, m: usize) -> bool {
    t.is_regular() && t.tree_height() == stage_height(m) && t.sord(t.root()) == stage_sord(m)
}

/// Checks that `h: A_n -> A_m` has the shape of `f^n_m`: vertices over height
/// `i` lie in the `i`-th height band; special vertices sit exactly at the
/// heights `t_i`; and each special vertex has `2^(n-m)` successors over each
/// successor of its image.
pub fn verify_internchar(h: &Morphism, m: usize, n: usize) -> Result<InternCharReport> {
    let profile = InternCharProfile::new(m, n)?;
    let (d, c) = h.rooted()?;
    if !stage_shape(d, n) || !stage_shape(c, m) {
        return Err(Error::Precondition(format!("map is not between stages A_{n} and A_{m}")));
    }
    let mut failures = Vec::new();
    let mut fail = |msg: String| {
        if failures.len() < 8 {
            failures.push(msg);
        }
    };
    for b in 0..d.len() {
        let i = c.height(h.apply(b));
        let (lo, hi) = profile.band(i);
        if !(lo..=hi).contains(&d.height(b)) {
            fail(format!("height band: `{}` at height {} lies over height {i}", d.name(b), d.height(b)));
        }
    }
    if !h.is_confluent() {
        fail("map is not confluent".into());
        return Ok(InternCharReport { holds: false, profile, failures });
    }
    let ratio = stage_sord(n) / stage_sord(m);
    let mut special = vec![false; d.len()];
    for a in (0..c.len()).filter(|&a| c.is_ramification(a)) {
        for sv in special_vertices(h, a)? {
            special[sv.vertex] = true;
            for &x in c.children(a) {
                let count = sv.assignment.iter().filter(|(_, y)| *y == Some(x)).count();
                if count != ratio {
                    fail(format!(
                        "successor count: `{}` has {count} successors over `{}`, expected {ratio}",
                        d.name(sv.vertex),
                        c.name(x)
                    ));
                }
            }
        }
    }
    for b in 0..d.len() {
        let i = c.height(h.apply(b));
        let at_threshold = profile.t[..profile.k].contains(&d.height(b));
        let expected = i < profile.k && d.height(b) == profile.t[i];
        if at_threshold && !special[b] || special[b] && !expected {
            fail(format!("special height: `{}` at height {} (special: {})", d.name(b), d.height(b), special[b]));
        }
    }
    Ok(InternCharReport { holds: failures.is_empty(), profile, failures })
}

/// A map `g: A_n -> S` with `φ ∘ g = f^n_m`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub n: usize,
    pub g: Morphism,
}

/// Doubles the single successor cone of every vertex with one successor.
fn normalize(t: &RootedTree) -> Result<Morphism> {
    replicate(t, &|v| {
        let kids = t.children(v);
        if kids.len() == 1 { vec![kids[0], kids[0]] } else { kids.to_vec() }
    })
}

/// Per-edge insertion counts for the branch regularization, and the
/// smallest admissible `n`.
struct Plan {
    /// For each vertex `v` with parent `p`: new vertices over `p` then over
    /// `v` to insert into the edge `p - v`.
    low_gap: Vec<usize>,
    high_gap: Vec<usize>,
    max_low: usize,
    max_high: usize,
    gamma: usize,
}

fn plan(phi: &Morphism) -> Result<Plan> {
    let (s, a) = phi.rooted()?;
    let mut special = vec![false; s.len()];
    let mut gamma = 1;
    for p in (0..a.len()).filter(|&p| a.is_ramification(p)) {
        for sv in special_vertices(phi, p)? {
            special[sv.vertex] = true;
            let widest = a
                .children(p)
                .iter()
                .map(|&x| sv.assignment.iter().filter(|(_, y)| *y == Some(x)).count())
                .max()
                .unwrap_or(0);
            gamma = gamma.max(a.sord(p) * widest);
        }
    }
    for v in 0..s.len() {
        if !special[v] {
            gamma = gamma.max(s.sord(v));
        }
    }
    if !special[s.root()] {
        return Err(Error::Precondition("root is not special".into()));
    }
    let n = s.len();
    let mut t_of: Vec<Option<usize>> = vec![None; n];
    let mut entry: Vec<Option<usize>> = vec![None; n];
    let mut low_gap = vec![0; n];
    let mut high_gap = vec![0; n];
    for &v in s.preorder() {
        let same = s.parent(v).filter(|&p| phi.apply(p) == phi.apply(v));
        entry[v] = match (s.parent(v), same) {
            (None, _) => None,
            (Some(p), None) => Some(s.height(p)),
            (Some(p), Some(_)) => entry[p],
        };
        t_of[v] = if special[v] { Some(s.height(v)) } else { same.and_then(|p| t_of[p]) };
        if let (Some(p), None) = (s.parent(v), same) {
            let t = t_of[p].ok_or_else(|| Error::Precondition(format!("no special vertex below `{}`", s.name(p))))?;
            low_gap[v] = s.height(p) - t;
        }
        if s.parent(v).is_some() && (special[v] || s.is_end(v)) {
            high_gap[v] = s.height(v) - entry[v].unwrap();
        }
    }
    Ok(Plan {
        max_low: low_gap.iter().copied().max().unwrap_or(0),
        max_high: high_gap.iter().copied().max().unwrap_or(0),
        low_gap,
        high_gap,
        gamma,
    })
}

/// Inserts new vertices so that every branch has the thresholds of `f^n_m`.
fn regularize_branches(phi: &Morphism, plan: &Plan, profile: &InternCharProfile) -> Result<Morphism> {
    let (s, _) = phi.rooted()?;
    let stay = profile.s[0] - profile.t[0];
    let up = profile.t[1] - profile.s[0];
    let mut builder = Builder::new();
    let ids: Vec<usize> = (0..s.len()).map(|v| builder.vertex(s.name(v))).collect();
    let mut image: Vec<usize> = (0..s.len()).collect();
    for v in 0..s.len() {
        let Some(p) = s.parent(v) else { continue };
        let crossing = phi.apply(p) != phi.apply(v);
        let low = if crossing { stay - plan.low_gap[v] } else { 0 };
        let high = if plan.high_gap[v] > 0 { up - plan.high_gap[v] } else { 0 };
        let mut prev = ids[p];
        for (k, owner) in std::iter::repeat_n(p, low).chain(std::iter::repeat_n(v, high)).enumerate() {
            let id = builder.vertex(&format!("{}~{}.{k}", s.name(p), s.name(v)));
            image.push(owner);
            builder.edge(prev, id);
            prev = id;
        }
        builder.edge(prev, ids[v]);
    }
    builder.set_root(ids[s.root()]);
    let (r, fin) = builder.finish();
    let mut map = vec![0; r.len()];
    for (b, &img) in image.iter().enumerate() {
        map[fin[b]] = img;
    }
    Morphism::new(r, s.graph_arc().clone(), map)
}

/// Colors successors of special vertices by the successor of the image
/// they cover; all other successors get color 0.
fn special_coloring(h: &Morphism) -> Result<Vec<usize>> {
    let (d, c) = h.rooted()?;
    let mut colors = vec![0; d.len()];
    for a in (0..c.len()).filter(|&a| c.is_ramification(a)) {
        let kids = c.children(a);
        for sv in special_vertices(h, a)? {
            for (k, x) in sv.assignment {
                if let Some(x) = x {
                    colors[k] = kids.iter().position(|&y| y == x).unwrap();
                }
            }
        }
    }
    Ok(colors)
}

/// Identifies the codomain of `phi` with a stage: returns `m` and an
/// isomorphism from `A_m` onto the codomain.
fn match_stage(phi: &Morphism, cap: u64) -> Result<(usize, Morphism)> {
    let (_, c) = phi.rooted()?;
    let m = (1..64)
        .find(|&m| stage_height(m) >= c.tree_height())
        .filter(|&m| stage_shape(c, m))
        .ok_or_else(|| Error::Precondition("codomain is not a stage of the sequence".into()))?;
    let a = stage(m, cap)?;
    let iso = find_isomorphism(&a, None, c, None).ok_or_else(|| Error::Precondition("codomain is not a stage".into()))?;
    Ok((m, Morphism::new(a.graph_arc().clone(), c.graph_arc().clone(), iso)?))
}

/// For a simple-confluent `φ: S -> A_m`, finds the least `n` and a
/// simple-confluent `g: A_n -> S` with `φ ∘ g = τ ∘ f^n_m`, where `τ` is the
/// isomorphism from the materialized `A_m` onto the codomain of `φ`.
pub fn extend_over(phi: &Morphism, cap: u64) -> Result<Extension> {
    if let Some(reason) = special_failure(phi, false)? {
        return Err(Error::Precondition(format!("map is not simple-confluent: {reason:?}")));
    }
    let (m, tau) = match_stage(phi, cap)?;
    let u = normalize(phi.domain_tree().unwrap())?;
    let phi1 = compose(phi, &u)?;
    let plan = plan(&phi1)?;
    let mut n = m;
    let profile = loop {
        let p = 3usize.pow((n - m) as u32);
        if plan.max_low <= (p - 1) / 2 && plan.max_high <= p.div_ceil(2) && plan.gamma <= stage_sord(n) {
            break InternCharProfile::new(m, n)?;
        }
        n += 1;
        check_cap(n, cap)?;
    };
    let g1 = regularize_branches(&phi1, &plan, &profile)?;
    let h1 = compose(&phi1, &g1)?;
    let colors = special_coloring(&h1)?;
    let g2 = colored_add_branches(g1.domain_tree().unwrap(), &colors, stage_sord(n))?;
    let h = compose(&h1, &g2)?;
    let f = bonding_composite(m, n, cap)?;
    let expected = compose(&tau, &f)?;
    let an = f.domain_tree().unwrap();
    let sigma = find_isomorphism(an, Some(expected.map()), h.domain_tree().unwrap(), Some(h.map()))
        .ok_or_else(|| Error::Precondition("constructed tree does not match the stage".into()))?;
    let sigma = Morphism::new(an.graph_arc().clone(), h.domain().clone(), sigma)?;
    let g = compose_chain(&[u, g1, g2, sigma])?;
    let check = compose(phi, &g)?;
    if check.map() != expected.map() {
        return Err(Error::InvalidMorphism("extension does not commute".into()));
    }
    Ok(Extension { n, g })
}

/// Shared helper for callers holding a stage graph.
pub fn stage_graph(m: usize, cap: u64) -> Result<Arc<FiniteGraph>> {
    Ok(stage(m, cap)?.graph_arc().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(projected_size(1), 3);
        assert_eq!(projected_size(2), 85);
        assert!(projected_size(3) > 100_000_000);
        let a2 = stage(2, DEFAULT_CAP).unwrap();
        assert_eq!(a2.len(), 85);
        assert!(a2.is_regular());
        assert_eq!((a2.tree_height(), a2.sord(a2.root())), (3, 4));
        assert!(matches!(stage(3, DEFAULT_CAP), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn thresholds() {
        let p = InternCharProfile::new(1, 2).unwrap();
        assert_eq!((p.t[0], p.s[0], p.t[1]), (0, 1, 3));
        let p = InternCharProfile::new(2, 2).unwrap();
        assert_eq!(p.t, vec![0, 1, 2, 3]);
        assert_eq!(p.s, vec![0, 1, 2, 3]);
    }

    #[test]
    fn bonding_map_has_stage_shape() {
        let f = bonding_map(1, DEFAULT_CAP).unwrap();
        let report = verify_internchar(&f, 1, 2).unwrap();
        assert!(report.holds, "{:?}", report.failures);
    }

    #[test]
    fn identity_extends_by_identity() {
        let a1 = first_stage();
        let id = Morphism::identity(a1.graph_arc().clone());
        let ext = extend_over(&id, DEFAULT_CAP).unwrap();
        assert_eq!(ext.n, 1);
        assert!(ext.g.is_isomorphism());
    }
}
