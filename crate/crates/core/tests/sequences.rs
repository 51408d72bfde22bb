mod common;

use common::rooted_tree;
use fraisse_core::ops::split_edge;
use fraisse_core::oracle::{check_extension, ClassSpec};
use fraisse_core::sequences::{
    bonding_map, double_split, extend_over, first_stage, geometric_layout, mn_map, mn_tree, multiply_branches,
    order_equivalent, projected_size, stage, verify_internchar, MnSequence, DEFAULT_CAP,
};
use fraisse_core::tree::is_isomorphic;
use fraisse_core::{compose, Error, Morphism};
use num_rational::Ratio;
use proptest::prelude::*;

fn seq(s: &str) -> MnSequence {
    s.parse().unwrap()
}

#[test]
fn first_stages() {
    let a1 = stage(1, DEFAULT_CAP).unwrap();
    assert_eq!(a1.len(), 3);
    let a2 = stage(2, DEFAULT_CAP).unwrap();
    assert_eq!(a2.len(), 85);
    assert_eq!(projected_size(2), 85);
    assert!(a2.is_regular());
    assert_eq!((a2.tree_height(), a2.sord(a2.root())), (3, 4));
    assert!(projected_size(3) > DEFAULT_CAP as u128);
    assert!(matches!(stage(3, DEFAULT_CAP), Err(Error::CapExceeded { .. })));
}

#[test]
fn first_bonding_map() {
    let f = bonding_map(1, DEFAULT_CAP).unwrap();
    assert!(f.is_confluent() && f.is_end_vertex_preserving());
    assert!(!f.is_light() && !f.is_monotone());
    let report = verify_internchar(&f, 1, 2).unwrap();
    assert!(report.holds, "{:?}", report.failures);
    assert_eq!(report.profile.t, vec![0, 3]);
    assert_eq!(report.profile.s[0], 1);
    let a2 = f.domain().clone();
    assert!(verify_internchar(&Morphism::identity(a2), 1, 2).is_err());
}

#[test]
fn extensions_over_the_first_stage() {
    let a1 = first_stage();
    let id = Morphism::identity(a1.graph_arc().clone());
    let ext = extend_over(&id, DEFAULT_CAP).unwrap();
    assert_eq!(ext.n, 1);
    assert!(is_isomorphic(ext.g.domain_tree().unwrap(), &a1));

    let split = split_edge(a1.graph_arc(), "r", "x", "x", None).unwrap();
    let ext = extend_over(&split, DEFAULT_CAP).unwrap();
    assert_eq!(ext.n, 2);
    let h = compose(&split, &ext.g).unwrap();
    assert!(verify_internchar(&h, 1, 2).unwrap().holds);

    let bonding = [bonding_map(1, DEFAULT_CAP).unwrap()];
    let w = check_extension(&bonding, &id, 0, 1, ClassSpec::CONFLUENT).unwrap().unwrap();
    assert_eq!(w.n, 0);
}

#[test]
fn discrete_dendroid_examples() {
    let t = mn_tree(&seq("1/2")).unwrap();
    assert_eq!((t.tree.len(), t.leaf_count()), (4, 2));
    let t = mn_tree(&seq("2/3,2/3,1/3,1/3,0")).unwrap();
    assert_eq!((t.tree.len(), t.leaf_count()), (43, 32));
    let layout = geometric_layout(&t.tree, &t.heights).unwrap();
    assert_eq!(layout.leaf_count(), 32);
    assert_eq!(layout.to_dot().matches("pos=").count(), 43);
    let root = t.tree.root();
    assert_eq!(layout.x[root], Ratio::new(31, 2));
}

#[test]
fn order_equivalence() {
    let w = order_equivalent(&seq("1/3,2/3"), &seq("1/4,1/2")).unwrap().unwrap();
    assert_eq!(w.len(), 3);
    assert!(order_equivalent(&seq("1/3,2/3"), &seq("2/3,1/3")).unwrap().is_none());
    assert!(order_equivalent(&seq("0,1/2"), &seq("1/4,1/2")).unwrap().is_none());
    assert!(order_equivalent(&seq("1/2"), &seq("1/2,1/3")).is_err());
}

fn sequence(len: std::ops::Range<usize>) -> impl Strategy<Value = MnSequence> {
    prop::collection::vec((0i64..6, 1i64..=6), len).prop_map(|v| {
        MnSequence::new(v.into_iter().map(|(p, q)| Ratio::new(p % q, q)).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn double_split_shape(t in rooted_tree(8)) {
        let d = double_split(&t).unwrap();
        prop_assert_eq!(d.domain().len(), 3 * t.len() - 2);
        prop_assert!(d.is_monotone() && d.is_confluent() && d.is_end_vertex_preserving());
        prop_assert_eq!(d.domain_tree().unwrap().tree_height(), 3 * t.tree_height());
    }

    #[test]
    fn multiplied_branches_are_regular(t in rooted_tree(5)) {
        let n = (1..=12).find(|n| t.preorder().iter().all(|&v| n % t.sord(v).max(1) == 0)).unwrap();
        let u = multiply_branches(&t, n).unwrap();
        let d = u.domain_tree().unwrap();
        prop_assert!(u.is_light() && u.is_confluent() && u.is_end_vertex_preserving());
        prop_assert_eq!(d.tree_height(), t.tree_height());
        prop_assert!(d.preorder().iter().all(|&v| d.children(v).is_empty() || d.sord(v) == n));
    }

    #[test]
    fn dendroid_ignores_entry_order(s in sequence(0..5), shift in 0usize..5) {
        let mut e = s.entries().to_vec();
        let k = if e.is_empty() { 0 } else { shift % e.len() };
        e.rotate_left(k);
        let t = mn_tree(&s).unwrap();
        let r = mn_tree(&MnSequence::new(e).unwrap()).unwrap();
        prop_assert!(is_isomorphic(&t.tree, &r.tree));
    }

    #[test]
    fn prefix_maps_are_coherent(s in sequence(1..5), i in 0usize..5, j in 0usize..5) {
        let (i, j) = (i.min(j).min(s.len()), i.max(j).min(s.len()));
        let full = mn_tree(&s).unwrap();
        let mid = mn_tree(&s.prefix(j)).unwrap();
        let low = mn_tree(&s.prefix(i)).unwrap();
        let direct = mn_map(&low, &full).unwrap();
        let via = compose(&mn_map(&low, &mid).unwrap(), &mn_map(&mid, &full).unwrap()).unwrap();
        prop_assert_eq!(direct.map(), via.map());
        prop_assert!(direct.is_confluent());
    }

    #[test]
    fn halving_gives_equivalent_sequences(s in sequence(0..5)) {
        let halved = MnSequence::new(s.entries().iter().map(|d| d / 2).collect()).unwrap();
        prop_assert!(order_equivalent(&s, &halved).unwrap().is_some());
        prop_assert!(is_isomorphic(&mn_tree(&s).unwrap().tree, &mn_tree(&halved).unwrap().tree));
    }
}
