mod common;

use common::{cherry, graph, rooted_epi};
use fraisse_core::factorize::{
    decompose_light_confluent, decompose_simple_confluent, is_special, is_special_star, monotone_light, FactorKind,
};
use fraisse_core::oracle::{brute_simple_confluent, ClassSpec};
use fraisse_core::{compose, Morphism};
use proptest::prelude::*;

#[test]
fn monotone_light_of_a_folded_path() {
    let b = graph(&["r", "a", "b", "c"], &[("r", "a"), ("a", "b"), ("b", "c")], None);
    let a = graph(&["0", "1"], &[("0", "1")], None);
    let f = Morphism::from_named(b, a, [("r", "0"), ("a", "0"), ("b", "1"), ("c", "0")]).unwrap();
    let (m, l) = monotone_light(&f).unwrap();
    assert_eq!(m.codomain().len(), 3);
    assert!(m.is_monotone() && l.is_light());
    assert_eq!(compose(&l, &m).unwrap().map(), f.map());
}

#[test]
fn splitting_edge_decomposes_into_one_factor() {
    let p = graph(&["r", "a"], &[("r", "a")], Some("r"));
    let q = graph(&["r", "x", "a"], &[("r", "x"), ("x", "a")], Some("r"));
    let f = Morphism::from_named(q, p, [("r", "r"), ("x", "r"), ("a", "a")]).unwrap();
    let dec = decompose_simple_confluent(&f).unwrap().unwrap();
    assert_eq!(dec.kinds(), vec![FactorKind::SplittingEdge]);
    assert_eq!(dec.recompose().unwrap().map(), f.map());
}

#[test]
fn root_merge_is_not_special() {
    // r - u - {l1, l2} onto a cherry: u is special, but the root fold is not
    // decomposable.
    let s = graph(&["r", "u", "l1", "l2"], &[("r", "u"), ("u", "l1"), ("u", "l2")], Some("r"));
    let f = Morphism::from_named(s, cherry(), [("r", "r"), ("u", "r"), ("l1", "a"), ("l2", "b")]).unwrap();
    assert!(f.is_confluent() && f.is_end_vertex_preserving());
    assert!(!is_special(&f).unwrap());
    assert!(decompose_simple_confluent(&f).unwrap().is_err());
    assert!(brute_simple_confluent(&f, false).is_none());
}

#[test]
fn light_confluent_fold_is_elementary() {
    let s = graph(
        &["r", "a1", "a2", "b"],
        &[("r", "a1"), ("r", "a2"), ("r", "b")],
        Some("r"),
    );
    let f = Morphism::from_named(s, cherry(), [("r", "r"), ("a1", "a"), ("a2", "a"), ("b", "b")]).unwrap();
    let dec = decompose_light_confluent(&f).unwrap().unwrap();
    assert!(dec.kinds().iter().all(|k| *k == FactorKind::ElementaryLightConfluent));
    assert_eq!(dec.recompose().unwrap().map(), f.map());
}

proptest! {
    #[test]
    fn monotone_light_factors(f in rooted_epi(8, 4, ClassSpec::ANY)) {
        let (m, l) = monotone_light(&f).unwrap();
        prop_assert!(m.is_monotone());
        prop_assert!(l.is_light());
        let back = compose(&l, &m).unwrap();
        prop_assert_eq!(back.map(), f.map());
    }

    #[test]
    fn confluent_maps_have_confluent_light_part(f in rooted_epi(8, 4, ClassSpec::CONFLUENT)) {
        let (m, l) = monotone_light(&f).unwrap();
        prop_assert!(m.is_confluent());
        prop_assert!(l.is_confluent());
    }

    #[test]
    fn special_maps_decompose(f in rooted_epi(7, 4, ClassSpec::CONFLUENT_EVP)) {
        let special = is_special(&f).unwrap();
        match decompose_simple_confluent(&f).unwrap() {
            Ok(dec) => {
                prop_assert!(special);
                let back = dec.recompose().unwrap();
                prop_assert_eq!(back.map(), f.map());
                prop_assert!(dec.factors.iter().all(|x| x.map.is_confluent()));
            }
            Err(_) => prop_assert!(!special),
        }
        prop_assert!(!special || is_special_star(&f).unwrap());
    }

    #[test]
    fn light_confluent_maps_decompose(f in rooted_epi(7, 4, ClassSpec::LIGHT_CONFLUENT)) {
        let dec = decompose_light_confluent(&f).unwrap();
        prop_assert!(dec.is_ok());
        let dec = dec.unwrap();
        let back = dec.recompose().unwrap();
        prop_assert_eq!(back.map(), f.map());
        prop_assert!(dec.factors.iter().all(|x| x.kind == FactorKind::ElementaryLightConfluent));
    }
}
