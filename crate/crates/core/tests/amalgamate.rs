use std::sync::Arc;

use fraisse_core::amalgamate::{m3, simple_confluent_pair, simple_monotone_pair};
use fraisse_core::factorize::{decompose_simple_confluent, decompose_simple_star, simple_monotone_chain};
use fraisse_core::oracle::{enumerate_epimorphisms, enumerate_rooted_trees, enumerate_trees, ClassSpec};
use fraisse_core::{FiniteGraph, Morphism};

fn rooted(max: usize) -> Vec<Arc<FiniteGraph>> {
    (1..=max).flat_map(enumerate_rooted_trees).map(|t| t.graph_arc().clone()).collect()
}

/// All maps onto `a` from trees with at most `max` vertices accepted by `keep`.
fn maps_onto(a: &Arc<FiniteGraph>, domains: &[Arc<FiniteGraph>], keep: &dyn Fn(&Morphism) -> bool) -> Vec<Morphism> {
    domains
        .iter()
        .filter(|b| b.len() >= a.len())
        .flat_map(|b| enumerate_epimorphisms(b, a, ClassSpec::CONFLUENT))
        .filter(|m| keep(m))
        .collect()
}

fn is_simple(m: &Morphism, star: bool) -> bool {
    let out = if star { decompose_simple_star(m) } else { decompose_simple_confluent(m) };
    matches!(out, Ok(Ok(_)))
}

#[test]
fn simple_confluent_pairs_commute_with_simple_legs() {
    let trees = rooted(5);
    for star in [false, true] {
        for a in rooted(3) {
            let maps = maps_onto(&a, &trees, &|m| is_simple(m, star));
            for f in &maps {
                for g in &maps {
                    let res = simple_confluent_pair(f, g, star).unwrap_or_else(|e| panic!("{e:?} {star} {} {}", serde_json::to_string(&f.to_json()).unwrap(), serde_json::to_string(&g.to_json()).unwrap()));
                    assert!(res.commutes(f, g));
                    assert!(res.domain.is_tree());
                    assert!(
                        is_simple(&res.f0, star) && is_simple(&res.g0, star),
                        "{star} {} {} {} {}",
                        serde_json::to_string(&f.to_json()).unwrap(),
                        serde_json::to_string(&g.to_json()).unwrap(),
                        serde_json::to_string(&res.f0.to_json()).unwrap(),
                        serde_json::to_string(&res.g0.to_json()).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn simple_monotone_pairs_have_generator_legs() {
    let trees = rooted(5);
    for a in rooted(4) {
        let maps = maps_onto(&a, &trees, &|m| simple_monotone_chain(m, true).unwrap().is_some());
        for f in &maps {
            for g in &maps {
                let res = simple_monotone_pair(f, g).unwrap_or_else(|e| panic!("{e:?} {} {}", serde_json::to_string(&f.to_json()).unwrap(), serde_json::to_string(&g.to_json()).unwrap()));
                assert!(res.commutes(f, g));
                assert!(simple_monotone_chain(&res.f0, true).unwrap().is_some());
                assert!(simple_monotone_chain(&res.g0, true).unwrap().is_some());
            }
        }
    }
}

#[test]
fn order_three_monotone_pairs() {
    let low = |g: &FiniteGraph| (0..g.len()).all(|v| g.degree(v) <= 3);
    let trees: Vec<Arc<FiniteGraph>> = (1..=5).flat_map(enumerate_trees).filter(|g| low(g)).map(Arc::new).collect();
    for a in trees.iter().filter(|a| a.len() <= 3) {
        let maps: Vec<Morphism> = trees
            .iter()
            .filter(|b| b.len() >= a.len())
            .flat_map(|b| enumerate_epimorphisms(b, a, ClassSpec::MONOTONE))
            .collect();
        for f in &maps {
            for g in &maps {
                let res = m3(f, g).unwrap();
                assert!(res.commutes(f, g), "{:?} {:?}", f.to_json(), g.to_json());
                assert!(res.domain.is_tree());
                assert!(res.f0.is_monotone() && res.g0.is_monotone());
                assert!(low(&res.domain));
            }
        }
    }
}
