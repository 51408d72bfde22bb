mod common;

use std::sync::Arc;

use common::{cherry, graph, path3};
use fraisse_core::oracle::{
    enumerate_connected_graphs, enumerate_epimorphisms, enumerate_rooted_trees, enumerate_trees, for_each_epimorphism,
    is_hereditarily_unicoherent, search_amalgam, ClassSpec,
};
use fraisse_core::{compose, FiniteGraph, Morphism};

#[test]
fn counts_of_small_structures() {
    let rooted: Vec<usize> = (1..=7).map(|n| enumerate_rooted_trees(n).len()).collect();
    assert_eq!(rooted, vec![1, 1, 2, 4, 9, 20, 48]);
    let free: Vec<usize> = (1..=8).map(|n| enumerate_trees(n).len()).collect();
    assert_eq!(free, vec![1, 1, 1, 2, 3, 6, 11, 23]);
    let connected: Vec<usize> = (1..=5).map(|n| enumerate_connected_graphs(n).len()).collect();
    assert_eq!(connected, vec![1, 1, 2, 6, 21]);
}

/// Counts epimorphisms by trying every function.
fn brute_count(d: &FiniteGraph, c: &FiniteGraph) -> usize {
    let (n, m) = (d.len(), c.len());
    let mut f = vec![0; n];
    let mut count = 0;
    loop {
        let edges_ok = d.edges().iter().all(|&(a, b)| f[a] == f[b] || c.has_edge(f[a], f[b]));
        let onto = (0..m).all(|v| f.contains(&v));
        let covered = c.edges().iter().all(|&(x, y)| {
            d.edges().iter().any(|&(a, b)| (f[a], f[b]) == (x, y) || (f[a], f[b]) == (y, x))
        });
        let rooted = match (d.root(), c.root()) {
            (Some(r), Some(s)) => f[r] == s,
            _ => true,
        };
        if edges_ok && onto && covered && rooted {
            count += 1;
        }
        let mut i = 0;
        while i < n && f[i] + 1 == m {
            f[i] = 0;
            i += 1;
        }
        if i == n {
            return count;
        }
        f[i] += 1;
    }
}

#[test]
fn epimorphism_enumeration_matches_brute_force() {
    let graphs: Vec<FiniteGraph> = (1..=4).flat_map(enumerate_connected_graphs).collect();
    for d in &graphs {
        for c in graphs.iter().filter(|c| c.len() <= d.len()) {
            let mut count = 0;
            for_each_epimorphism(d, c, |_| count += 1);
            assert_eq!(count, brute_count(d, c), "{:?} -> {:?}", d.names(), c.names());
        }
    }
}

#[test]
fn rooted_epimorphism_examples() {
    let p2 = graph(&["r", "a"], &[("r", "a")], Some("r"));
    assert_eq!(enumerate_epimorphisms(&p2, &p2, ClassSpec::ANY).len(), 1);
    assert_eq!(enumerate_epimorphisms(&cherry(), &p2, ClassSpec::ANY).len(), 3);
    assert_eq!(enumerate_epimorphisms(&p2, &cherry(), ClassSpec::ANY).len(), 0);
    assert_eq!(enumerate_epimorphisms(&path3(), &p2, ClassSpec::ANY).len(), 2);
    assert_eq!(enumerate_epimorphisms(&path3(), &p2, ClassSpec::MONOTONE).len(), 2);
    let free = graph(&["a", "b"], &[("a", "b")], None);
    assert_eq!(enumerate_epimorphisms(&free, &free, ClassSpec::ANY).len(), 2);
}

#[test]
fn unicoherence() {
    let c4 = graph(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")], None);
    let k3 = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")], None);
    assert!(!is_hereditarily_unicoherent(&c4).unwrap());
    assert!(!is_hereditarily_unicoherent(&k3).unwrap());
    assert!(is_hereditarily_unicoherent(&path3()).unwrap());
}

#[test]
fn bounded_amalgam_search() {
    let a = graph(&["r", "a"], &[("r", "a")], Some("r"));
    let b = graph(&["r", "a1", "a2"], &[("r", "a1"), ("r", "a2")], Some("r"));
    let f = Morphism::from_named(b, a.clone(), [("r", "r"), ("a1", "a"), ("a2", "a")]).unwrap();
    let c = graph(&["r", "x", "a"], &[("r", "x"), ("x", "a")], Some("r"));
    let g = Morphism::from_named(c, a, [("r", "r"), ("x", "r"), ("a", "a")]).unwrap();
    let found = search_amalgam(&f, &g, ClassSpec::CONFLUENT, 6).unwrap().unwrap();
    assert_eq!(found.domain.len(), 4);
    let left = compose(&f, &found.to_b).unwrap();
    let right = compose(&g, &found.to_c).unwrap();
    assert_eq!(left.map(), right.map());
    assert!(found.to_b.is_confluent() && found.to_c.is_confluent());
    assert!(Arc::ptr_eq(found.to_b.domain(), &found.domain) || found.to_b.domain() == &found.domain);
}
