//! Canonical codes for arbitrary finite graphs by colour refinement and
//! individualization. Exponential in the worst case, fine for small graphs.

use crate::graph::FiniteGraph;

fn normalize<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap()).collect()
}

fn refine(g: &FiniteGraph, mut colors: Vec<usize>) -> Vec<usize> {
    let mut classes = colors.iter().max().map_or(0, |m| m + 1);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..g.len())
            .map(|v| {
                let mut nc: Vec<usize> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
                nc.sort_unstable();
                (colors[v], nc)
            })
            .collect();
        let next = normalize(&sigs);
        let count = next.iter().max().map_or(0, |m| m + 1);
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

fn encode(g: &FiniteGraph, colors: &[usize]) -> String {
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (colors[a], colors[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    let root = g.root().map_or("-".to_string(), |r| colors[r].to_string());
    let body: Vec<String> = edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
    format!("{};{};{}", g.len(), root, body.join(","))
}

fn search(g: &FiniteGraph, colors: Vec<usize>, best: &mut Option<String>) {
    let n = g.len();
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c] += 1;
    }
    let Some(cell) = (0..n).find(|&c| counts[c] >= 2) else {
        let code = encode(g, &colors);
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    };
    for v in (0..n).filter(|&v| colors[v] == cell) {
        let keys: Vec<usize> = (0..n).map(|u| 2 * colors[u] + usize::from(u != v && colors[u] == cell)).collect();
        search(g, refine(g, normalize(&keys)), best);
    }
}

/// Equal codes exactly for isomorphic graphs (root-preserving when rooted).
pub fn graph_canonical_code(g: &FiniteGraph) -> String {
    if g.is_empty() {
        return "0;-;".to_string();
    }
    let init: Vec<usize> = (0..g.len()).map(|v| 2 * g.degree(v) + usize::from(Some(v) == g.root())).collect();
    let mut best = None;
    search(g, refine(g, normalize(&init)), &mut best);
    best.unwrap()
}
