//! Graphviz DOT rendering of graphs, maps and amalgamation squares.

use std::fmt::Write;

use crate::amalgamate::AmalgamResult;
use crate::graph::FiniteGraph;
use crate::morphism::Morphism;

pub fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn body(out: &mut String, g: &FiniteGraph, prefix: &str, indent: &str) {
    for v in 0..g.len() {
        let shape = if g.root() == Some(v) { " [shape=doublecircle]" } else { "" };
        let _ = writeln!(out, "{indent}\"{prefix}{}\" [label=\"{}\"]{shape};", escape(g.name(v)), escape(g.name(v)));
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "{indent}\"{prefix}{}\" -- \"{prefix}{}\";", escape(g.name(a)), escape(g.name(b)));
    }
}

pub fn graph_to_dot(g: &FiniteGraph) -> String {
    let mut out = String::from("graph G {\n");
    body(&mut out, g, "", "  ");
    out.push_str("}\n");
    out
}

fn cluster(out: &mut String, g: &FiniteGraph, prefix: &str, label: &str) {
    let _ = writeln!(out, "  subgraph \"cluster_{label}\" {{\n    label=\"{label}\";");
    body(out, g, prefix, "    ");
    out.push_str("  }\n");
}

fn arrows(out: &mut String, f: &Morphism, from: &str, to: &str) {
    for v in 0..f.domain().len() {
        let _ = writeln!(
            out,
            "  \"{from}{}\" -- \"{to}{}\" [style=dashed, constraint=false];",
            escape(f.domain().name(v)),
            escape(f.codomain().name(f.apply(v)))
        );
    }
}

/// Domain and codomain as clusters, with dashed lines from each vertex to
/// its image.
pub fn morphism_to_dot(f: &Morphism) -> String {
    let mut out = String::from("graph map {\n");
    cluster(&mut out, f.domain(), "dom:", "domain");
    cluster(&mut out, f.codomain(), "cod:", "codomain");
    arrows(&mut out, f, "dom:", "cod:");
    out.push_str("}\n");
    out
}

/// The commuting square `f . f0 = g . g0` with all four graphs drawn.
pub fn amalgam_to_dot(square: &AmalgamResult, f: &Morphism, g: &Morphism) -> String {
    let mut out = String::from("graph amalgam {\n");
    cluster(&mut out, &square.domain, "D:", "D");
    cluster(&mut out, f.domain(), "B:", "B");
    cluster(&mut out, g.domain(), "C:", "C");
    cluster(&mut out, f.codomain(), "A:", "A");
    arrows(&mut out, &square.f0, "D:", "B:");
    arrows(&mut out, &square.g0, "D:", "C:");
    arrows(&mut out, f, "B:", "A:");
    arrows(&mut out, g, "C:", "A:");
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_identity() {
        let g = FiniteGraph::new(["a", "b"], [("a", "b")], Some("a")).unwrap();
        let dot = graph_to_dot(&g);
        assert!(dot.contains("\"a\" -- \"b\";"));
        let f = Morphism::identity(g.into());
        let dot = morphism_to_dot(&f);
        assert_eq!(dot.matches("style=dashed").count(), 2);
    }
}
