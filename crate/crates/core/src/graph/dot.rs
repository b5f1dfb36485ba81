use std::fmt::Write;

use super::{ReductionGraph, SpanningTree, VertexKind};

/// DOT rendering. Point vertices are boxes, component vertices ellipses;
/// when a tree is given, its branches are solid and the rest dashed.
pub fn export_dot(graph: &ReductionGraph, tree: Option<&SpanningTree>) -> String {
    let mut out = String::from("graph reduction {\n");
    for v in 0..graph.vertex_count() {
        let shape = match graph.vertex_kind(v) {
            VertexKind::Point => "box",
            VertexKind::Component => "ellipse",
        };
        writeln!(out, "  {} [shape={shape}];", quote(graph.vertex_label(v))).unwrap();
    }
    for (e, b) in graph.branches().iter().enumerate() {
        let style = match tree {
            Some(t) if !t.contains(e) => "dashed",
            _ => "solid",
        };
        let (p, u) = graph.endpoints(e);
        let (a, c) = (graph.vertex_label(p), graph.vertex_label(u));
        writeln!(out, "  {} -- {} [label={}, style={style}];", quote(a), quote(c), quote(&b.label)).unwrap();
    }
    out.push_str("}\n");
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
