//! Graphviz export.
//!
//! Trace frames style each edge by its class in that frame: exposed edges
//! solid green, facet edges bold blue, shared edges dashed red. The edge
//! erased next is drawn with `penwidth=3`.

use std::fmt::Write;

use crate::erasure::ErasureTrace;
use crate::exposure::{classify_edges, EdgeClass};
use crate::graph::{Edge, Graph};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn name(v: usize, labels: Option<&[String]>) -> String {
    match labels {
        Some(l) => quote(&l[v]),
        None => v.to_string(),
    }
}

fn style(class: EdgeClass) -> &'static str {
    match class {
        EdgeClass::Exposed => "color=green, style=solid",
        EdgeClass::Facet => "color=blue, style=bold",
        EdgeClass::Shared => "color=red, style=dashed",
    }
}

fn write_body(out: &mut String, g: &Graph, labels: Option<&[String]>, indent: &str, next: Option<Edge>) {
    for v in g.vertices() {
        writeln!(out, "{indent}{};", name(v, labels)).unwrap();
    }
    for (e, class) in classify_edges(g) {
        let mut attrs = style(class).to_string();
        if Some(e) == next {
            attrs.push_str(", penwidth=3");
        }
        writeln!(out, "{indent}{} -- {} [{attrs}];", name(e.u(), labels), name(e.v(), labels)).unwrap();
    }
}

/// A single undirected graph, edges styled by class.
pub fn graph_to_dot(g: &Graph, labels: Option<&[String]>) -> String {
    let mut out = String::from("graph G {\n");
    write_body(&mut out, g, labels, "  ", None);
    out.push_str("}\n");
    out
}

/// One cluster per frame `G_0, ..., G_m`; frame `j` highlights the edge
/// erased at step `j`.
pub fn trace_to_dot(trace: &ErasureTrace, labels: Option<&[String]>) -> String {
    let mut out = String::from("graph trace {\n");
    for (j, g) in trace.graphs().enumerate() {
        writeln!(out, "  subgraph cluster_{j} {{").unwrap();
        writeln!(out, "    label=\"G{j}\";").unwrap();
        // Vertex ids are namespaced per frame so clusters stay separate.
        let frame_labels: Vec<String> = g
            .vertices()
            .map(|v| match labels {
                Some(l) => format!("{}@{j}", l[v]),
                None => format!("{v}@{j}"),
            })
            .collect();
        let mut body = String::new();
        write_body(&mut body, &g, Some(&frame_labels), "    ", trace.erased().get(j).copied());
        out.push_str(&body);
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
