//! GraphML and DOT rendering of projection graphs.
//!
//! Both formats carry the projection mode as a node attribute and, per
//! edge, the weight and the semicolon-joined list of shared opposite-
//! mode entities. Output is deterministic: nodes in identifier order,
//! edges in canonical edge order.

use std::fmt::Write;

use crate::projection::ProjectionGraph;

fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            other => out.push(other),
        }
    }
    out
}

fn dot_escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders the projection as a GraphML document.
pub fn projection_to_graphml(projection: &ProjectionGraph) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str("  <key id=\"mode\" for=\"node\" attr.name=\"mode\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n");
    out.push_str("  <key id=\"shared\" for=\"edge\" attr.name=\"shared\" attr.type=\"string\"/>\n");
    out.push_str("  <graph id=\"projection\" edgedefault=\"undirected\">\n");
    let mode = projection.mode().to_string();
    for node in projection.nodes() {
        writeln!(
            out,
            "    <node id=\"{}\"><data key=\"mode\">{}</data></node>",
            xml_escape(node),
            xml_escape(&mode)
        )
        .expect("writing to string cannot fail");
    }
    for edge in projection.edges() {
        writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\"><data key=\"weight\">{}</data>\
<data key=\"shared\">{}</data></edge>",
            xml_escape(&edge.u),
            xml_escape(&edge.v),
            edge.weight(),
            xml_escape(&edge.shared.join(";"))
        )
        .expect("writing to string cannot fail");
    }
    out.push_str("  </graph>\n");
    out.push_str("</graphml>\n");
    out
}

/// Renders the projection as an undirected Graphviz DOT graph.
pub fn projection_to_dot(projection: &ProjectionGraph) -> String {
    let mut out = String::new();
    out.push_str("graph projection {\n");
    let mode = projection.mode().to_string();
    for node in projection.nodes() {
        writeln!(
            out,
            "  \"{}\" [mode=\"{}\"];",
            dot_escape(node),
            dot_escape(&mode)
        )
        .expect("writing to string cannot fail");
    }
    for edge in projection.edges() {
        writeln!(
            out,
            "  \"{}\" -- \"{}\" [weight={}, shared=\"{}\"];",
            dot_escape(&edge.u),
            dot_escape(&edge.v),
            edge.weight(),
            dot_escape(&edge.shared.join(";"))
        )
        .expect("writing to string cannot fail");
    }
    out.push_str("}\n");
    out
}
