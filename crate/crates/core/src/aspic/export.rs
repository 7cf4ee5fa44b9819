use serde_json::{json, Value};

use super::{ArgumentSet, AttackKind, DefeatGraph};

/// Debug dump of the argument forest.
pub fn arguments_json(args: &ArgumentSet) -> Value {
    Value::Array(
        args.iter()
            .map(|a| {
                json!({
                    "id": a.id,
                    "label": a.label,
                    "conclusion": a.conclusion.to_string(),
                    "top_rule": a.top_rule,
                    "subarguments": a.subarguments,
                    "premises": a.premise_set,
                    "weight": a.weight,
                    "scheme": a.scheme,
                })
            })
            .collect(),
    )
}

/// Quotes an id or label; `\n` escapes in the input are kept for DOT.
fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Attacks as DOT edges, named by argument label; failed attacks dashed.
pub fn defeat_graph_dot(dg: &DefeatGraph) -> String {
    let mut out = String::from("digraph defeats {\n");
    let mut nodes: Vec<(&str, String)> = dg
        .arguments
        .iter()
        .map(|a| (a.label.as_str(), format!("{}\\n{}", a.label, a.conclusion)))
        .collect();
    nodes.sort();
    for (label, text) in nodes {
        out.push_str(&format!("  {} [label={}];\n", quote(label), quote(&text)));
    }
    let label = |id: &str| dg.arguments.get(id).map(|a| a.label.clone()).unwrap_or_default();
    let mut edges: Vec<(String, String, AttackKind, bool)> = dg
        .attacks
        .iter()
        .map(|(a, ok)| (label(&a.attacker), label(&a.attacked), a.kind, *ok))
        .collect();
    edges.sort();
    edges.dedup();
    for (f, t, kind, ok) in edges {
        let kind = match kind {
            AttackKind::Rebut => "rebut",
            AttackKind::Undercut => "undercut",
            AttackKind::Undermine => "undermine",
        };
        let style = if ok { "solid" } else { "dashed" };
        out.push_str(&format!("  {} -> {} [label={kind}, style={style}];\n", quote(&f), quote(&t)));
    }
    out.push_str("}\n");
    out
}
