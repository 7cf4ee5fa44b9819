use crate::adapt::{ExplanationSelection, Role};
use crate::af::{ArgumentationFramework, Label, Labelling};
use crate::aspic::DefeatGraph;

/// Quotes an id or label; `\n` escapes in the input are kept for DOT.
fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

fn label_color(l: Label) -> &'static str {
    match l {
        Label::In => "#b7e1b0",
        Label::Out => "#f4b6b6",
        Label::Undec => "#e0e0e0",
    }
}

/// One node per argument, filled by label, and one edge per attack.
pub fn render_af_dot(af: &ArgumentationFramework, lab: &Labelling) -> String {
    let mut out = String::from("digraph af {\n");
    for a in af.args() {
        let l = lab.get(a).unwrap_or(Label::Undec);
        out.push_str(&format!(
            "  {} [label={}, style=filled, fillcolor=\"{}\"];\n",
            quote(a),
            quote(&format!("{a}\\n{l}")),
            label_color(l)
        ));
    }
    for (f, t) in af.attacks() {
        out.push_str(&format!("  {} -> {};\n", quote(f), quote(t)));
    }
    out.push_str("}\n");
    out
}

/// The selected subtree; edges run from each defeater to the node it
/// defeats and the root is drawn bold.
pub fn render_selection_dot(sel: &ExplanationSelection, dg: &DefeatGraph) -> String {
    let mut out = String::from("digraph explanation {\n  rankdir=BT;\n  node [shape=box];\n");
    for n in sel.subtree.nodes.values() {
        let conclusion = dg
            .arguments
            .get(&n.argument)
            .map(|a| a.conclusion.to_string())
            .unwrap_or_default();
        let (color, role) = match n.role {
            Role::Proponent => ("#b7e1b0", "proponent"),
            Role::Opponent => ("#f4b6b6", "opponent"),
        };
        let style = if n.id == sel.subtree.root { "\"filled,bold\", penwidth=2" } else { "filled" };
        out.push_str(&format!(
            "  n{} [label={}, style={style}, fillcolor=\"{color}\", tooltip={}];\n",
            n.id,
            quote(&format!("{}: {conclusion}\\nbase {:.2}", n.label, n.base)),
            quote(role)
        ));
    }
    for n in sel.subtree.nodes.values() {
        if let Some(p) = n.parent {
            out.push_str(&format!("  n{} -> n{p};\n", n.id));
        }
    }
    out.push_str("}\n");
    out
}
