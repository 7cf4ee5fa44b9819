//! Audience-adapted output. The band derived from a user's expertise picks
//! the premise display text, the scheme phrasing and how much of the
//! argument chain is shown.

mod dot;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::adapt::{ExplanationSelection, Role, UserProfile};
use crate::aspic::{Argument, DefeatGraph};
use crate::error::{Error, Result};
use crate::schemes::{fill_template, scheme_bindings, Scheme};
use crate::theory::{Band, GroundTheory, Literal};

pub use dot::{render_af_dot, render_selection_dot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Markdown,
    Dot,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "text" => Ok(Format::Text),
            "markdown" | "md" => Ok(Format::Markdown),
            "dot" => Ok(Format::Dot),
            _ => Err(Error::UnsupportedFormat(s.to_string())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Markdown => "markdown",
            Format::Dot => "dot",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RenderedExplanation {
    pub format: Format,
    pub body: String,
    pub claim: String,
    pub supports: Vec<String>,
    pub challenges: Vec<String>,
}

/// Plain reading of a literal: `believe(p)` is just `p`, negation reads
/// "not".
pub fn literal_phrase(l: &Literal) -> String {
    if !l.negated && l.predicate == "believe" && l.arity() == 1 {
        return l.args[0].name().to_string();
    }
    let positive = l.clone().with_negation(false).to_string();
    if l.negated {
        format!("not {positive}")
    } else {
        positive
    }
}

/// Sentence for an argument without display text: the scheme's phrasing
/// when its top rule instantiates a scheme, otherwise a generic template.
fn templated(a: &Argument, band: Band, gt: &GroundTheory) -> String {
    let scheme_text = a
        .top_rule
        .as_deref()
        .and_then(|r| gt.rule(r))
        .and_then(scheme_bindings)
        .map(|(id, bindings)| fill_template(&Scheme::get(id).audience_templates[&band], &bindings));
    match scheme_text {
        Some(s) => s,
        None if a.is_premise_argument() => format!("Given: {}.", literal_phrase(&a.conclusion)),
        None => format!("It follows that: {}.", literal_phrase(&a.conclusion)),
    }
}

/// One sentence for `a`. Display text written for the user's band on any
/// of the argument's premises is used verbatim, in premise id order.
/// Otherwise the sentence is templated, and professionals also see the
/// argument's weight.
pub fn render_argument(a: &Argument, u: &UserProfile, gt: &GroundTheory) -> String {
    let band = u.band();
    let shown: Vec<&str> = a
        .premise_set
        .iter()
        .filter_map(|p| gt.theory.premises.get(p))
        .filter_map(|p| p.display.get(&band))
        .map(String::as_str)
        .collect();
    if !shown.is_empty() {
        return shown.join(" ");
    }
    let text = templated(a, band, gt);
    if band == Band::Professional {
        format!("{text} (confidence {:.2})", a.weight)
    } else {
        text
    }
}

fn support_lines(sel: &ExplanationSelection, u: &UserProfile, dg: &DefeatGraph, gt: &GroundTheory) -> Vec<String> {
    let root = sel.subtree.root_node();
    let Some(arg) = dg.arguments.get(&root.argument) else {
        return Vec::new();
    };
    let band = u.band();
    match band {
        Band::Lay => Vec::new(),
        Band::DecisionMaker => arg
            .subarguments
            .iter()
            .filter_map(|s| dg.arguments.get(s))
            .map(|s| templated(s, band, gt))
            .collect(),
        Band::Professional => dg
            .arguments
            .sub_closure(&arg.id)
            .into_iter()
            .filter(|s| s.id != arg.id)
            .map(|s| format!("{} (weight {:.2})", templated(s, band, gt), s.weight))
            .collect(),
    }
}

/// Challenge lines, depth first: opponents as `- ...`, their answers
/// indented beneath.
fn challenge_lines(
    sel: &ExplanationSelection,
    u: &UserProfile,
    dg: &DefeatGraph,
    gt: &GroundTheory,
) -> Vec<(usize, Role, String)> {
    let mut out = Vec::new();
    let mut stack: Vec<usize> = sel.subtree.root_node().children.iter().rev().copied().collect();
    while let Some(id) = stack.pop() {
        let n = sel.subtree.node(id);
        let text = dg
            .arguments
            .get(&n.argument)
            .map(|a| render_argument(a, u, gt))
            .unwrap_or_else(|| n.label.clone());
        out.push((n.depth, n.role, text));
        stack.extend(n.children.iter().rev().copied());
    }
    out
}

fn challenge_prefix(role: Role, depth: usize) -> &'static str {
    match (role, depth) {
        (Role::Opponent, 1) => "",
        (Role::Opponent, _) => "challenged by: ",
        (Role::Proponent, _) => "answered by: ",
    }
}

pub fn render_explanation(
    sel: &ExplanationSelection,
    u: &UserProfile,
    dg: &DefeatGraph,
    gt: &GroundTheory,
    format: Format,
) -> RenderedExplanation {
    let claim = dg
        .arguments
        .get(&sel.subtree.root_node().argument)
        .map(|a| render_argument(a, u, gt))
        .unwrap_or_default();
    let supports = support_lines(sel, u, dg, gt);
    let challenges = challenge_lines(sel, u, dg, gt);
    let challenge_text: Vec<String> = challenges
        .iter()
        .map(|(d, r, t)| format!("{}{t}", challenge_prefix(*r, *d)))
        .collect();
    let professional = u.band() == Band::Professional;
    let sigma_line = format!("Sufficiency: σ = {:.2} (full tree {:.2})", sel.sigma, sel.sigma_full);

    let body = match format {
        Format::Text => {
            let mut out = format!("Claim: {claim}\n");
            if !supports.is_empty() {
                out.push_str("Supported by:\n");
                for s in &supports {
                    out.push_str(&format!("- {s}\n"));
                }
            }
            if !challenges.is_empty() {
                out.push_str("Challenges:\n");
                for (d, r, t) in &challenges {
                    let indent = "  ".repeat(d - 1);
                    let bullet = if *d == 1 { "- " } else { "" };
                    out.push_str(&format!("{indent}{bullet}{}{t}\n", challenge_prefix(*r, *d)));
                }
            }
            if professional {
                out.push_str(&sigma_line);
                out.push('\n');
            }
            out
        }
        Format::Markdown => {
            let mut out = format!("**Claim:** {claim}\n");
            if !supports.is_empty() {
                out.push_str("\n**Supported by:**\n\n");
                for s in &supports {
                    out.push_str(&format!("- {s}\n"));
                }
            }
            if !challenges.is_empty() {
                out.push_str("\n**Challenges:**\n\n");
                for (d, r, t) in &challenges {
                    let indent = "  ".repeat(d - 1);
                    out.push_str(&format!("{indent}- {}{t}\n", challenge_prefix(*r, *d)));
                }
            }
            if professional {
                out.push_str(&format!("\n_{sigma_line}_\n"));
            }
            out
        }
        Format::Dot => render_selection_dot(sel, dg),
    };
    RenderedExplanation {
        format,
        body,
        claim,
        supports,
        challenges: challenge_text,
    }
}
