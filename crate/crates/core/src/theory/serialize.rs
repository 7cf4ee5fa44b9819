use std::fmt::Write;

use super::{Literal, Premise, PremiseKind, Rule, RuleKind, Theory};

/// Canonical `.phax` text: header, constants, premises, rules, preferences,
/// each block sorted by id. Parsing the output yields an equal theory.
pub fn serialize_theory(t: &Theory) -> String {
    let mut out = String::new();
    writeln!(out, "theory {}.", t.name).unwrap();
    if !t.constants.is_empty() {
        let consts: Vec<&str> = t.constants.iter().map(String::as_str).collect();
        writeln!(out, "const {}.", consts.join(", ")).unwrap();
    }
    for p in t.premises.values() {
        write_premise(&mut out, p);
    }
    for r in t.rules.values() {
        write_rule(&mut out, r);
    }
    for (hi, lo) in &t.preferences {
        writeln!(out, "pref {hi} > {lo}.").unwrap();
    }
    out
}

fn literal(l: &Literal) -> String {
    let mut s = String::new();
    if l.negated {
        s.push('~');
    }
    s.push_str(&l.predicate);
    if !l.args.is_empty() {
        s.push('(');
        let args: Vec<&str> = l.args.iter().map(|t| t.name()).collect();
        s.push_str(&args.join(", "));
        s.push(')');
    }
    s
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        match c {
            '"' => q.push_str("\\\""),
            '\\' => q.push_str("\\\\"),
            '\n' => q.push_str("\\n"),
            '\t' => q.push_str("\\t"),
            c => q.push(c),
        }
    }
    q.push('"');
    q
}

fn attrs(out: &mut String, attrs: &[String]) {
    if !attrs.is_empty() {
        write!(out, " [{}]", attrs.join(", ")).unwrap();
    }
}

fn write_premise(out: &mut String, p: &Premise) {
    let kw = match p.kind {
        PremiseKind::Axiom => "axiom",
        PremiseKind::Ordinary => "premise",
    };
    write!(out, "{kw} {}: {}", p.id, literal(&p.literal)).unwrap();
    let mut a = Vec::new();
    if p.confidence != 1.0 {
        a.push(format!("confidence={}", p.confidence));
    }
    if p.jargon != 0.0 {
        a.push(format!("jargon={}", p.jargon));
    }
    if !p.source.is_empty() {
        a.push(format!("source={}", quote(&p.source)));
    }
    for (band, text) in &p.display {
        a.push(format!("{}={}", band.as_str(), quote(text)));
    }
    attrs(out, &a);
    out.push_str(".\n");
}

fn write_rule(out: &mut String, r: &Rule) {
    let (kw, arrow) = match r.kind {
        RuleKind::Strict => ("strict", "->"),
        RuleKind::Defeasible => ("defeasible", "=>"),
    };
    let body: Vec<String> = r.body.iter().map(literal).collect();
    if body.is_empty() {
        write!(out, "{kw} {}: {arrow} {}", r.id, literal(&r.head)).unwrap();
    } else {
        write!(out, "{kw} {}: {} {arrow} {}", r.id, body.join(", "), literal(&r.head)).unwrap();
    }
    let mut a = Vec::new();
    if r.weight != 1.0 {
        a.push(format!("weight={}", r.weight));
    }
    if let Some(s) = &r.scheme {
        a.push(format!("scheme={s}"));
    }
    attrs(out, &a);
    out.push_str(".\n");
}
