use std::collections::{BTreeMap, BTreeSet};

use super::diagnostic::{Diagnostic, DiagnosticKind};
use super::{is_constant_name, is_identifier, PreferenceOrder, Term, Theory};
use crate::schemes::SchemeId;

fn in_unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

/// Checks every theory invariant. An empty result means the theory is valid.
pub fn validate_theory(t: &Theory) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    use DiagnosticKind as K;

    if !is_identifier(&t.name) {
        out.push(Diagnostic::error(K::BadIdentifier, format!("theory name `{}` is not an identifier", t.name)));
    }
    for c in &t.constants {
        if !is_constant_name(c) {
            out.push(Diagnostic::error(K::BadIdentifier, format!("`{c}` is not a valid constant")));
        }
    }

    for (id, p) in &t.premises {
        if id != &p.id || !is_identifier(id) {
            out.push(Diagnostic::error(K::BadIdentifier, format!("bad premise id `{}`", p.id)).with_subjects([id]));
        }
        if t.rules.contains_key(id) {
            out.push(
                Diagnostic::error(K::DuplicateId, format!("id `{id}` names both a premise and a rule"))
                    .with_subjects([id]),
            );
        }
        if !p.literal.is_ground() {
            out.push(
                Diagnostic::error(K::NonGroundPremise, format!("premise `{id}` must be ground: {}", p.literal))
                    .with_subjects([id]),
            );
        }
        if !p.is_ordinary() && p.confidence != 1.0 {
            out.push(
                Diagnostic::error(
                    K::AxiomConfidence,
                    format!("axiom confidence must be 1.0 (axiom `{id}` has {})", p.confidence),
                )
                .with_subjects([id]),
            );
        }
        if !in_unit(p.confidence) {
            out.push(
                Diagnostic::error(K::OutOfRange, format!("confidence of `{id}` must lie in [0, 1]")).with_subjects([id]),
            );
        }
        if !in_unit(p.jargon) {
            out.push(Diagnostic::error(K::OutOfRange, format!("jargon of `{id}` must lie in [0, 1]")).with_subjects([id]));
        }
    }

    let mut by_literal: BTreeMap<String, Vec<&str>> = BTreeMap::new();
    for p in t.premises.values() {
        by_literal.entry(p.literal.to_string()).or_default().push(&p.id);
    }
    for (lit, ids) in by_literal {
        if ids.len() > 1 {
            out.push(
                Diagnostic::error(
                    K::DuplicateLiteral,
                    format!("premises {} share literal {lit}", ids.join(", ")),
                )
                .with_subjects(ids[1..].iter().copied()),
            );
        }
    }

    for (id, r) in &t.rules {
        if id != &r.id || !is_identifier(id) {
            out.push(Diagnostic::error(K::BadIdentifier, format!("bad rule id `{}`", r.id)).with_subjects([id]));
        }
        if !r.is_defeasible() && r.weight != 1.0 {
            out.push(
                Diagnostic::error(
                    K::StrictWeight,
                    format!("strict weight must be 1.0 (rule `{id}` has {})", r.weight),
                )
                .with_subjects([id]),
            );
        }
        if !in_unit(r.weight) {
            out.push(Diagnostic::error(K::OutOfRange, format!("weight of `{id}` must lie in [0, 1]")).with_subjects([id]));
        }
        if !r.is_defeasible() && r.body.is_empty() {
            out.push(
                Diagnostic::error(K::EmptyStrictBody, format!("strict rule `{id}` needs a non-empty body"))
                    .with_subjects([id]),
            );
        }
        let body_vars: BTreeSet<&str> = r.body.iter().flat_map(|l| l.variables()).collect();
        let unsafe_vars: BTreeSet<&str> = r.head.variables().filter(|v| !body_vars.contains(v)).collect();
        if !unsafe_vars.is_empty() {
            out.push(
                Diagnostic::error(
                    K::UnsafeVariable,
                    format!(
                        "head variable(s) {} of rule `{id}` do not occur in its body",
                        unsafe_vars.into_iter().collect::<Vec<_>>().join(", ")
                    ),
                )
                .with_subjects([id]),
            );
        }
        if let Some(s) = &r.scheme {
            if SchemeId::parse(s).is_none() {
                out.push(
                    Diagnostic::error(K::UnknownScheme, format!("rule `{id}` has unknown scheme `{s}`"))
                        .with_subjects([id]),
                );
            }
        }
        for l in r.literals() {
            for term in &l.args {
                if term.name().is_empty() {
                    out.push(Diagnostic::error(K::BadIdentifier, format!("empty term in rule `{id}`")).with_subjects([id]));
                }
            }
        }
    }

    // Fixed arity per predicate, first occurrence wins.
    let mut arity: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    let occurrences = t
        .premises
        .values()
        .map(|p| (&p.id, &p.literal))
        .chain(t.rules.values().flat_map(|r| r.literals().map(move |l| (&r.id, l))));
    let mut reported = BTreeSet::new();
    for (owner, lit) in occurrences {
        match arity.get(lit.predicate.as_str()) {
            Some(&(n, first)) if n != lit.arity() => {
                if reported.insert((lit.predicate.clone(), owner.clone())) {
                    out.push(
                        Diagnostic::error(
                            K::Arity,
                            format!(
                                "predicate `{}` used with arity {} in `{owner}` but arity {n} in `{first}`",
                                lit.predicate,
                                lit.arity()
                            ),
                        )
                        .with_subjects([owner.as_str()]),
                    );
                }
            }
            Some(_) => {}
            None => {
                arity.insert(&lit.predicate, (lit.arity(), owner));
            }
        }
        if lit.predicate == super::APPLICABLE && lit.arity() != 1 {
            out.push(
                Diagnostic::error(K::Arity, format!("`{}` takes exactly one rule id", super::APPLICABLE))
                    .with_subjects([owner.as_str()]),
            );
        }
        for term in &lit.args {
            if let Term::Const(c) = term {
                if !t.constants.contains(c) {
                    out.push(
                        Diagnostic::error(K::BadIdentifier, format!("constant `{c}` is not declared"))
                            .with_subjects([owner.as_str()]),
                    );
                }
            }
        }
    }

    for (hi, lo) in &t.preferences {
        let known = |id: &str| t.rules.contains_key(id) || t.premises.contains_key(id);
        for id in [hi, lo] {
            if !known(id) {
                out.push(
                    Diagnostic::error(K::PreferenceUnknown, format!("preference over unknown id `{id}`"))
                        .with_subjects([hi.as_str(), lo.as_str()]),
                );
            }
        }
        if !(known(hi) && known(lo)) {
            continue;
        }
        let is_rule = |id: &str| t.rules.contains_key(id);
        let is_axiom = |id: &str| t.premises.get(id).map(|p| !p.is_ordinary()).unwrap_or(false);
        if is_axiom(hi) || is_axiom(lo) {
            out.push(
                Diagnostic::error(K::PreferenceKind, format!("preference `{hi} > {lo}` involves an axiom"))
                    .with_subjects([hi.as_str(), lo.as_str()]),
            );
        } else if is_rule(hi) != is_rule(lo) {
            out.push(
                Diagnostic::error(
                    K::PreferenceKind,
                    format!("preference `{hi} > {lo}` mixes a rule and a premise"),
                )
                .with_subjects([hi.as_str(), lo.as_str()]),
            );
        }
    }
    let cycle = PreferenceOrder::new(&t.preferences).cycle_members();
    if !cycle.is_empty() {
        let ids: Vec<&str> = cycle.iter().map(String::as_str).collect();
        out.push(
            Diagnostic::error(K::PreferenceCycle, format!("preference cycle {{{}}}", ids.join(",")))
                .with_subjects(ids),
        );
    }
    out
}
