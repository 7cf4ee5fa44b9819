//! Argumentation schemes: reusable defeasible rule templates with critical
//! questions that act as potential undercutters, plus encoding of clinical
//! study evidence.

mod catalog;
mod study;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theory::{is_constant_name, Band, Literal, Premise, Rule, Term, Theory};

pub use catalog::builtin_schemes;
pub use study::{
    encode_studies, encode_study, read_studies_csv, read_studies_json, study_preference, Outcome, StudyRecord,
    StudyVerdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeId {
    ExpertOpinion,
    CauseToEffect,
    PracticalReasoning,
    Analogy,
    StatisticalGeneralization,
    EthicalValue,
}

impl SchemeId {
    pub const ALL: [SchemeId; 6] = [
        SchemeId::ExpertOpinion,
        SchemeId::CauseToEffect,
        SchemeId::PracticalReasoning,
        SchemeId::Analogy,
        SchemeId::StatisticalGeneralization,
        SchemeId::EthicalValue,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::ExpertOpinion => "expert_opinion",
            SchemeId::CauseToEffect => "cause_to_effect",
            SchemeId::PracticalReasoning => "practical_reasoning",
            SchemeId::Analogy => "analogy",
            SchemeId::StatisticalGeneralization => "statistical_generalization",
            SchemeId::EthicalValue => "ethical_value",
        }
    }

    pub fn parse(s: &str) -> Option<SchemeId> {
        SchemeId::ALL.into_iter().find(|x| x.as_str() == s)
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalQuestion {
    pub id: String,
    /// Question text; `{X}` is replaced by the binding of variable `X`.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scheme {
    pub id: SchemeId,
    pub description: String,
    pub variables: Vec<String>,
    pub premises: Vec<Literal>,
    pub conclusion: Literal,
    pub critical_questions: Vec<CriticalQuestion>,
    /// Sentence pattern per audience band, same placeholder syntax as
    /// critical questions.
    pub audience_templates: BTreeMap<Band, String>,
    /// Bindings reproducing the scheme's worked example.
    pub example_bindings: BTreeMap<String, String>,
}

impl Scheme {
    pub fn get(id: SchemeId) -> Scheme {
        builtin_schemes()
            .into_iter()
            .find(|s| s.id == id)
            .expect("every scheme id has a catalog entry")
    }

    pub fn by_name(name: &str) -> Result<Scheme> {
        SchemeId::parse(name)
            .map(Scheme::get)
            .ok_or_else(|| Error::UnknownScheme(name.to_string()))
    }

    pub fn critical_question(&self, id: &str) -> Option<&CriticalQuestion> {
        self.critical_questions.iter().find(|q| q.id == id)
    }

    /// The rule this scheme yields under `bindings`.
    pub fn rule(&self, bindings: &BTreeMap<String, String>) -> Rule {
        let body = self.premises.iter().map(|l| l.substitute(bindings)).collect();
        Rule::defeasible(instance_rule_id(self.id, &self.variables, bindings), body, self.conclusion.substitute(bindings), 1.0)
            .with_scheme(self.id.as_str())
    }
}

fn instance_rule_id(id: SchemeId, variables: &[String], bindings: &BTreeMap<String, String>) -> String {
    let mut out = id.as_str().to_string();
    for v in variables {
        out.push_str("__");
        out.push_str(&bindings[v]);
    }
    out
}

/// Replaces `{X}` placeholders with the humanized binding of `X`.
pub fn fill_template(template: &str, bindings: &BTreeMap<String, String>) -> String {
    let mut out = template.to_string();
    for (k, v) in bindings {
        out = out.replace(&format!("{{{k}}}"), &humanize(v));
    }
    out
}

/// `vaccinate_group` reads as `vaccinate group`.
pub fn humanize(constant: &str) -> String {
    constant.replace('_', " ")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeInstance {
    pub scheme: SchemeId,
    pub bindings: BTreeMap<String, String>,
    pub premise_ids: Vec<String>,
    pub rule_id: String,
    pub confidence: f64,
}

fn check_unit(what: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidBinding(format!("{what} {x} outside [0, 1]")))
    }
}

/// Extends a copy of `t` with the scheme's premises (ordinary, at
/// `confidence`) and its defeasible rule. A premise already present with
/// the same literal is reused, so instantiating twice changes nothing.
pub fn instantiate_scheme(
    t: &Theory,
    scheme: &str,
    bindings: &BTreeMap<String, String>,
    confidence: f64,
) -> Result<(Theory, SchemeInstance)> {
    let s = Scheme::by_name(scheme)?;
    let missing: Vec<String> = s.variables.iter().filter(|v| !bindings.contains_key(*v)).cloned().collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteBindings {
            scheme: scheme.to_string(),
            missing,
        });
    }
    for (k, v) in bindings {
        if !s.variables.contains(k) {
            return Err(Error::InvalidBinding(format!("scheme `{scheme}` has no variable `{k}`")));
        }
        if !is_constant_name(v) {
            return Err(Error::InvalidBinding(format!("`{k}={v}`: constants start with a lowercase letter or digit")));
        }
    }
    check_unit("confidence", confidence)?;

    let rule = s.rule(bindings);
    let mut out = t.clone();
    let mut premise_ids = Vec::new();
    for (k, lit) in rule.body.iter().enumerate() {
        if let Some(p) = out.premise_with_literal(lit) {
            premise_ids.push(p.id.clone());
            continue;
        }
        let id = format!("{}__p{}", rule.id, k + 1);
        if out.contains_id(&id) {
            return Err(Error::MergeConflict(vec![id]));
        }
        let mut p = Premise::ordinary(&id, lit.clone(), confidence);
        p.source = format!("scheme:{scheme}");
        out.add_premise(p);
        premise_ids.push(id);
    }
    match out.rules.get(&rule.id) {
        Some(existing) if existing == &rule => {}
        Some(_) => return Err(Error::MergeConflict(vec![rule.id.clone()])),
        None if out.premises.contains_key(&rule.id) => return Err(Error::MergeConflict(vec![rule.id.clone()])),
        None => out.add_rule(rule.clone()),
    }
    let inst = SchemeInstance {
        scheme: s.id,
        bindings: bindings.clone(),
        premise_ids,
        rule_id: rule.id,
        confidence,
    };
    Ok((out, inst))
}

/// Scheme and bindings of a scheme-tagged rule whose literals match the
/// scheme's template.
pub fn scheme_bindings(rule: &Rule) -> Option<(SchemeId, BTreeMap<String, String>)> {
    let s = Scheme::get(SchemeId::parse(rule.scheme.as_deref()?)?);
    if rule.body.len() != s.premises.len() {
        return None;
    }
    let mut bindings = BTreeMap::new();
    let pairs = s.premises.iter().zip(&rule.body).chain([(&s.conclusion, &rule.head)]);
    for (tpl, lit) in pairs {
        if tpl.predicate != lit.predicate || tpl.negated != lit.negated || tpl.arity() != lit.arity() {
            return None;
        }
        for (a, b) in tpl.args.iter().zip(&lit.args) {
            match (a, b) {
                (Term::Var(v), Term::Const(c)) => {
                    if bindings.insert(v.clone(), c.clone()).is_some_and(|old| &old != c) {
                        return None;
                    }
                }
                (Term::Const(x), Term::Const(y)) if x == y => {}
                _ => return None,
            }
        }
    }
    Some((s.id, bindings))
}

/// Recovers the instance behind a scheme-tagged rule of `t`.
pub fn find_instance(t: &Theory, rule_id: &str) -> Result<SchemeInstance> {
    let unknown = || Error::UnknownInstance(rule_id.to_string());
    let rule = t.rules.get(rule_id).ok_or_else(unknown)?;
    let (scheme, bindings) = scheme_bindings(rule).ok_or_else(unknown)?;
    let found: Vec<&Premise> = rule.body.iter().filter_map(|l| t.premise_with_literal(l)).collect();
    Ok(SchemeInstance {
        scheme,
        bindings,
        premise_ids: found.iter().map(|p| p.id.clone()).collect(),
        rule_id: rule_id.to_string(),
        confidence: found.iter().map(|p| p.confidence).fold(1.0, f64::min),
    })
}

/// Id of the undercutter premise posed against `rule_id`.
pub fn undercutter_id(rule_id: &str) -> String {
    format!("{rule_id}__undercut")
}

/// Adds an ordinary premise `~applicable(rule)` at `evidence_confidence`.
/// Several questions on one instance share that premise: its source lists
/// them and its confidence is the largest posed. Asking the same question
/// again changes nothing unless the confidence is higher.
pub fn apply_critical_question(
    t: &Theory,
    inst: &SchemeInstance,
    cq: &str,
    evidence_confidence: f64,
) -> Result<Theory> {
    if !t.rules.contains_key(&inst.rule_id) {
        return Err(Error::UnknownInstance(inst.rule_id.clone()));
    }
    let s = Scheme::get(inst.scheme);
    if s.critical_question(cq).is_none() {
        return Err(Error::UnknownCriticalQuestion {
            scheme: s.id.to_string(),
            cq: cq.to_string(),
        });
    }
    check_unit("evidence confidence", evidence_confidence)?;
    let mut out = t.clone();
    let id = undercutter_id(&inst.rule_id);
    let tag = format!("cq:{cq}");
    match out.premises.get_mut(&id) {
        Some(p) => {
            let mut tags: Vec<String> = p.source.split(',').filter(|x| !x.is_empty()).map(String::from).collect();
            if !tags.contains(&tag) {
                tags.push(tag);
                tags.sort();
            }
            p.source = tags.join(",");
            p.confidence = p.confidence.max(evidence_confidence);
        }
        None => {
            let mut p = Premise::ordinary(&id, Literal::not_applicable(&inst.rule_id), evidence_confidence);
            p.source = tag;
            out.add_premise(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{parse_theory, serialize_theory, validate_theory};

    fn b(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn expert_opinion_instance() {
        let bind = b(&[("E", "who"), ("D", "immunization"), ("P", "vaccinate_group")]);
        let (t, inst) = instantiate_scheme(&Theory::default(), "expert_opinion", &bind, 0.9).unwrap();
        let lits: Vec<String> = t.premises.values().map(|p| p.literal.to_string()).collect();
        assert!(lits.contains(&"is_expert(who,immunization)".to_string()));
        assert!(lits.contains(&"asserts(who,vaccinate_group)".to_string()));
        assert!(lits.contains(&"relevant(vaccinate_group,immunization)".to_string()));
        let rule = &t.rules[&inst.rule_id];
        assert_eq!(rule.head.to_string(), "believe(vaccinate_group)");
        assert_eq!(rule.scheme.as_deref(), Some("expert_opinion"));
        assert!(validate_theory(&t).is_empty());
        assert_eq!(inst.premise_ids.len(), 3);
    }

    #[test]
    fn instantiation_is_idempotent_and_value_semantic() {
        let bind = b(&[("A", "masking"), ("E", "reduced_transmission")]);
        let base = Theory::default();
        let (t1, i1) = instantiate_scheme(&base, "cause_to_effect", &bind, 0.8).unwrap();
        let (t2, i2) = instantiate_scheme(&t1, "cause_to_effect", &bind, 0.8).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(i1, i2);
        assert!(base.premises.is_empty());
    }

    #[test]
    fn binding_errors() {
        let t = Theory::default();
        assert!(matches!(
            instantiate_scheme(&t, "astrology", &BTreeMap::new(), 1.0),
            Err(Error::UnknownScheme(_))
        ));
        match instantiate_scheme(&t, "cause_to_effect", &b(&[("A", "masking")]), 1.0) {
            Err(Error::IncompleteBindings { missing, .. }) => assert_eq!(missing, vec!["E"]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            instantiate_scheme(&t, "cause_to_effect", &b(&[("A", "Masking"), ("E", "x")]), 1.0),
            Err(Error::InvalidBinding(_))
        ));
    }

    #[test]
    fn critical_questions_merge() {
        let bind = b(&[("E", "who"), ("D", "immunization"), ("P", "vaccinate_group")]);
        let (t, inst) = instantiate_scheme(&Theory::default(), "expert_opinion", &bind, 1.0).unwrap();
        let t1 = apply_critical_question(&t, &inst, "bias", 0.6).unwrap();
        let t2 = apply_critical_question(&t1, &inst, "bias", 0.6).unwrap();
        assert_eq!(t1, t2);
        let t3 = apply_critical_question(&t2, &inst, "expertise", 0.7).unwrap();
        let u = &t3.premises[&undercutter_id(&inst.rule_id)];
        assert_eq!(u.source, "cq:bias,cq:expertise");
        assert_eq!(u.confidence, 0.7);
        assert!(matches!(
            apply_critical_question(&t, &inst, "nope", 0.5),
            Err(Error::UnknownCriticalQuestion { .. })
        ));
        // the undercut theory still serializes and re-parses
        assert_eq!(parse_theory(&serialize_theory(&t3)).unwrap(), t3);
    }

    #[test]
    fn instance_recovered_from_rule() {
        let bind = b(&[("G", "avoid_icu_overload"), ("A", "lockdown")]);
        let (t, inst) = instantiate_scheme(&Theory::default(), "practical_reasoning", &bind, 0.7).unwrap();
        let found = find_instance(&t, &inst.rule_id).unwrap();
        assert_eq!(found, inst);
        assert!(matches!(find_instance(&t, "missing"), Err(Error::UnknownInstance(_))));
    }

    #[test]
    fn templates_fill() {
        let s = Scheme::get(SchemeId::PracticalReasoning);
        let text = fill_template(&s.audience_templates[&Band::DecisionMaker], &s.example_bindings);
        assert_eq!(text, "To avoid icu overload, implement lockdown.");
    }
}
