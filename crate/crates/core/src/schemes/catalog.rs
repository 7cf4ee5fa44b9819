use std::collections::BTreeMap;

use super::{CriticalQuestion, Scheme, SchemeId};
use crate::theory::{Band, Literal, Term};

fn lit(pred: &str, args: &[&str]) -> Literal {
    Literal::new(pred, args.iter().map(|a| Term::from_ident(a)).collect())
}

fn cqs(items: &[(&str, &str)]) -> Vec<CriticalQuestion> {
    items
        .iter()
        .map(|(id, text)| CriticalQuestion {
            id: id.to_string(),
            text: text.to_string(),
        })
        .collect()
}

fn pairs(items: &[(&str, &str)]) -> BTreeMap<String, String> {
    items.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn audience(lay: &str, decision_maker: &str, professional: &str) -> BTreeMap<Band, String> {
    BTreeMap::from([
        (Band::Lay, lay.to_string()),
        (Band::DecisionMaker, decision_maker.to_string()),
        (Band::Professional, professional.to_string()),
    ])
}

struct Spec<'a> {
    id: SchemeId,
    description: &'a str,
    variables: &'a [&'a str],
    premises: Vec<Literal>,
    conclusion: Literal,
    cqs: &'a [(&'a str, &'a str)],
    audience: [&'a str; 3],
    example: &'a [(&'a str, &'a str)],
}

impl Spec<'_> {
    fn build(self) -> Scheme {
        let [lay, dm, pro] = self.audience;
        Scheme {
            id: self.id,
            description: self.description.to_string(),
            variables: self.variables.iter().map(|v| v.to_string()).collect(),
            premises: self.premises,
            conclusion: self.conclusion,
            critical_questions: cqs(self.cqs),
            audience_templates: audience(lay, dm, pro),
            example_bindings: pairs(self.example),
        }
    }
}

/// The six built-in schemes, in catalog order.
pub fn builtin_schemes() -> Vec<Scheme> {
    vec![
        Spec {
            id: SchemeId::ExpertOpinion,
            description: "Relying on authority or professional expertise",
            variables: &["E", "D", "P"],
            premises: vec![lit("is_expert", &["E", "D"]), lit("asserts", &["E", "P"]), lit("relevant", &["P", "D"])],
            conclusion: lit("believe", &["P"]),
            cqs: &[
                ("expertise", "Is {E} a genuine expert in {D}?"),
                ("bias", "Is {E} biased?"),
                ("consistency", "Do other experts in {D} agree with {P}?"),
                ("evidence", "Is the assertion of {E} based on evidence?"),
            ],
            audience: [
                "Health experts ({E}) recommend {P}.",
                "{E}, an authority on {D}, supports {P}.",
                "Expert opinion: {E} asserts {P} within {D}.",
            ],
            example: &[("E", "who"), ("D", "immunization"), ("P", "vaccinate_group")],
        }
        .build(),
        Spec {
            id: SchemeId::CauseToEffect,
            description: "Predicting consequences of an action or event",
            variables: &["A", "E"],
            premises: vec![lit("action", &["A"]), lit("causes", &["A", "E"])],
            conclusion: lit("expect", &["E"]),
            cqs: &[
                ("causal_link", "Is the link between {A} and {E} causal rather than a correlation?"),
                ("confounders", "Could something other than {A} produce {E}?"),
                ("strength", "Is the effect of {A} strong enough to expect {E}?"),
            ],
            audience: [
                "{A} leads to {E}.",
                "Evidence shows {A} results in {E}.",
                "Causal claim: {A} causes {E}.",
            ],
            example: &[("A", "masking"), ("E", "reduced_transmission")],
        }
        .build(),
        Spec {
            id: SchemeId::PracticalReasoning,
            description: "Choosing actions to achieve desired outcomes",
            variables: &["G", "A"],
            premises: vec![lit("goal", &["G"]), lit("action", &["A"]), lit("promotes", &["A", "G"])],
            conclusion: lit("do", &["A"]),
            cqs: &[
                ("alternatives", "Is there a better way than {A} to {G}?"),
                ("side_effects", "Does {A} have consequences that outweigh {G}?"),
                ("feasibility", "Is {A} possible in practice?"),
            ],
            audience: [
                "Doing {A} helps {G}.",
                "To {G}, implement {A}.",
                "Practical reasoning: {A} promotes the goal {G}.",
            ],
            example: &[("G", "avoid_icu_overload"), ("A", "lockdown")],
        }
        .build(),
        Spec {
            id: SchemeId::Analogy,
            description: "Inferring based on similarity to previous cases",
            variables: &["S", "T", "A"],
            premises: vec![lit("similar", &["S", "T"]), lit("worked_in", &["A", "S"])],
            conclusion: lit("works_in", &["A", "T"]),
            cqs: &[
                ("relevant_difference", "Is there a relevant difference between {S} and {T}?"),
                ("counter_case", "Is there a similar case where {A} did not work?"),
            ],
            audience: [
                "{A} worked for {S}; it can help for {T}.",
                "{A} succeeded in {S}, a comparable case to {T}.",
                "Argument by analogy: {A} worked in {S}, which resembles {T}.",
            ],
            example: &[("S", "ebola"), ("T", "covid"), ("A", "contact_tracing")],
        }
        .build(),
        Spec {
            id: SchemeId::StatisticalGeneralization,
            description: "Drawing conclusions from population-level data",
            variables: &["S", "G", "O"],
            premises: vec![lit("sample_of", &["S", "G"]), lit("observed_in", &["O", "S"])],
            conclusion: lit("expect_in", &["O", "G"]),
            cqs: &[
                ("representative", "Is {S} representative of {G}?"),
                ("sample_size", "Is {S} large enough to generalize?"),
            ],
            audience: [
                "Most people in studies saw {O}.",
                "Data from {S} show {O} across {G}.",
                "Statistical generalization: {O} observed in {S}, a sample of {G}.",
            ],
            example: &[("S", "clinical_trials"), ("G", "patients"), ("O", "improvement")],
        }
        .build(),
        Spec {
            id: SchemeId::EthicalValue,
            description: "Arguing based on fairness, harm, or social values",
            variables: &["V", "A"],
            premises: vec![lit("value", &["V"]), lit("action", &["A"]), lit("upholds", &["A", "V"])],
            conclusion: lit("ought", &["A"]),
            cqs: &[
                ("value_conflict", "Does {A} conflict with another important value?"),
                ("value_priority", "Should {V} take priority here?"),
            ],
            audience: [
                "We must {A} to ensure {V}.",
                "{A} upholds {V}.",
                "Value-based argument: {A} upholds {V}.",
            ],
            example: &[("V", "equity"), ("A", "prioritize_vulnerable_groups")],
        }
        .build(),
    ]
}
