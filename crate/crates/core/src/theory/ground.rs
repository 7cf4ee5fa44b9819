use std::collections::{BTreeMap, BTreeSet};

use super::{PreferenceOrder, Rule, Theory};
use crate::error::Error;

/// Default cap on the number of ground rule instances.
pub const DEFAULT_MAX_INSTANCES: usize = 100_000;

/// A variable-free theory. Ground rule ids are the parent id followed by
/// the substitution, e.g. `r1[X=a,Y=b]`; `origin` maps each back to its
/// parent so preferences and undercutters stated against the schema apply.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTheory {
    pub theory: Theory,
    pub origin: BTreeMap<String, String>,
}

impl GroundTheory {
    pub fn parent<'a>(&'a self, rule_id: &'a str) -> &'a str {
        self.origin.get(rule_id).map(String::as_str).unwrap_or(rule_id)
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.theory.rules.get(id)
    }

    pub fn preference_order(&self) -> PreferenceOrder {
        PreferenceOrder::new(&self.theory.preferences).with_origin(self.origin.clone())
    }
}

pub fn ground_theory(t: &Theory) -> Result<GroundTheory, Error> {
    ground_theory_with_limit(t, DEFAULT_MAX_INSTANCES)
}

/// Instantiates every rule over the theory's constants. A rule with
/// variables yields one instance per substitution, provided each body
/// predicate occurs (in either polarity) in some premise or rule head.
pub fn ground_theory_with_limit(t: &Theory, max_instances: usize) -> Result<GroundTheory, Error> {
    let available: BTreeSet<(&str, usize)> = t
        .premises
        .values()
        .map(|p| &p.literal)
        .chain(t.rules.values().map(|r| &r.head))
        .map(|l| (l.predicate.as_str(), l.arity()))
        .collect();
    let constants: Vec<&String> = t.constants.iter().collect();

    let mut out = Theory {
        rules: BTreeMap::new(),
        ..t.clone()
    };
    let mut origin = BTreeMap::new();
    let mut count = 0usize;

    for rule in t.rules.values() {
        let vars = rule.variables();
        if vars.is_empty() {
            count += 1;
            check(count, max_instances)?;
            origin.insert(rule.id.clone(), rule.id.clone());
            out.rules.insert(rule.id.clone(), rule.clone());
            continue;
        }
        if !rule
            .body
            .iter()
            .all(|l| available.contains(&(l.predicate.as_str(), l.arity())))
        {
            continue;
        }
        let n = instance_count(constants.len(), vars.len()).ok_or(Error::GroundingTooLarge {
            limit: max_instances,
        })?;
        check(count.saturating_add(n), max_instances)?;
        count += n;

        let mut digits = vec![0usize; vars.len()];
        for _ in 0..n {
            let bindings: BTreeMap<String, String> = vars
                .iter()
                .zip(&digits)
                .map(|(v, &d)| (v.clone(), constants[d].clone()))
                .collect();
            let suffix: Vec<String> = vars.iter().map(|v| format!("{v}={}", bindings[v])).collect();
            let id = format!("{}[{}]", rule.id, suffix.join(","));
            let inst = Rule {
                id: id.clone(),
                kind: rule.kind,
                body: rule.body.iter().map(|l| l.substitute(&bindings)).collect(),
                head: rule.head.substitute(&bindings),
                weight: rule.weight,
                scheme: rule.scheme.clone(),
            };
            origin.insert(id.clone(), rule.id.clone());
            out.rules.insert(id, inst);
            // odometer, last variable fastest
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < constants.len() {
                    break;
                }
                *d = 0;
            }
        }
    }
    Ok(GroundTheory { theory: out, origin })
}

fn instance_count(constants: usize, vars: usize) -> Option<usize> {
    let mut n: usize = 1;
    for _ in 0..vars {
        n = n.checked_mul(constants)?;
    }
    Some(n)
}

fn check(count: usize, limit: usize) -> Result<(), Error> {
    if count > limit {
        Err(Error::GroundingTooLarge { limit })
    } else {
        Ok(())
    }
}
