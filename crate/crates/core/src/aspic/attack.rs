use std::collections::{BTreeSet, HashMap};

use super::{Argument, ArgumentSet, Attack, AttackKind, DefeatGraph};
use crate::theory::{GroundTheory, Literal, PreferenceOrder};

/// All attacks between `args`. Each argument registers the literals that
/// would attack it (contraries of its defeasible conclusions and ordinary
/// premises, and `~applicable(r)` for every defeasible rule it applies),
/// then every argument is matched against that index by conclusion.
pub fn compute_attacks(args: &ArgumentSet, gt: &GroundTheory) -> Vec<Attack> {
    let mut index: HashMap<Literal, Vec<(usize, usize, AttackKind)>> = HashMap::new();
    for b in 0..args.len() {
        for &sub in args.closure_of(b) {
            let s = args.at(sub);
            match &s.top_rule {
                Some(r) => {
                    let Some(rule) = gt.rule(r) else { continue };
                    if !rule.is_defeasible() {
                        continue;
                    }
                    index.entry(s.conclusion.negate()).or_default().push((b, sub, AttackKind::Rebut));
                    let mut names = vec![r.as_str()];
                    let parent = gt.parent(r);
                    if parent != r {
                        names.push(parent);
                    }
                    for n in names {
                        index
                            .entry(Literal::not_applicable(n))
                            .or_default()
                            .push((b, sub, AttackKind::Undercut));
                    }
                }
                None if !s.ordinary_premises.is_empty() => {
                    index.entry(s.conclusion.negate()).or_default().push((b, sub, AttackKind::Undermine));
                }
                None => {}
            }
        }
    }
    let mut out: BTreeSet<Attack> = BTreeSet::new();
    for a in args.iter() {
        if let Some(hits) = index.get(&a.conclusion) {
            for &(b, sub, kind) in hits {
                out.insert(Attack {
                    attacker: a.id.clone(),
                    attacked: args.at(b).id.clone(),
                    kind,
                    target: args.at(sub).id.clone(),
                });
            }
        }
    }
    out.into_iter().collect()
}

/// Elitist set comparison: `s1 < s2` iff some element of `s1` is strictly
/// below every element of `s2`. The empty set is never below anything and
/// every non-empty set is below the empty one.
pub fn set_less(prefs: &PreferenceOrder, s1: &BTreeSet<String>, s2: &BTreeSet<String>) -> bool {
    if s1.is_empty() {
        return false;
    }
    if s2.is_empty() {
        return true;
    }
    s1.iter().any(|x| s2.iter().all(|y| prefs.less(x, y)))
}

/// Last-link: compare last defeasible rules; only when both arguments are
/// strict-and-firm at the top do their ordinary premises decide.
pub fn argument_less(prefs: &PreferenceOrder, a: &Argument, b: &Argument) -> bool {
    if a.last_defeasible_rules.is_empty() && b.last_defeasible_rules.is_empty() {
        set_less(prefs, &a.ordinary_premises, &b.ordinary_premises)
    } else {
        set_less(prefs, &a.last_defeasible_rules, &b.last_defeasible_rules)
    }
}

/// Undercuts always defeat; rebuts and undermines defeat unless the
/// attacker is strictly less preferred than the subargument it hits.
pub fn resolve_defeats(attacks: &[Attack], args: &ArgumentSet, prefs: &PreferenceOrder) -> DefeatGraph {
    let mut resolved = Vec::with_capacity(attacks.len());
    let mut defeats = BTreeSet::new();
    for at in attacks {
        let ok = match at.kind {
            AttackKind::Undercut => true,
            AttackKind::Rebut | AttackKind::Undermine => {
                match (args.get(&at.attacker), args.get(&at.target)) {
                    (Some(a), Some(t)) => !argument_less(prefs, a, t),
                    _ => false,
                }
            }
        };
        if ok {
            defeats.insert((at.attacker.clone(), at.attacked.clone()));
        }
        resolved.push((at.clone(), ok));
    }
    DefeatGraph {
        arguments: args.clone(),
        attacks: resolved,
        defeats,
    }
}
