use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use sha2::{Digest, Sha256};

use super::{ArgId, Argument, ArgumentSet};
use crate::error::{Error, Result};
use crate::theory::{GroundTheory, Literal, Premise, Rule};

/// Default cap on constructed arguments.
pub const DEFAULT_MAX_ARGUMENTS: usize = 50_000;

fn structural_id(parts: &[&str]) -> ArgId {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0x1f]);
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn premise_argument(p: &Premise) -> Argument {
    let ordinary = p.is_ordinary();
    Argument {
        id: structural_id(&["premise", &p.id, &p.literal.to_string()]),
        label: p.id.clone(),
        conclusion: p.literal.clone(),
        top_rule: None,
        subarguments: Vec::new(),
        premise_set: BTreeSet::from([p.id.clone()]),
        ordinary_premises: if ordinary { BTreeSet::from([p.id.clone()]) } else { BTreeSet::new() },
        defeasible_rules: BTreeSet::new(),
        last_defeasible_rules: BTreeSet::new(),
        rules: BTreeSet::new(),
        weight: if ordinary { p.confidence } else { 1.0 },
        scheme: None,
    }
}

fn rule_argument(rule: &Rule, subs: &[&Argument]) -> Argument {
    let sub_ids: Vec<ArgId> = subs.iter().map(|a| a.id.clone()).collect();
    let conclusion = rule.head.clone();
    let id = structural_id(&["rule", &rule.id, &conclusion.to_string(), &sub_ids.join(",")]);
    let union = |f: fn(&Argument) -> &BTreeSet<String>| -> BTreeSet<String> {
        subs.iter().flat_map(|a| f(a).iter().cloned()).collect()
    };
    let mut defeasible_rules = union(|a| &a.defeasible_rules);
    let mut rules = union(|a| &a.rules);
    rules.insert(rule.id.clone());
    let last_defeasible_rules = if rule.is_defeasible() {
        defeasible_rules.insert(rule.id.clone());
        BTreeSet::from([rule.id.clone()])
    } else {
        union(|a| &a.last_defeasible_rules)
    };
    let mut weight = subs.iter().map(|a| a.weight).fold(1.0_f64, f64::min);
    if rule.is_defeasible() {
        weight = weight.min(rule.weight);
    }
    Argument {
        id,
        label: String::new(),
        conclusion,
        top_rule: Some(rule.id.clone()),
        subarguments: sub_ids,
        premise_set: union(|a| &a.premise_set),
        ordinary_premises: union(|a| &a.ordinary_premises),
        defeasible_rules,
        last_defeasible_rules,
        rules,
        weight,
        scheme: rule.scheme.clone(),
    }
}

pub fn construct_arguments(gt: &GroundTheory) -> Result<ArgumentSet> {
    construct_arguments_with_cap(gt, DEFAULT_MAX_ARGUMENTS)
}

/// Closes the premises under the rules, semi-naively: each round only
/// builds rule applications that use at least one argument from the
/// previous round. A rule never appears twice on a root-to-leaf path.
pub fn construct_arguments_with_cap(gt: &GroundTheory, cap: usize) -> Result<ArgumentSet> {
    let theory = &gt.theory;
    let mut args: Vec<Argument> = Vec::new();
    let mut seen: HashSet<ArgId> = HashSet::new();
    let mut by_conclusion: HashMap<Literal, Vec<usize>> = HashMap::new();

    let mut push = |a: Argument, args: &mut Vec<Argument>, by_conclusion: &mut HashMap<Literal, Vec<usize>>| -> Result<()> {
        if seen.insert(a.id.clone()) {
            if args.len() >= cap {
                return Err(Error::ArgumentCapExceeded { limit: cap });
            }
            by_conclusion.entry(a.conclusion.clone()).or_default().push(args.len());
            args.push(a);
        }
        Ok(())
    };

    for p in theory.premises.values() {
        push(premise_argument(p), &mut args, &mut by_conclusion)?;
    }

    let mut delta_start = 0usize;
    let mut first_round = true;
    loop {
        let round_end = args.len();
        let mut fresh: Vec<Argument> = Vec::new();
        for rule in theory.rules.values() {
            if rule.body.is_empty() {
                if first_round {
                    fresh.push(rule_argument(rule, &[]));
                }
                continue;
            }
            let candidates: Option<Vec<Vec<usize>>> = rule
                .body
                .iter()
                .map(|l| {
                    by_conclusion
                        .get(l)
                        .map(|v| v.iter().copied().filter(|&i| i < round_end).collect::<Vec<_>>())
                        .filter(|v| !v.is_empty())
                })
                .collect();
            let Some(candidates) = candidates else { continue };
            // position `pivot` takes a new argument, earlier ones old ones
            for pivot in 0..candidates.len() {
                let lists: Vec<Vec<usize>> = candidates
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        c.iter()
                            .copied()
                            .filter(|&i| match j.cmp(&pivot) {
                                std::cmp::Ordering::Less => i < delta_start,
                                std::cmp::Ordering::Equal => i >= delta_start,
                                std::cmp::Ordering::Greater => true,
                            })
                            .collect()
                    })
                    .collect();
                for_each_combination(&lists, &mut |combo| {
                    let subs: Vec<&Argument> = combo.iter().map(|&i| &args[i]).collect();
                    if subs.iter().any(|a| a.rules.contains(&rule.id)) {
                        return Ok(());
                    }
                    fresh.push(rule_argument(rule, &subs));
                    if fresh.len() > cap {
                        return Err(Error::ArgumentCapExceeded { limit: cap });
                    }
                    Ok(())
                })?;
            }
        }
        first_round = false;
        let before = args.len();
        for a in fresh {
            push(a, &mut args, &mut by_conclusion)?;
        }
        if args.len() == before {
            break;
        }
        delta_start = round_end;
    }

    assign_labels(&mut args, gt);
    Ok(ArgumentSet::from_vec(args))
}

fn for_each_combination(
    lists: &[Vec<usize>],
    f: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if lists.iter().any(|l| l.is_empty()) {
        return Ok(());
    }
    let mut idx = vec![0usize; lists.len()];
    let mut combo: Vec<usize> = lists.iter().map(|l| l[0]).collect();
    loop {
        f(&combo)?;
        let mut pos = lists.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                combo[pos] = lists[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            combo[pos] = lists[pos][0];
        }
    }
}

fn assign_labels(args: &mut [Argument], gt: &GroundTheory) {
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, a) in args.iter_mut().enumerate() {
        match &a.top_rule {
            None => {}
            Some(r) => groups.entry(gt.parent(r).to_string()).or_default().push(i),
        }
    }
    for (parent, mut members) in groups {
        if members.len() == 1 {
            args[members[0]].label = parent;
            continue;
        }
        members.sort_by(|&x, &y| {
            (args[x].conclusion.to_string(), &args[x].id).cmp(&(args[y].conclusion.to_string(), &args[y].id))
        });
        for (k, i) in members.into_iter().enumerate() {
            args[i].label = format!("{parent}#{}", k + 1);
        }
    }
}

/// Weight recomputed from the theory: the minimum over the confidences of
/// the ordinary premises and the weights of the defeasible rules the
/// argument uses, 1.0 when there are none.
pub fn argument_weight(a: &Argument, gt: &GroundTheory) -> f64 {
    let premises = a
        .ordinary_premises
        .iter()
        .filter_map(|p| gt.theory.premises.get(p))
        .map(|p| p.confidence);
    let rules = a
        .defeasible_rules
        .iter()
        .filter_map(|r| gt.rule(r))
        .map(|r| r.weight);
    premises.chain(rules).fold(1.0, f64::min)
}
