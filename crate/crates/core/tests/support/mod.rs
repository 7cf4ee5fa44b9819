//! Independent reference implementations used as test oracles, plus seeded
//! generators for random inputs. Nothing here calls the code under test
//! except to read its plain data types.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use phax_core::adapt::{DisputeTree, Role, UserProfile, UtilityWeights};
use phax_core::af::{ArgumentationFramework, Label, Semantics};
use phax_core::theory::{Literal, Premise, Rule, Theory};
use rand::Rng;

// ---------------------------------------------------------------------------
// Abstract frameworks

/// Random framework over `a0..` with each ordered pair (self-attacks
/// included) present with probability `p`.
pub fn random_af<R: Rng>(rng: &mut R, max_args: usize, p: f64) -> ArgumentationFramework {
    let n = rng.gen_range(1..=max_args);
    let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    let mut attacks = Vec::new();
    for f in &names {
        for t in &names {
            if rng.gen_bool(p) {
                attacks.push((f.clone(), t.clone()));
            }
        }
    }
    ArgumentationFramework::new(names, attacks).unwrap()
}

/// Every labelling of `semantics`, found by trying all 3^n assignments.
/// Each labelling is the label vector in `af.args()` order.
pub fn naive_labellings(af: &ArgumentationFramework, semantics: Semantics) -> BTreeSet<Vec<Label>> {
    let args = af.args();
    let n = args.len();
    let pos: BTreeMap<&str, usize> = args.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    let attackers: Vec<Vec<usize>> = args
        .iter()
        .map(|a| af.attackers_of(a).iter().map(|x| pos[x]).collect())
        .collect();
    const LABELS: [Label; 3] = [Label::In, Label::Out, Label::Undec];

    let mut complete = Vec::new();
    let mut lab = vec![Label::In; n];
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        for slot in lab.iter_mut() {
            *slot = LABELS[c % 3];
            c /= 3;
        }
        let legal = (0..n).all(|i| {
            let all_out = attackers[i].iter().all(|&a| lab[a] == Label::Out);
            let some_in = attackers[i].iter().any(|&a| lab[a] == Label::In);
            match lab[i] {
                Label::In => all_out,
                Label::Out => some_in,
                Label::Undec => !all_out && !some_in,
            }
        });
        if legal {
            complete.push(lab.clone());
        }
    }

    let in_set = |l: &Vec<Label>| -> BTreeSet<usize> { (0..n).filter(|&i| l[i] == Label::In).collect() };
    match semantics {
        Semantics::Complete => complete.into_iter().collect(),
        Semantics::Stable => complete.into_iter().filter(|l| !l.contains(&Label::Undec)).collect(),
        Semantics::Grounded => {
            let min = complete
                .iter()
                .find(|l| complete.iter().all(|o| in_set(l).is_subset(&in_set(o))))
                .expect("a least complete labelling exists")
                .clone();
            BTreeSet::from([min])
        }
        Semantics::Preferred => complete
            .iter()
            .filter(|l| {
                let s = in_set(l);
                !complete.iter().any(|o| {
                    let t = in_set(o);
                    s.is_subset(&t) && s != t
                })
            })
            .cloned()
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// Structured arguments

/// Random propositional theory over atoms `q0..q4`: ordinary premises and
/// axioms on distinct literals, strict and defeasible rules, occasional
/// undercutting rules, and acyclic preferences among defeasible rules and
/// among ordinary premises.
pub fn random_theory<R: Rng>(rng: &mut R) -> Theory {
    let lit = |rng: &mut R| {
        let mut l = Literal::new(format!("q{}", rng.gen_range(0..5)), vec![]);
        l.negated = rng.gen_bool(0.4);
        l
    };
    let mut t = Theory::new("random");
    let mut seen = BTreeSet::new();
    for i in 0..rng.gen_range(1..=4) {
        let l = lit(rng);
        if !seen.insert(l.to_string()) {
            continue;
        }
        let p = if rng.gen_bool(0.3) {
            Premise::axiom(format!("p{i}"), l)
        } else {
            Premise::ordinary(format!("p{i}"), l, rng.gen_range(1..=10) as f64 / 10.0)
        };
        t.add_premise(p);
    }
    let n_rules = rng.gen_range(1..=5);
    let mut defeasible: Vec<String> = Vec::new();
    for i in 0..n_rules {
        let id = format!("r{i}");
        let body: Vec<Literal> = (0..rng.gen_range(0..=2)).map(|_| lit(rng)).collect();
        let head = if !defeasible.is_empty() && rng.gen_bool(0.15) {
            let target = &defeasible[rng.gen_range(0..defeasible.len())];
            Literal::not_applicable(target)
        } else {
            lit(rng)
        };
        let rule = if body.is_empty() || rng.gen_bool(0.6) {
            defeasible.push(id.clone());
            Rule::defeasible(id, body, head, rng.gen_range(1..=10) as f64 / 10.0)
        } else {
            Rule::strict(id, body, head)
        };
        t.add_rule(rule);
    }
    // higher index preferred, so no cycles
    for (i, hi) in defeasible.iter().enumerate() {
        for lo in &defeasible[..i] {
            if rng.gen_bool(0.3) {
                t.prefer(hi.clone(), lo.clone());
            }
        }
    }
    let ordinary: Vec<String> = t.premises.values().filter(|p| p.is_ordinary()).map(|p| p.id.clone()).collect();
    for (i, hi) in ordinary.iter().enumerate() {
        for lo in &ordinary[..i] {
            if rng.gen_bool(0.3) {
                t.prefer(hi.clone(), lo.clone());
            }
        }
    }
    t
}

#[derive(Debug, Clone)]
pub struct RefArg {
    /// `P:<premise>` or `R:<rule>(<sub key>,...)`.
    pub key: String,
    pub conclusion: Literal,
    pub top_rule: Option<String>,
    pub top_defeasible: bool,
    pub ordinary_premise: bool,
    pub subs: Vec<usize>,
    pub ordinary: BTreeSet<String>,
    pub last_defeasible: BTreeSet<String>,
    pub rules: BTreeSet<String>,
}

/// Arguments by naive fixpoint: every premise, then every application of a
/// rule to existing arguments for its body that does not reuse the rule.
pub fn reference_arguments(t: &Theory) -> Vec<RefArg> {
    let mut out: Vec<RefArg> = t
        .premises
        .values()
        .map(|p| RefArg {
            key: format!("P:{}", p.id),
            conclusion: p.literal.clone(),
            top_rule: None,
            top_defeasible: false,
            ordinary_premise: p.is_ordinary(),
            subs: vec![],
            ordinary: if p.is_ordinary() { BTreeSet::from([p.id.clone()]) } else { BTreeSet::new() },
            last_defeasible: BTreeSet::new(),
            rules: BTreeSet::new(),
        })
        .collect();
    let mut keys: BTreeSet<String> = out.iter().map(|a| a.key.clone()).collect();
    loop {
        let mut added = false;
        for r in t.rules.values() {
            let options: Vec<Vec<usize>> = r
                .body
                .iter()
                .map(|l| {
                    (0..out.len())
                        .filter(|&i| out[i].conclusion == *l && !out[i].rules.contains(&r.id))
                        .collect()
                })
                .collect();
            let mut combos: Vec<Vec<usize>> = vec![vec![]];
            for opts in &options {
                combos = combos
                    .iter()
                    .flat_map(|c| {
                        opts.iter().map(move |&o| {
                            let mut c = c.clone();
                            c.push(o);
                            c
                        })
                    })
                    .collect();
            }
            for subs in combos {
                let sub_keys: Vec<&str> = subs.iter().map(|&s| out[s].key.as_str()).collect();
                let key = format!("R:{}({})", r.id, sub_keys.join(","));
                if keys.contains(&key) {
                    continue;
                }
                let mut ordinary = BTreeSet::new();
                let mut rules = BTreeSet::from([r.id.clone()]);
                let mut last = BTreeSet::new();
                for &s in &subs {
                    ordinary.extend(out[s].ordinary.iter().cloned());
                    rules.extend(out[s].rules.iter().cloned());
                    last.extend(out[s].last_defeasible.iter().cloned());
                }
                if r.is_defeasible() {
                    last = BTreeSet::from([r.id.clone()]);
                }
                keys.insert(key.clone());
                out.push(RefArg {
                    key,
                    conclusion: r.head.clone(),
                    top_rule: Some(r.id.clone()),
                    top_defeasible: r.is_defeasible(),
                    ordinary_premise: false,
                    subs,
                    ordinary,
                    last_defeasible: last,
                    rules,
                });
                added = true;
            }
        }
        if !added {
            return out;
        }
    }
}

fn transitive(prefs: &BTreeSet<(String, String)>) -> BTreeSet<(String, String)> {
    let mut c = prefs.clone();
    loop {
        let next: BTreeSet<(String, String)> = c
            .iter()
            .flat_map(|(a, b)| c.iter().filter(move |(x, _)| x == b).map(move |(_, d)| (a.clone(), d.clone())))
            .collect();
        let before = c.len();
        c.extend(next);
        if c.len() == before {
            return c;
        }
    }
}

/// Elitist comparison: `xs` is strictly weaker than `ys`.
fn weaker(xs: &BTreeSet<String>, ys: &BTreeSet<String>, above: &BTreeSet<(String, String)>) -> bool {
    if xs.is_empty() {
        return false;
    }
    if ys.is_empty() {
        return true;
    }
    xs.iter().any(|x| ys.iter().all(|y| above.contains(&(y.clone(), x.clone()))))
}

/// Defeats as (attacker key, attacked key) pairs, from the textbook
/// definitions of restricted rebut, undermine and undercut with last-link
/// preferences.
pub fn reference_defeats(t: &Theory, args: &[RefArg]) -> BTreeSet<(String, String)> {
    let above = transitive(&t.preferences);
    let closure = |i: usize| -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![i];
        while let Some(j) = stack.pop() {
            if seen.insert(j) {
                stack.extend(args[j].subs.iter().copied());
            }
        }
        seen
    };
    let less = |a: &RefArg, b: &RefArg| {
        if a.last_defeasible.is_empty() && b.last_defeasible.is_empty() {
            weaker(&a.ordinary, &b.ordinary, &above)
        } else {
            weaker(&a.last_defeasible, &b.last_defeasible, &above)
        }
    };
    let mut out = BTreeSet::new();
    for a in args {
        for (j, b) in args.iter().enumerate() {
            for s in closure(j) {
                let sub = &args[s];
                let contrary = a.conclusion == sub.conclusion.negate();
                let undercut = sub.top_defeasible
                    && a.conclusion == Literal::not_applicable(sub.top_rule.as_deref().unwrap());
                let rebut = sub.top_defeasible && contrary;
                let undermine = sub.ordinary_premise && contrary;
                if undercut || ((rebut || undermine) && !less(a, sub)) {
                    out.insert((a.key.clone(), b.key.clone()));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Dispute trees and selection

pub const SCHEMES: [&str; 3] = ["expert_opinion", "analogy", "ethical_value"];

/// Random tree of exactly `n` nodes with random bases, jargon and scheme
/// tags.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> DisputeTree {
    let parents: Vec<usize> = (1..n).map(|i| rng.gen_range(0..i)).collect();
    let bases: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..=1.0)).collect();
    let mut t = DisputeTree::synthetic(&parents, &bases);
    for node in t.nodes.values_mut() {
        node.jargon = rng.gen_range(0.0..=1.0);
        node.scheme = if rng.gen_bool(0.5) {
            Some(SCHEMES[rng.gen_range(0..SCHEMES.len())].to_string())
        } else {
            None
        };
    }
    t
}

pub fn random_profile<R: Rng>(rng: &mut R) -> UserProfile {
    let preferred = SCHEMES.iter().filter(|_| rng.gen_bool(0.5)).map(|s| s.to_string()).collect();
    UserProfile {
        name: "random".into(),
        e: rng.gen_range(0.0..=1.0),
        l: rng.gen_range(0.0..=1.0),
        c: rng.gen_range(0.0..=1.0),
        preferred_schemes: preferred,
    }
}

/// σ restricted to `keep`, straight from the recursion.
pub fn reference_sigma(t: &DisputeTree, keep: &BTreeSet<usize>) -> f64 {
    fn strength(t: &DisputeTree, keep: &BTreeSet<usize>, v: usize) -> f64 {
        let node = &t.nodes[&v];
        node.children
            .iter()
            .filter(|c| keep.contains(c))
            .fold(node.base, |acc, &c| acc * (1.0 - strength(t, keep, c)))
    }
    strength(t, keep, t.root)
}

pub fn reference_utility(t: &DisputeTree, keep: &BTreeSet<usize>, u: &UserProfile, w: &UtilityWeights) -> f64 {
    let n = keep.len() as f64;
    let budget = (3.0 + 12.0 * u.c).ceil();
    let clarity = 1.0 / (1.0 + (n - budget).max(0.0));
    let nodes: Vec<_> = keep.iter().map(|i| &t.nodes[i]).collect();
    let tagged = nodes.iter().filter(|x| x.scheme.is_some()).count();
    let relevance = if tagged == 0 {
        1.0
    } else {
        nodes
            .iter()
            .filter(|x| x.scheme.as_ref().is_some_and(|s| u.preferred_schemes.contains(s)))
            .count() as f64
            / n
    };
    let jargon = nodes.iter().map(|x| x.jargon).sum::<f64>() / n;
    let fit = 1.0 - (1.0 - u.l) * jargon;
    (w.alpha * clarity + w.beta * relevance + w.gamma * fit) / (w.alpha + w.beta + w.gamma)
}

/// Best feasible subtree by trying every node subset that keeps the root
/// and is closed under parents. `None` when σ_full < τ.
pub fn reference_selection(t: &DisputeTree, u: &UserProfile, w: &UtilityWeights) -> Option<BTreeSet<usize>> {
    let ids: Vec<usize> = t.nodes.keys().copied().filter(|&i| i != t.root).collect();
    let all: BTreeSet<usize> = t.nodes.keys().copied().collect();
    let full = reference_sigma(t, &all);
    if full < w.tau {
        return None;
    }
    let mut best: Option<(f64, BTreeSet<usize>)> = None;
    for mask in 0u64..(1u64 << ids.len()) {
        let mut keep = BTreeSet::from([t.root]);
        keep.extend(ids.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i));
        if !keep.iter().all(|i| t.nodes[i].parent.is_none_or(|p| keep.contains(&p))) {
            continue;
        }
        let s = reference_sigma(t, &keep);
        if s < w.tau || (s - full).abs() > w.epsilon {
            continue;
        }
        let util = reference_utility(t, &keep, u, w);
        let better = match &best {
            None => true,
            Some((bu, bk)) => {
                if (util - bu).abs() > 1e-9 {
                    util > *bu
                } else if keep.len() != bk.len() {
                    keep.len() < bk.len()
                } else {
                    keep < *bk
                }
            }
        };
        if better {
            best = Some((util, keep));
        }
    }
    best.map(|(_, k)| k)
}

pub fn roles_alternate(t: &DisputeTree) -> bool {
    t.nodes.values().all(|n| {
        let expected = if n.depth % 2 == 0 { Role::Proponent } else { Role::Opponent };
        n.role == expected
    })
}

// ---------------------------------------------------------------------------
// DSL text

const PIECES: [&str; 18] = [
    ".", ",", ":", "=>", "->", "~", "(", ")", "[", "]", "=", "X", "pref", "axiom", " ", "\n", "0.5", "\"",
];

/// Deletes, duplicates, swaps or inserts small pieces of text.
pub fn mutate_source<R: Rng>(src: &str, rng: &mut R) -> String {
    let mut s: Vec<char> = src.chars().collect();
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..=s.len());
        match rng.gen_range(0..4) {
            0 if i < s.len() => {
                let j = (i + rng.gen_range(1..6)).min(s.len());
                s.drain(i..j);
            }
            1 if i < s.len() => {
                let j = (i + rng.gen_range(1..12)).min(s.len());
                let chunk: Vec<char> = s[i..j].to_vec();
                let k = rng.gen_range(0..=s.len());
                s.splice(k..k, chunk);
            }
            2 if i + 1 < s.len() => s.swap(i, i + 1),
            _ => {
                let piece = PIECES[rng.gen_range(0..PIECES.len())];
                s.splice(i..i, piece.chars());
            }
        }
    }
    s.into_iter().collect()
}
