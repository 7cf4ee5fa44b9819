//! Structured arguments built from a ground theory, the attacks between
//! them, and their resolution into defeats under a preference order.
//!
//! Attacks follow the usual three forms: a *rebut* contradicts the
//! conclusion of a defeasible inference, an *undermine* contradicts an
//! ordinary premise, and an *undercut* concludes `~applicable(r)` for a
//! defeasible rule `r`. Only rebuts and undermines consult preferences
//! (last-link principle, elitist set comparison).

mod attack;
mod construct;
mod export;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::af::ArgumentationFramework;
use crate::theory::Literal;

pub use attack::{argument_less, compute_attacks, resolve_defeats, set_less};
pub use construct::{argument_weight, construct_arguments, construct_arguments_with_cap, DEFAULT_MAX_ARGUMENTS};
pub use export::{arguments_json, defeat_graph_dot};

/// Structural hash id of an argument.
pub type ArgId = String;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Argument {
    pub id: ArgId,
    /// Readable name: the premise id, or the (parent) rule id with a `#n`
    /// suffix when one rule tops several arguments.
    pub label: String,
    pub conclusion: Literal,
    pub top_rule: Option<String>,
    pub subarguments: Vec<ArgId>,
    pub premise_set: BTreeSet<String>,
    pub ordinary_premises: BTreeSet<String>,
    pub defeasible_rules: BTreeSet<String>,
    pub last_defeasible_rules: BTreeSet<String>,
    /// Every rule applied anywhere in the argument, strict ones included.
    pub rules: BTreeSet<String>,
    pub weight: f64,
    pub scheme: Option<String>,
}

impl Argument {
    pub fn is_premise_argument(&self) -> bool {
        self.top_rule.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArgumentSet {
    args: Vec<Argument>,
    index: HashMap<ArgId, usize>,
    /// Transitive subarguments of each argument, itself included.
    closure: Vec<BTreeSet<usize>>,
}

impl ArgumentSet {
    pub(crate) fn from_vec(args: Vec<Argument>) -> Self {
        let index: HashMap<ArgId, usize> = args.iter().enumerate().map(|(i, a)| (a.id.clone(), i)).collect();
        let mut closure: Vec<BTreeSet<usize>> = Vec::with_capacity(args.len());
        for (i, a) in args.iter().enumerate() {
            let mut c = BTreeSet::from([i]);
            for s in &a.subarguments {
                // subarguments always precede their parents
                c.extend(closure[index[s]].iter().copied());
            }
            closure.push(c);
        }
        ArgumentSet { args, index, closure }
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Argument> {
        self.args.iter()
    }

    pub fn get(&self, id: &str) -> Option<&Argument> {
        self.index.get(id).map(|&i| &self.args[i])
    }

    pub fn by_label(&self, label: &str) -> Option<&Argument> {
        self.args.iter().find(|a| a.label == label)
    }

    pub fn concluding<'a>(&'a self, literal: &Literal) -> impl Iterator<Item = &'a Argument> + 'a {
        let literal = literal.clone();
        self.args.iter().filter(move |a| a.conclusion == literal)
    }

    /// Distinct conclusions, sorted by their text.
    pub fn conclusions(&self) -> Vec<Literal> {
        let set: BTreeMap<String, &Literal> = self.args.iter().map(|a| (a.conclusion.to_string(), &a.conclusion)).collect();
        set.into_values().cloned().collect()
    }

    /// All arguments inside `id`, itself included.
    pub fn sub_closure(&self, id: &str) -> Vec<&Argument> {
        self.index
            .get(id)
            .map(|&i| self.closure[i].iter().map(|&j| &self.args[j]).collect())
            .unwrap_or_default()
    }

    pub(crate) fn closure_of(&self, i: usize) -> &BTreeSet<usize> {
        &self.closure[i]
    }

    pub(crate) fn at(&self, i: usize) -> &Argument {
        &self.args[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackKind {
    Rebut,
    Undercut,
    Undermine,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Attack {
    pub attacker: ArgId,
    pub attacked: ArgId,
    pub kind: AttackKind,
    /// Subargument of `attacked` the attack lands on.
    pub target: ArgId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefeatGraph {
    pub arguments: ArgumentSet,
    /// Every attack, paired with whether it succeeds as a defeat.
    pub attacks: Vec<(Attack, bool)>,
    pub defeats: BTreeSet<(ArgId, ArgId)>,
}

impl DefeatGraph {
    pub fn empty() -> Self {
        DefeatGraph {
            arguments: ArgumentSet::default(),
            attacks: Vec::new(),
            defeats: BTreeSet::new(),
        }
    }

    /// Ids of the arguments defeating `id`, sorted.
    pub fn defeaters_of(&self, id: &str) -> Vec<&str> {
        self.defeats
            .iter()
            .filter(|(_, t)| t == id)
            .map(|(f, _)| f.as_str())
            .collect()
    }
}

/// Bijection between framework node ids (argument labels) and argument ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IdMap {
    pub node_to_arg: BTreeMap<String, ArgId>,
    pub arg_to_node: BTreeMap<ArgId, String>,
}

/// Abstract framework over the defeat relation; nodes are named by
/// argument label.
pub fn project_af(dg: &DefeatGraph) -> (ArgumentationFramework, IdMap) {
    let mut map = IdMap::default();
    for a in dg.arguments.iter() {
        map.node_to_arg.insert(a.label.clone(), a.id.clone());
        map.arg_to_node.insert(a.id.clone(), a.label.clone());
    }
    let attacks = dg
        .defeats
        .iter()
        .map(|(f, t)| (map.arg_to_node[f].clone(), map.arg_to_node[t].clone()));
    let af = ArgumentationFramework::new(map.node_to_arg.keys().cloned(), attacks)
        .expect("defeats only relate constructed arguments");
    (af, map)
}
