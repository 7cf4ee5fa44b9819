use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::aspic::{ArgId, DefeatGraph};
use crate::error::{Error, Result};
use crate::theory::Theory;

pub const DEFAULT_MAX_DEPTH: usize = 6;

/// Refuse to build dispute trees larger than this.
pub const MAX_TREE_NODES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Proponent,
    Opponent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeNode {
    pub id: usize,
    pub role: Role,
    pub argument: ArgId,
    pub label: String,
    /// Base score: the argument's weight.
    pub base: f64,
    pub scheme: Option<String>,
    /// Mean jargon of the argument's premises.
    pub jargon: f64,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    pub depth: usize,
}

/// Proponent/opponent tree rooted at one argument. Node ids are assigned
/// breadth-first from 0 (the root), so a child's id always exceeds its
/// parent's; subtrees keep the ids of the tree they were cut from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisputeTree {
    pub root: usize,
    pub nodes: BTreeMap<usize, TreeNode>,
}

impl DisputeTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[&id]
    }

    pub fn root_node(&self) -> &TreeNode {
        self.node(self.root)
    }

    pub fn ids(&self) -> Vec<usize> {
        self.nodes.keys().copied().collect()
    }

    /// Levels in the tree.
    pub fn height(&self) -> usize {
        self.nodes.values().map(|n| n.depth + 1).max().unwrap_or(0)
    }

    /// The part of the tree made of `keep`, which must contain the root and
    /// be closed under parents.
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> DisputeTree {
        let nodes = self
            .nodes
            .iter()
            .filter(|(id, _)| keep.contains(id))
            .map(|(&id, n)| {
                let mut n = n.clone();
                n.children.retain(|c| keep.contains(c));
                (id, n)
            })
            .collect();
        DisputeTree { root: self.root, nodes }
    }

    pub fn is_ancestor_closed(&self, keep: &BTreeSet<usize>) -> bool {
        keep.contains(&self.root)
            && keep.iter().all(|id| match self.nodes.get(id) {
                Some(n) => n.parent.is_none_or(|p| keep.contains(&p)),
                None => false,
            })
    }

    /// A tree with given shape and scores, detached from any theory. Node
    /// `i > 0` hangs under `parents[i - 1]`, which must be smaller than `i`.
    pub fn synthetic(parents: &[usize], bases: &[f64]) -> DisputeTree {
        assert_eq!(parents.len() + 1, bases.len(), "one base per node");
        let mut nodes: BTreeMap<usize, TreeNode> = BTreeMap::new();
        for (i, &base) in bases.iter().enumerate() {
            let parent = if i == 0 { None } else { Some(parents[i - 1]) };
            let depth = parent.map(|p| {
                assert!(p < i, "parents precede children");
                nodes[&p].depth + 1
            });
            let depth = depth.unwrap_or(0);
            if let Some(p) = parent {
                nodes.get_mut(&p).expect("parent exists").children.push(i);
            }
            nodes.insert(
                i,
                TreeNode {
                    id: i,
                    role: if depth % 2 == 0 { Role::Proponent } else { Role::Opponent },
                    argument: format!("n{i}"),
                    label: format!("n{i}"),
                    base,
                    scheme: None,
                    jargon: 0.0,
                    children: Vec::new(),
                    parent,
                    depth,
                },
            );
        }
        DisputeTree { root: 0, nodes }
    }
}

fn mean_jargon(theory: &Theory, premises: &BTreeSet<String>) -> f64 {
    let js: Vec<f64> = premises.iter().filter_map(|p| theory.premises.get(p)).map(|p| p.jargon).collect();
    if js.is_empty() {
        0.0
    } else {
        js.iter().sum::<f64>() / js.len() as f64
    }
}

/// Every defeater of a node's argument becomes its child unless the
/// defeater already occurs on the path from the root. Nodes deeper than
/// `max_depth` levels are cut. Children are ordered by argument id.
pub fn build_dispute_tree(dg: &DefeatGraph, theory: &Theory, root: &str, max_depth: usize) -> Result<DisputeTree> {
    if dg.arguments.get(root).is_none() {
        return Err(Error::UnknownArgument(root.to_string()));
    }
    let max_depth = max_depth.max(1);
    let mut defeaters: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (f, t) in &dg.defeats {
        defeaters.entry(t.as_str()).or_default().push(f.as_str());
    }

    let mut nodes: BTreeMap<usize, TreeNode> = BTreeMap::new();
    let make = |id: usize, arg: &str, parent: Option<usize>, depth: usize| -> TreeNode {
        let a = dg.arguments.get(arg).expect("defeaters are arguments");
        TreeNode {
            id,
            role: if depth % 2 == 0 { Role::Proponent } else { Role::Opponent },
            argument: a.id.clone(),
            label: a.label.clone(),
            base: a.weight,
            scheme: a.scheme.clone(),
            jargon: mean_jargon(theory, &a.premise_set),
            children: Vec::new(),
            parent,
            depth,
        }
    };
    nodes.insert(0, make(0, root, None, 0));
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let depth = nodes[&id].depth;
        if depth + 1 >= max_depth {
            continue;
        }
        let mut on_branch = BTreeSet::new();
        let mut cur = Some(id);
        while let Some(c) = cur {
            on_branch.insert(nodes[&c].argument.clone());
            cur = nodes[&c].parent;
        }
        let arg = nodes[&id].argument.clone();
        for d in defeaters.get(arg.as_str()).into_iter().flatten() {
            if on_branch.contains(*d) {
                continue;
            }
            let child = nodes.len();
            if child >= MAX_TREE_NODES {
                return Err(Error::TreeTooLarge { limit: MAX_TREE_NODES });
            }
            nodes.insert(child, make(child, d, Some(id), depth + 1));
            nodes.get_mut(&id).expect("present").children.push(child);
            queue.push_back(child);
        }
    }
    Ok(DisputeTree { root: 0, nodes })
}

/// strength(v) = base(v) × ∏ (1 − strength(child)); σ is the root's strength.
pub fn sufficiency(t: &DisputeTree) -> f64 {
    if t.is_empty() {
        return 0.0;
    }
    let mut strength: BTreeMap<usize, f64> = BTreeMap::new();
    // children have larger ids, so descending order visits them first
    for (&id, n) in t.nodes.iter().rev() {
        let s = n
            .children
            .iter()
            .fold(n.base, |acc, c| acc * (1.0 - strength[c]));
        strength.insert(id, s);
    }
    strength[&t.root]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::Analysis;
    use crate::theory::parse_theory;

    #[test]
    fn hand_computed_sigma() {
        assert_eq!(sufficiency(&DisputeTree::synthetic(&[], &[0.8])), 0.8);
        assert_eq!(sufficiency(&DisputeTree::synthetic(&[0], &[1.0, 0.6])), 0.4);
        assert_eq!(sufficiency(&DisputeTree::synthetic(&[0, 1], &[1.0, 0.9, 1.0])), 1.0);
    }

    #[test]
    fn paper_tree_has_one_opponent() {
        let src = crate::fixtures::SIMPLIFICATION.replace("pref r2 > r1.", "");
        let an = Analysis::new(&parse_theory(&src).unwrap()).unwrap();
        let root = an.defeats.arguments.by_label("r1").unwrap().id.clone();
        let t = build_dispute_tree(&an.defeats, &an.theory, &root, DEFAULT_MAX_DEPTH).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.node(1).label, "r2");
        assert_eq!(t.node(1).role, Role::Opponent);
        assert!((sufficiency(&t) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn chain_alternates_roles() {
        let src = "premise pa: p.\npremise pb: q.\npremise pc: r.\n\
                   defeasible ra: p => s.\n\
                   defeasible rb: q => ~applicable(ra).\n\
                   defeasible rc: r => ~applicable(rb).\n";
        let an = Analysis::new(&parse_theory(src).unwrap()).unwrap();
        let root = an.defeats.arguments.by_label("ra").unwrap().id.clone();
        let t = build_dispute_tree(&an.defeats, &an.theory, &root, DEFAULT_MAX_DEPTH).unwrap();
        let labels: Vec<&str> = t.nodes.values().map(|n| n.label.as_str()).collect();
        assert_eq!(labels, vec!["ra", "rb", "rc"]);
        let roles: Vec<Role> = t.nodes.values().map(|n| n.role).collect();
        assert_eq!(roles, vec![Role::Proponent, Role::Opponent, Role::Proponent]);
        assert_eq!(t.height(), 3);
        let shallow = build_dispute_tree(&an.defeats, &an.theory, &root, 2).unwrap();
        assert_eq!(shallow.len(), 2);
    }

    #[test]
    fn undefeated_argument_is_single_node() {
        let an = Analysis::new(&parse_theory("premise a: x.").unwrap()).unwrap();
        let root = an.defeats.arguments.by_label("a").unwrap().id.clone();
        let t = build_dispute_tree(&an.defeats, &an.theory, &root, 6).unwrap();
        assert_eq!(t.len(), 1);
        assert!(build_dispute_tree(&an.defeats, &an.theory, "nope", 6).is_err());
    }

    #[test]
    fn restriction_keeps_ids() {
        let t = DisputeTree::synthetic(&[0, 0, 1], &[1.0, 0.5, 0.5, 0.5]);
        let keep = BTreeSet::from([0, 2]);
        assert!(t.is_ancestor_closed(&keep));
        assert!(!t.is_ancestor_closed(&BTreeSet::from([0, 3])));
        let sub = t.restrict(&keep);
        assert_eq!(sub.ids(), vec![0, 2]);
        assert_eq!(sub.node(0).children, vec![2]);
    }
}
