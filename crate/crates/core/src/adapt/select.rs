use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{sufficiency, DisputeTree, UserProfile, UtilityWeights};
use crate::error::{Error, Result};

/// Trees up to this many nodes are searched exhaustively.
pub const EXACT_LIMIT: usize = 20;
pub const BEAM_WIDTH: usize = 8;

/// Utilities closer than this count as equal, so that rescaling the
/// weights cannot flip a tie through rounding.
const TIE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Features {
    pub clarity: f64,
    pub relevance: f64,
    pub lexical_fit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Exact up to [`EXACT_LIMIT`] nodes, beam search above.
    Auto,
    Exact,
    Beam,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExplanationSelection {
    pub subtree: DisputeTree,
    pub sigma: f64,
    pub sigma_full: f64,
    pub utility: f64,
    pub features: Features,
    pub strategy: Strategy,
}

/// Node budget for cognitive depth `c`.
fn budget(c: f64) -> f64 {
    (3.0 + 12.0 * c).ceil()
}

fn combine(f: &Features, w: &UtilityWeights) -> f64 {
    w.alpha * f.clarity + w.beta * f.relevance + w.gamma * f.lexical_fit
}

/// Clarity = 1 / (1 + nodes over budget); Relevance = share of nodes argued
/// with a preferred scheme, 1 when no node carries a scheme; LexicalFit =
/// 1 − (1 − l) × mean node jargon.
pub fn utility(t: &DisputeTree, u: &UserProfile, w: &UtilityWeights) -> (f64, Features) {
    let n = t.len() as f64;
    let tagged = t.nodes.values().filter(|x| x.scheme.is_some()).count();
    let matching = t
        .nodes
        .values()
        .filter(|x| x.scheme.as_ref().is_some_and(|s| u.preferred_schemes.contains(s)))
        .count();
    let jargon = if t.is_empty() {
        0.0
    } else {
        t.nodes.values().map(|x| x.jargon).sum::<f64>() / n
    };
    let f = Features {
        clarity: 1.0 / (1.0 + (n - budget(u.c)).max(0.0)),
        relevance: if tagged == 0 { 1.0 } else { matching as f64 / n },
        lexical_fit: 1.0 - (1.0 - u.l) * jargon,
    };
    (combine(&f, w), f)
}

pub fn select_explanation(full: &DisputeTree, u: &UserProfile, w: &UtilityWeights) -> Result<ExplanationSelection> {
    select_explanation_with(full, u, w, Strategy::Auto)
}

/// Picks the root-containing, parent-closed subtree with the highest
/// utility among those with σ ≥ τ and |σ − σ_full| ≤ ε. Ties go to fewer
/// nodes, then to the lexicographically smallest id set. Fails with
/// `Insufficient` when the full tree itself falls short of τ; the full tree
/// is always feasible otherwise.
pub fn select_explanation_with(
    full: &DisputeTree,
    u: &UserProfile,
    w: &UtilityWeights,
    strategy: Strategy,
) -> Result<ExplanationSelection> {
    select(full, u, w, strategy, BEAM_WIDTH)
}

/// Beam search with an explicit width. A width of `usize::MAX` keeps every
/// subtree of each size and so searches exhaustively, which lets the beam
/// code be checked against exact enumeration.
pub fn select_explanation_beam(
    full: &DisputeTree,
    u: &UserProfile,
    w: &UtilityWeights,
    width: usize,
) -> Result<ExplanationSelection> {
    select(full, u, w, Strategy::Beam, width.max(1))
}

fn select(
    full: &DisputeTree,
    u: &UserProfile,
    w: &UtilityWeights,
    strategy: Strategy,
    beam_width: usize,
) -> Result<ExplanationSelection> {
    w.validate()?;
    u.validate()?;
    let sigma_full = sufficiency(full);
    if full.is_empty() || sigma_full < w.tau {
        return Err(Error::Insufficient {
            sigma_full,
            tau: w.tau,
        });
    }
    let ctx = Ctx::new(full, u, w, sigma_full);
    let strategy = match strategy {
        Strategy::Auto if full.len() <= EXACT_LIMIT => Strategy::Exact,
        Strategy::Auto => Strategy::Beam,
        s => s,
    };
    let best = match strategy {
        Strategy::Exact => ctx.exact(),
        _ => ctx.beam(beam_width),
    };
    let Some(best) = best else {
        return Err(Error::Insufficient {
            sigma_full,
            tau: w.tau,
        });
    };
    let keep: BTreeSet<usize> = best.members.iter().map(|&i| ctx.ids[i]).collect();
    let subtree = full.restrict(&keep);
    let (utility, features) = utility(&subtree, u, w);
    Ok(ExplanationSelection {
        sigma: sufficiency(&subtree),
        subtree,
        sigma_full,
        utility,
        features,
        strategy,
    })
}

/// The tree flattened into index order (which is breadth-first order) with
/// everything the objective needs precomputed.
struct Ctx {
    ids: Vec<usize>,
    children: Vec<Vec<usize>>,
    base: Vec<f64>,
    preferred: Vec<bool>,
    any_tagged: Vec<bool>,
    jargon: Vec<f64>,
    weights: UtilityWeights,
    profile_c: f64,
    profile_l: f64,
    tau: f64,
    epsilon: f64,
    sigma_full: f64,
}

#[derive(Debug, Clone)]
struct Candidate {
    /// Sorted indices into `Ctx`.
    members: Vec<usize>,
    score: f64,
    feasible: bool,
    violation: f64,
}

impl Ctx {
    fn new(t: &DisputeTree, u: &UserProfile, w: &UtilityWeights, sigma_full: f64) -> Ctx {
        let ids = t.ids();
        let pos: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let nodes: Vec<_> = ids.iter().map(|id| t.node(*id)).collect();
        let total = w.alpha + w.beta + w.gamma;
        Ctx {
            children: nodes.iter().map(|n| n.children.iter().map(|c| pos[c]).collect()).collect(),
            base: nodes.iter().map(|n| n.base).collect(),
            preferred: nodes
                .iter()
                .map(|n| n.scheme.as_ref().is_some_and(|s| u.preferred_schemes.contains(s)))
                .collect(),
            any_tagged: nodes.iter().map(|n| n.scheme.is_some()).collect(),
            jargon: nodes.iter().map(|n| n.jargon).collect(),
            weights: w.scaled(1.0 / total),
            profile_c: u.c,
            profile_l: u.l,
            tau: w.tau,
            epsilon: w.epsilon,
            sigma_full,
            ids,
        }
    }

    fn sigma(&self, inside: &[bool]) -> f64 {
        let mut strength = vec![0.0; self.ids.len()];
        for i in (0..self.ids.len()).rev() {
            if !inside[i] {
                continue;
            }
            strength[i] = self.children[i]
                .iter()
                .filter(|&&c| inside[c])
                .fold(self.base[i], |acc, &c| acc * (1.0 - strength[c]));
        }
        strength[0]
    }

    fn evaluate(&self, members: Vec<usize>) -> Candidate {
        let mut inside = vec![false; self.ids.len()];
        for &m in &members {
            inside[m] = true;
        }
        let n = members.len() as f64;
        let tagged = members.iter().any(|&m| self.any_tagged[m]);
        let matching = members.iter().filter(|&&m| self.preferred[m]).count() as f64;
        let jargon = members.iter().map(|&m| self.jargon[m]).sum::<f64>() / n;
        let f = Features {
            clarity: 1.0 / (1.0 + (n - budget(self.profile_c)).max(0.0)),
            relevance: if tagged { matching / n } else { 1.0 },
            lexical_fit: 1.0 - (1.0 - self.profile_l) * jargon,
        };
        let sigma = self.sigma(&inside);
        let violation = (self.tau - sigma).max(0.0) + ((sigma - self.sigma_full).abs() - self.epsilon).max(0.0);
        Candidate {
            members,
            score: combine(&f, &self.weights),
            feasible: sigma >= self.tau && (sigma - self.sigma_full).abs() <= self.epsilon,
            violation,
        }
    }

    /// Strict preference between two feasible candidates.
    fn better(a: &Candidate, b: &Candidate) -> bool {
        if a.score > b.score + TIE {
            return true;
        }
        if b.score > a.score + TIE {
            return false;
        }
        (a.members.len(), &a.members) < (b.members.len(), &b.members)
    }

    fn offer(best: &mut Option<Candidate>, c: &Candidate) {
        if c.feasible && best.as_ref().is_none_or(|b| Ctx::better(c, b)) {
            *best = Some(c.clone());
        }
    }

    /// Every rooted subtree, generated once each by deciding frontier
    /// nodes in turn (include it and open its children, or drop it).
    fn exact(&self) -> Option<Candidate> {
        let mut best = None;
        let mut members = vec![0usize];
        let mut frontier: Vec<usize> = self.children[0].clone();
        self.enumerate(&mut members, &mut frontier, &mut best);
        best
    }

    fn enumerate(&self, members: &mut Vec<usize>, frontier: &mut Vec<usize>, best: &mut Option<Candidate>) {
        let Some(next) = frontier.pop() else {
            let mut sorted = members.clone();
            sorted.sort_unstable();
            Ctx::offer(best, &self.evaluate(sorted));
            return;
        };
        // leave `next` out
        self.enumerate(members, frontier, best);
        // take `next`
        members.push(next);
        let added = self.children[next].len();
        frontier.extend(self.children[next].iter().copied());
        self.enumerate(members, frontier, best);
        frontier.truncate(frontier.len() - added);
        members.pop();
        frontier.push(next);
    }

    /// Grows subtrees one node at a time, keeping the `width` best of each
    /// size.
    fn beam(&self, width: usize) -> Option<Candidate> {
        let mut best = None;
        let start = self.evaluate(vec![0]);
        Ctx::offer(&mut best, &start);
        let mut beam = vec![start];
        loop {
            let mut next: BTreeMap<Vec<usize>, Candidate> = BTreeMap::new();
            for c in &beam {
                let inside: BTreeSet<usize> = c.members.iter().copied().collect();
                for &m in &c.members {
                    for &child in &self.children[m] {
                        if inside.contains(&child) {
                            continue;
                        }
                        let mut grown = c.members.clone();
                        grown.push(child);
                        grown.sort_unstable();
                        if !next.contains_key(&grown) {
                            let cand = self.evaluate(grown.clone());
                            next.insert(grown, cand);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            let mut ranked: Vec<Candidate> = next.into_values().collect();
            // utility less constraint violation, so near-feasible but useful
            // partial trees survive
            ranked.sort_by(|a, b| {
                (a.violation - a.score)
                    .partial_cmp(&(b.violation - b.score))
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| b.score.partial_cmp(&a.score).unwrap_or(Ordering::Equal))
                    .then_with(|| a.members.cmp(&b.members))
            });
            ranked.truncate(width);
            for c in &ranked {
                Ctx::offer(&mut best, c);
            }
            beam = ranked;
        }
        best
    }
}
