//! Dung-style abstract argumentation frameworks and labelling semantics.

mod iccma;
mod semantics;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use iccma::{from_iccma, to_iccma};
pub use semantics::{
    acceptance, enumerate_labellings, enumerate_labellings_with_cap, grounded_labelling, DEFAULT_ENUMERATION_CAP,
};

/// Arguments are kept sorted by id; attacks are stored by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgumentationFramework {
    args: Vec<String>,
    index: HashMap<String, usize>,
    attacks: BTreeSet<(usize, usize)>,
    attackers: Vec<Vec<usize>>,
    targets: Vec<Vec<usize>>,
}

impl ArgumentationFramework {
    /// Builds a framework. Duplicate ids and attack pairs collapse; an
    /// attack naming an unknown argument is an error.
    pub fn new<A, S, T>(args: A, attacks: T) -> Result<Self>
    where
        A: IntoIterator<Item = S>,
        S: Into<String>,
        T: IntoIterator<Item = (S, S)>,
    {
        let names: BTreeSet<String> = args.into_iter().map(Into::into).collect();
        let args: Vec<String> = names.into_iter().collect();
        let index: HashMap<String, usize> = args.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        let mut pairs = BTreeSet::new();
        for (from, to) in attacks {
            let (from, to): (String, String) = (from.into(), to.into());
            let f = *index.get(&from).ok_or_else(|| Error::UnknownArgument(from.clone()))?;
            let t = *index.get(&to).ok_or_else(|| Error::UnknownArgument(to.clone()))?;
            pairs.insert((f, t));
        }
        let mut attackers = vec![Vec::new(); args.len()];
        let mut targets = vec![Vec::new(); args.len()];
        for &(f, t) in &pairs {
            attackers[t].push(f);
            targets[f].push(t);
        }
        Ok(ArgumentationFramework {
            args,
            index,
            attacks: pairs,
            attackers,
            targets,
        })
    }

    pub fn empty() -> Self {
        ArgumentationFramework::new(Vec::<String>::new(), Vec::new()).expect("empty framework")
    }

    pub fn args(&self) -> &[String] {
        &self.args
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn contains(&self, arg: &str) -> bool {
        self.index.contains_key(arg)
    }

    pub fn attacks(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.attacks
            .iter()
            .map(|&(f, t)| (self.args[f].as_str(), self.args[t].as_str()))
    }

    pub fn attack_count(&self) -> usize {
        self.attacks.len()
    }

    pub fn attackers_of(&self, arg: &str) -> Vec<&str> {
        self.index
            .get(arg)
            .map(|&i| self.attackers[i].iter().map(|&a| self.args[a].as_str()).collect())
            .unwrap_or_default()
    }

    pub(crate) fn position(&self, arg: &str) -> Option<usize> {
        self.index.get(arg).copied()
    }

    pub(crate) fn attacker_indices(&self, i: usize) -> &[usize] {
        &self.attackers[i]
    }

    pub(crate) fn target_indices(&self, i: usize) -> &[usize] {
        &self.targets[i]
    }

    pub(crate) fn labelling_from(&self, labels: &[Label]) -> Labelling {
        Labelling {
            labels: self.args.iter().cloned().zip(labels.iter().copied()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Label {
    In,
    Out,
    Undec,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::In => "IN",
            Label::Out => "OUT",
            Label::Undec => "UNDEC",
        })
    }
}

/// Total assignment of labels to the arguments of a framework.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Labelling {
    pub labels: BTreeMap<String, Label>,
}

impl Labelling {
    pub fn get(&self, arg: &str) -> Option<Label> {
        self.labels.get(arg).copied()
    }

    pub fn with_label(&self, label: Label) -> BTreeSet<String> {
        self.labels
            .iter()
            .filter(|(_, &l)| l == label)
            .map(|(a, _)| a.clone())
            .collect()
    }

    pub fn in_set(&self) -> BTreeSet<String> {
        self.with_label(Label::In)
    }

    pub fn out_set(&self) -> BTreeSet<String> {
        self.with_label(Label::Out)
    }

    pub fn undec_set(&self) -> BTreeSet<String> {
        self.with_label(Label::Undec)
    }

    /// IN iff every attacker is OUT; OUT iff some attacker is IN; otherwise UNDEC.
    pub fn is_legal_complete(&self, af: &ArgumentationFramework) -> bool {
        if self.labels.len() != af.len() {
            return false;
        }
        af.args().iter().all(|a| {
            let Some(label) = self.get(a) else { return false };
            let attackers: Vec<Option<Label>> = af.attackers_of(a).into_iter().map(|b| self.get(b)).collect();
            let all_out = attackers.iter().all(|l| *l == Some(Label::Out));
            let some_in = attackers.iter().any(|l| *l == Some(Label::In));
            match label {
                Label::In => all_out,
                Label::Out => some_in,
                Label::Undec => !all_out && !some_in,
            }
        })
    }

    /// `IN: a b / OUT: c`, with `/ UNDEC: ...` appended when non-empty.
    pub fn summary(&self) -> String {
        let join = |s: BTreeSet<String>| s.into_iter().collect::<Vec<_>>().join(" ");
        let mut out = format!("IN: {} / OUT: {}", join(self.in_set()), join(self.out_set()));
        let undec = self.undec_set();
        if !undec.is_empty() {
            out.push_str(&format!(" / UNDEC: {}", join(undec)));
        }
        out
    }
}

/// The IN set of a labelling.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Extension {
    pub members: BTreeSet<String>,
}

impl Extension {
    pub fn of(labelling: &Labelling) -> Self {
        Extension {
            members: labelling.in_set(),
        }
    }

    pub fn is_conflict_free(&self, af: &ArgumentationFramework) -> bool {
        af.attacks()
            .all(|(f, t)| !(self.members.contains(f) && self.members.contains(t)))
    }

    /// Conflict-free and defends each member against every attacker.
    pub fn is_admissible(&self, af: &ArgumentationFramework) -> bool {
        self.is_conflict_free(af)
            && self.members.iter().all(|m| {
                af.attackers_of(m).into_iter().all(|attacker| {
                    af.attackers_of(attacker)
                        .into_iter()
                        .any(|defender| self.members.contains(defender))
                })
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Grounded,
    Complete,
    Preferred,
    Stable,
}

impl Semantics {
    pub const ALL: [Semantics; 4] = [
        Semantics::Grounded,
        Semantics::Complete,
        Semantics::Preferred,
        Semantics::Stable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::Grounded => "grounded",
            Semantics::Complete => "complete",
            Semantics::Preferred => "preferred",
            Semantics::Stable => "stable",
        }
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Semantics::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| format!("unknown semantics `{s}` (expected grounded, complete, preferred or stable)"))
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Credulous,
    Skeptical,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "credulous" => Ok(Mode::Credulous),
            "skeptical" => Ok(Mode::Skeptical),
            _ => Err(format!("unknown acceptance mode `{s}`")),
        }
    }
}
