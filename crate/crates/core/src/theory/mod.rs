//! Defeasible theories: the knowledge base every other layer consumes.
//!
//! A [`Theory`] holds premises (axioms and ordinary premises), strict and
//! defeasible rules, and a preference order over rules and ordinary
//! premises. Theories are written in the `.phax` text format, see
//! [`parse_theory`] and [`serialize_theory`].

mod diagnostic;
mod ground;
mod lexer;
mod parser;
mod serialize;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use diagnostic::{Diagnostic, DiagnosticKind, Pos, Severity};
pub use ground::{ground_theory, ground_theory_with_limit, GroundTheory, DEFAULT_MAX_INSTANCES};
pub use parser::{parse_literal, parse_theory, parse_theory_with_positions, ParsedTheory};
pub use serialize::serialize_theory;
pub use validate::validate_theory;

/// Name given to theories whose source carries no `theory` header.
pub const DEFAULT_THEORY_NAME: &str = "untitled";

/// Predicate reserved for rule applicability. An argument concluding
/// `~applicable(r)` undercuts every argument that applies rule `r`.
pub const APPLICABLE: &str = "applicable";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Const(n) | Term::Var(n) => n,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Classifies an identifier: uppercase or `_` initial means variable.
    pub fn from_ident(name: &str) -> Term {
        if is_variable_name(name) {
            Term::Var(name.to_string())
        } else {
            Term::Const(name.to_string())
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn is_variable_name(name: &str) -> bool {
    name.chars()
        .next()
        .map(|c| c.is_ascii_uppercase() || c == '_')
        .unwrap_or(false)
}

pub(crate) fn is_constant_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() || c.is_ascii_digit() => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        }
        _ => false,
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        }
        _ => false,
    }
}

/// A possibly negated flat atom. Negation is classical contrariness only, so
/// double negation collapses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub predicate: String,
    pub args: Vec<Term>,
    pub negated: bool,
}

impl Literal {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Literal {
            predicate: predicate.into(),
            args,
            negated: false,
        }
    }

    /// Ground literal over constants.
    pub fn ground(predicate: &str, consts: &[&str]) -> Self {
        Literal::new(
            predicate,
            consts.iter().map(|c| Term::Const(c.to_string())).collect(),
        )
    }

    pub fn negate(&self) -> Self {
        Literal {
            negated: !self.negated,
            ..self.clone()
        }
    }

    pub fn with_negation(mut self, negated: bool) -> Self {
        self.negated = negated;
        self
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_var())
    }

    pub fn is_contrary_of(&self, other: &Literal) -> bool {
        self.negated != other.negated && self.predicate == other.predicate && self.args == other.args
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter(|t| t.is_var()).map(|t| t.name())
    }

    pub fn substitute(&self, bindings: &BTreeMap<String, String>) -> Literal {
        Literal {
            predicate: self.predicate.clone(),
            negated: self.negated,
            args: self
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => bindings
                        .get(v)
                        .map(|c| Term::Const(c.clone()))
                        .unwrap_or_else(|| t.clone()),
                    c => c.clone(),
                })
                .collect(),
        }
    }

    /// `~applicable(rule)`, the conclusion of an undercutter.
    pub fn not_applicable(rule: &str) -> Literal {
        Literal::ground(APPLICABLE, &[rule]).negate()
    }

    /// The rule named by an `~applicable(r)` literal.
    pub fn undercut_target(&self) -> Option<&str> {
        if self.negated && self.predicate == APPLICABLE && self.args.len() == 1 {
            match &self.args[0] {
                Term::Const(r) => Some(r),
                Term::Var(_) => None,
            }
        } else {
            None
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("~")?;
        }
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                f.write_str(t.name())?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    Strict,
    Defeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub id: String,
    pub kind: RuleKind,
    pub body: Vec<Literal>,
    pub head: Literal,
    pub weight: f64,
    pub scheme: Option<String>,
}

impl Rule {
    pub fn strict(id: impl Into<String>, body: Vec<Literal>, head: Literal) -> Self {
        Rule {
            id: id.into(),
            kind: RuleKind::Strict,
            body,
            head,
            weight: 1.0,
            scheme: None,
        }
    }

    pub fn defeasible(id: impl Into<String>, body: Vec<Literal>, head: Literal, weight: f64) -> Self {
        Rule {
            id: id.into(),
            kind: RuleKind::Defeasible,
            body,
            head,
            weight,
            scheme: None,
        }
    }

    pub fn with_scheme(mut self, scheme: impl Into<String>) -> Self {
        self.scheme = Some(scheme.into());
        self
    }

    pub fn is_defeasible(&self) -> bool {
        self.kind == RuleKind::Defeasible
    }

    /// Sorted, deduplicated variable names of body and head.
    pub fn variables(&self) -> Vec<String> {
        let vars: BTreeSet<&str> = self
            .body
            .iter()
            .chain(std::iter::once(&self.head))
            .flat_map(|l| l.variables())
            .collect();
        vars.into_iter().map(str::to_string).collect()
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.body.iter().chain(std::iter::once(&self.head))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PremiseKind {
    Axiom,
    Ordinary,
}

/// Audience band a piece of display text is written for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    Lay,
    DecisionMaker,
    Professional,
}

impl Band {
    pub const ALL: [Band; 3] = [Band::Lay, Band::DecisionMaker, Band::Professional];

    pub fn as_str(self) -> &'static str {
        match self {
            Band::Lay => "lay",
            Band::DecisionMaker => "decision_maker",
            Band::Professional => "professional",
        }
    }

    pub fn parse(s: &str) -> Option<Band> {
        Band::ALL.into_iter().find(|b| b.as_str() == s)
    }

    /// Band for a domain expertise level.
    pub fn from_expertise(e: f64) -> Band {
        if e < 0.34 {
            Band::Lay
        } else if e < 0.67 {
            Band::DecisionMaker
        } else {
            Band::Professional
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Premise {
    pub id: String,
    pub literal: Literal,
    pub kind: PremiseKind,
    pub confidence: f64,
    /// Lexical difficulty in [0, 1].
    pub jargon: f64,
    pub source: String,
    pub display: BTreeMap<Band, String>,
}

impl Premise {
    pub fn axiom(id: impl Into<String>, literal: Literal) -> Self {
        Premise {
            id: id.into(),
            literal,
            kind: PremiseKind::Axiom,
            confidence: 1.0,
            jargon: 0.0,
            source: String::new(),
            display: BTreeMap::new(),
        }
    }

    pub fn ordinary(id: impl Into<String>, literal: Literal, confidence: f64) -> Self {
        Premise {
            kind: PremiseKind::Ordinary,
            confidence,
            ..Premise::axiom(id, literal)
        }
    }

    pub fn is_ordinary(&self) -> bool {
        self.kind == PremiseKind::Ordinary
    }
}

/// A defeasible theory. Premises and rules are keyed by id, so two theories
/// with the same content compare equal regardless of source order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theory {
    pub name: String,
    pub constants: BTreeSet<String>,
    pub premises: BTreeMap<String, Premise>,
    pub rules: BTreeMap<String, Rule>,
    /// `(higher, lower)` pairs over rule ids and ordinary-premise ids.
    pub preferences: BTreeSet<(String, String)>,
}

impl Default for Theory {
    fn default() -> Self {
        Theory::new(DEFAULT_THEORY_NAME)
    }
}

impl Theory {
    pub fn new(name: impl Into<String>) -> Self {
        Theory {
            name: name.into(),
            constants: BTreeSet::new(),
            premises: BTreeMap::new(),
            rules: BTreeMap::new(),
            preferences: BTreeSet::new(),
        }
    }

    pub fn add_premise(&mut self, premise: Premise) {
        self.collect_constants(&premise.literal);
        self.premises.insert(premise.id.clone(), premise);
    }

    pub fn add_rule(&mut self, rule: Rule) {
        for l in rule.body.iter().chain(std::iter::once(&rule.head)) {
            self.collect_constants(l);
        }
        self.rules.insert(rule.id.clone(), rule);
    }

    pub fn prefer(&mut self, higher: impl Into<String>, lower: impl Into<String>) {
        self.preferences.insert((higher.into(), lower.into()));
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.premises.contains_key(id) || self.rules.contains_key(id)
    }

    pub fn premise_with_literal(&self, literal: &Literal) -> Option<&Premise> {
        self.premises.values().find(|p| &p.literal == literal)
    }

    /// Adds every element of `other`. Fails with the clashing ids if an id is
    /// bound to different content on both sides.
    pub fn merge(&mut self, other: &Theory) -> Result<(), Vec<String>> {
        let mut clashes = Vec::new();
        for (id, p) in &other.premises {
            match self.premises.get(id) {
                Some(existing) if existing != p => clashes.push(id.clone()),
                _ if self.rules.contains_key(id) => clashes.push(id.clone()),
                _ => {}
            }
        }
        for (id, r) in &other.rules {
            match self.rules.get(id) {
                Some(existing) if existing != r => clashes.push(id.clone()),
                _ if self.premises.contains_key(id) => clashes.push(id.clone()),
                _ => {}
            }
        }
        if !clashes.is_empty() {
            return Err(clashes);
        }
        self.constants.extend(other.constants.iter().cloned());
        for p in other.premises.values() {
            self.premises.insert(p.id.clone(), p.clone());
        }
        for r in other.rules.values() {
            self.rules.insert(r.id.clone(), r.clone());
        }
        self.preferences.extend(other.preferences.iter().cloned());
        Ok(())
    }

    pub(crate) fn collect_constants(&mut self, literal: &Literal) {
        for t in &literal.args {
            if let Term::Const(c) = t {
                if !self.constants.contains(c) {
                    self.constants.insert(c.clone());
                }
            }
        }
    }

    /// Recomputes the constant set as declared-plus-referenced.
    pub fn recollect_constants(&mut self) {
        let lits: Vec<Literal> = self
            .premises
            .values()
            .map(|p| p.literal.clone())
            .chain(self.rules.values().flat_map(|r| r.literals().cloned().collect::<Vec<_>>()))
            .collect();
        for l in &lits {
            self.collect_constants(l);
        }
    }
}

/// Transitive closure of a theory's preference pairs.
///
/// Ground rule instances compare through their parent rule id, so
/// preferences written against a rule schema apply to all of its instances.
#[derive(Debug, Clone, Default)]
pub struct PreferenceOrder {
    above: BTreeSet<(String, String)>,
    origin: BTreeMap<String, String>,
}

impl PreferenceOrder {
    pub fn new(pairs: &BTreeSet<(String, String)>) -> Self {
        let mut above: BTreeSet<(String, String)> = pairs.clone();
        loop {
            let mut added = Vec::new();
            for (a, b) in &above {
                for (c, d) in above.range((b.clone(), String::new())..) {
                    if c != b {
                        break;
                    }
                    if !above.contains(&(a.clone(), d.clone())) {
                        added.push((a.clone(), d.clone()));
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            above.extend(added);
        }
        PreferenceOrder {
            above,
            origin: BTreeMap::new(),
        }
    }

    pub fn with_origin(mut self, origin: BTreeMap<String, String>) -> Self {
        self.origin = origin;
        self
    }

    fn resolve<'a>(&'a self, id: &'a str) -> &'a str {
        self.origin.get(id).map(String::as_str).unwrap_or(id)
    }

    /// `lower` is strictly below `higher`.
    pub fn less(&self, lower: &str, higher: &str) -> bool {
        let (lo, hi) = (self.resolve(lower), self.resolve(higher));
        self.above.contains(&(hi.to_string(), lo.to_string()))
    }

    /// Ids on a preference cycle, if any.
    pub fn cycle_members(&self) -> BTreeSet<String> {
        self.above
            .iter()
            .filter(|(a, b)| a == b)
            .map(|(a, _)| a.clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_negation_collapses() {
        let p = Literal::ground("prefer", &["y"]);
        assert_eq!(p.negate().negate(), p);
        assert!(p.is_contrary_of(&p.negate()));
        assert!(!p.is_contrary_of(&p));
    }

    #[test]
    fn literal_display() {
        let l = Literal::new("ambiguity", vec![Term::from_ident("Y"), Term::from_ident("clinical")]).negate();
        assert_eq!(l.to_string(), "~ambiguity(Y,clinical)");
        assert_eq!(Literal::ground("rain", &[]).to_string(), "rain");
    }

    #[test]
    fn preference_closure_is_transitive() {
        let mut pairs = BTreeSet::new();
        pairs.insert(("a".to_string(), "b".to_string()));
        pairs.insert(("b".to_string(), "c".to_string()));
        let order = PreferenceOrder::new(&pairs);
        assert!(order.less("c", "a"));
        assert!(!order.less("a", "c"));
        assert!(order.cycle_members().is_empty());
    }

    #[test]
    fn preference_cycle_detected() {
        let mut pairs = BTreeSet::new();
        pairs.insert(("r1".to_string(), "r2".to_string()));
        pairs.insert(("r2".to_string(), "r1".to_string()));
        let members = PreferenceOrder::new(&pairs).cycle_members();
        assert_eq!(members.into_iter().collect::<Vec<_>>(), vec!["r1", "r2"]);
    }

    #[test]
    fn band_thresholds() {
        assert_eq!(Band::from_expertise(0.1), Band::Lay);
        assert_eq!(Band::from_expertise(0.34), Band::DecisionMaker);
        assert_eq!(Band::from_expertise(0.5), Band::DecisionMaker);
        assert_eq!(Band::from_expertise(0.67), Band::Professional);
    }
}
