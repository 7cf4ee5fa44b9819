//! Recursive-descent parser for the `.phax` theory format.
//!
//! ```text
//! theory simplification.
//! const heart_attack, myocardial_infarction.
//! axiom a1: eligible(adults).
//! premise p3: ambiguity(heart_attack, clinical) [confidence=0.6, jargon=0.4].
//! strict s1: eligible(X) -> offered(X).
//! defeasible r2: ambiguity(Y, clinical) => ~prefer(Y) [weight=0.9].
//! pref r2 > r1.
//! ```
//!
//! Every statement ends with `.`; `%` starts a line comment. After a syntax
//! error the parser resynchronises at the next `.` so one pass reports as
//! many problems as possible.

use std::collections::{BTreeMap, BTreeSet};

use super::diagnostic::{Diagnostic, DiagnosticKind, Pos};
use super::lexer::{tokenize, Tok, Token};
use super::validate::validate_theory;
use super::{is_constant_name, Band, Literal, Premise, PremiseKind, Rule, RuleKind, Term, Theory};

/// A theory plus the source position of each named element.
#[derive(Debug, Clone)]
pub struct ParsedTheory {
    pub theory: Theory,
    pub positions: BTreeMap<String, Pos>,
    pub preference_positions: BTreeMap<(String, String), Pos>,
}

/// Parses and validates `.phax` source.
pub fn parse_theory(src: &str) -> Result<Theory, Vec<Diagnostic>> {
    parse_theory_with_positions(src).map(|p| p.theory)
}

pub fn parse_theory_with_positions(src: &str) -> Result<ParsedTheory, Vec<Diagnostic>> {
    let (tokens, mut diags) = tokenize(src);
    let mut parser = Parser {
        tokens,
        idx: 0,
        diags: Vec::new(),
        theory: Theory::default(),
        has_header: false,
        positions: BTreeMap::new(),
        preference_positions: BTreeMap::new(),
    };
    parser.parse_all();
    diags.append(&mut parser.diags);
    if !diags.is_empty() {
        diags.sort_by_key(|d| d.pos);
        return Err(diags);
    }

    let parsed = ParsedTheory {
        theory: parser.theory,
        positions: parser.positions,
        preference_positions: parser.preference_positions,
    };
    let mut invalid = validate_theory(&parsed.theory);
    if invalid.is_empty() {
        return Ok(parsed);
    }
    for d in &mut invalid {
        d.pos = locate(d, &parsed);
    }
    invalid.sort_by_key(|d| d.pos);
    Err(invalid)
}

/// Parses a single literal such as `~prefer(heart_attack)`; a trailing `.`
/// is allowed.
pub fn parse_literal(src: &str) -> Result<Literal, Vec<Diagnostic>> {
    let (tokens, diags) = tokenize(src);
    if !diags.is_empty() {
        return Err(diags);
    }
    let mut parser = Parser {
        tokens,
        idx: 0,
        diags: Vec::new(),
        theory: Theory::default(),
        has_header: false,
        positions: BTreeMap::new(),
        preference_positions: BTreeMap::new(),
    };
    let lit = parser.literal().map_err(|d| vec![d])?;
    if parser.at(&Tok::Dot) {
        parser.next();
    }
    if !parser.at(&Tok::Eof) {
        return Err(vec![parser.unexpected("end of literal")]);
    }
    Ok(lit)
}

fn locate(d: &Diagnostic, parsed: &ParsedTheory) -> Option<Pos> {
    match d.kind {
        DiagnosticKind::PreferenceUnknown | DiagnosticKind::PreferenceKind if d.subjects.len() == 2 => parsed
            .preference_positions
            .get(&(d.subjects[0].clone(), d.subjects[1].clone()))
            .copied(),
        DiagnosticKind::PreferenceCycle => parsed
            .preference_positions
            .iter()
            .filter(|((a, _), _)| d.subjects.contains(a))
            .map(|(_, p)| *p)
            .max(),
        _ => d.subjects.first().and_then(|s| parsed.positions.get(s).copied()),
    }
}

struct Parser {
    tokens: Vec<Token>,
    idx: usize,
    diags: Vec<Diagnostic>,
    theory: Theory,
    has_header: bool,
    positions: BTreeMap<String, Pos>,
    preference_positions: BTreeMap<(String, String), Pos>,
}

type PResult<T> = Result<T, Diagnostic>;

enum AttrValue {
    Number(f64),
    Text(String),
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.idx]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.idx].clone();
        if self.idx + 1 < self.tokens.len() {
            self.idx += 1;
        }
        t
    }

    fn at(&self, tok: &Tok) -> bool {
        &self.peek().tok == tok
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error(
            DiagnosticKind::Syntax,
            format!("expected {expected}, found {}", t.tok.describe()),
        )
        .at(t.pos)
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<Pos> {
        if self.at(&tok) {
            Ok(self.next().pos)
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn ident(&mut self, expected: &str) -> PResult<(String, Pos)> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.next().pos))
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn parse_all(&mut self) {
        while !self.at(&Tok::Eof) {
            if let Err(d) = self.statement() {
                self.diags.push(d);
                self.recover();
            }
        }
    }

    fn recover(&mut self) {
        while !self.at(&Tok::Eof) {
            if self.next().tok == Tok::Dot {
                break;
            }
        }
    }

    fn statement(&mut self) -> PResult<()> {
        let (kw, pos) = self.ident("a statement keyword")?;
        match kw.as_str() {
            "theory" => self.header(pos),
            "const" => self.constants(),
            "axiom" => self.premise(PremiseKind::Axiom, pos),
            "premise" => self.premise(PremiseKind::Ordinary, pos),
            "strict" => self.rule(RuleKind::Strict, pos),
            "defeasible" => self.rule(RuleKind::Defeasible, pos),
            "pref" => self.preference(pos),
            other => Err(Diagnostic::error(
                DiagnosticKind::Syntax,
                format!(
                    "unknown statement `{other}` (expected theory, const, axiom, premise, strict, defeasible or pref)"
                ),
            )
            .at(pos)),
        }
    }

    fn header(&mut self, pos: Pos) -> PResult<()> {
        let (name, _) = self.ident("theory name")?;
        self.expect(Tok::Dot, "`.`")?;
        if self.has_header {
            return Err(Diagnostic::error(DiagnosticKind::Syntax, "duplicate theory header").at(pos));
        }
        self.has_header = true;
        self.theory.name = name;
        Ok(())
    }

    fn constants(&mut self) -> PResult<()> {
        let mut names = Vec::new();
        loop {
            let (name, p) = self.term_token()?;
            if !is_constant_name(&name) {
                return Err(Diagnostic::error(
                    DiagnosticKind::BadIdentifier,
                    format!("`{name}` is not a constant (constants start lowercase or with a digit)"),
                )
                .at(p));
            }
            names.push(name);
            if self.at(&Tok::Comma) {
                self.next();
            } else {
                break;
            }
        }
        self.expect(Tok::Dot, "`,` or `.`")?;
        self.theory.constants.extend(names);
        Ok(())
    }

    fn check_fresh_id(&self, id: &str, pos: Pos) -> PResult<()> {
        if self.theory.contains_id(id) {
            Err(Diagnostic::error(DiagnosticKind::DuplicateId, format!("duplicate id `{id}`"))
                .at(pos)
                .with_subjects([id]))
        } else {
            Ok(())
        }
    }

    fn premise(&mut self, kind: PremiseKind, pos: Pos) -> PResult<()> {
        let (id, id_pos) = self.ident("premise id")?;
        self.expect(Tok::Colon, "`:`")?;
        let literal = self.literal()?;
        let attrs = self.attributes()?;
        self.expect(Tok::Dot, "`.`")?;
        self.check_fresh_id(&id, id_pos)?;

        let mut premise = match kind {
            PremiseKind::Axiom => Premise::axiom(id.clone(), literal),
            PremiseKind::Ordinary => Premise::ordinary(id.clone(), literal, 1.0),
        };
        for (key, key_pos, value) in attrs {
            match (key.as_str(), value) {
                ("confidence", AttrValue::Number(x)) => premise.confidence = x,
                ("jargon", AttrValue::Number(x)) => premise.jargon = x,
                ("source", AttrValue::Text(s)) => premise.source = s,
                (band, AttrValue::Text(s)) if Band::parse(band).is_some() => {
                    premise.display.insert(Band::parse(band).unwrap(), s);
                }
                (k, _) => return Err(bad_attribute(k, "premise", key_pos)),
            }
        }
        self.positions.insert(id, pos);
        self.theory.add_premise(premise);
        Ok(())
    }

    fn rule(&mut self, kind: RuleKind, pos: Pos) -> PResult<()> {
        let (id, id_pos) = self.ident("rule id")?;
        self.expect(Tok::Colon, "`:`")?;
        let (arrow, arrow_name) = match kind {
            RuleKind::Strict => (Tok::Arrow, "`->`"),
            RuleKind::Defeasible => (Tok::FatArrow, "`=>`"),
        };
        let mut body = Vec::new();
        if !self.at(&arrow) {
            loop {
                body.push(self.literal()?);
                if self.at(&Tok::Comma) {
                    self.next();
                } else {
                    break;
                }
            }
        }
        if !self.at(&arrow) {
            let other = match kind {
                RuleKind::Strict if self.at(&Tok::FatArrow) => Some("strict rules use `->`"),
                RuleKind::Defeasible if self.at(&Tok::Arrow) => Some("defeasible rules use `=>`"),
                _ => None,
            };
            let mut d = self.unexpected(&format!("`,` or {arrow_name}"));
            if let Some(hint) = other {
                d.message = format!("{} ({hint})", d.message);
            }
            return Err(d);
        }
        self.next();
        let head = self.literal()?;
        let attrs = self.attributes()?;
        self.expect(Tok::Dot, "`.`")?;
        self.check_fresh_id(&id, id_pos)?;

        let mut rule = Rule {
            id: id.clone(),
            kind,
            body,
            head,
            weight: 1.0,
            scheme: None,
        };
        for (key, key_pos, value) in attrs {
            match (key.as_str(), value) {
                ("weight", AttrValue::Number(x)) => rule.weight = x,
                ("scheme", AttrValue::Text(s)) => rule.scheme = Some(s),
                (k, _) => return Err(bad_attribute(k, "rule", key_pos)),
            }
        }
        self.positions.insert(id, pos);
        self.theory.add_rule(rule);
        Ok(())
    }

    fn preference(&mut self, pos: Pos) -> PResult<()> {
        let (mut higher, _) = self.ident("rule or premise id")?;
        let mut pairs = Vec::new();
        loop {
            self.expect(Tok::Gt, "`>`")?;
            let (lower, _) = self.ident("rule or premise id")?;
            pairs.push((higher.clone(), lower.clone()));
            higher = lower;
            if !self.at(&Tok::Gt) {
                break;
            }
        }
        self.expect(Tok::Dot, "`>` or `.`")?;
        for pair in pairs {
            self.preference_positions.entry(pair.clone()).or_insert(pos);
            self.theory.preferences.insert(pair);
        }
        Ok(())
    }

    fn literal(&mut self) -> PResult<Literal> {
        let mut negated = false;
        while self.at(&Tok::Tilde) {
            self.next();
            negated = !negated;
        }
        let (predicate, pos) = self.ident("predicate")?;
        if !predicate.starts_with(|c: char| c.is_ascii_lowercase()) {
            return Err(Diagnostic::error(
                DiagnosticKind::BadIdentifier,
                format!("predicate `{predicate}` must start with a lowercase letter"),
            )
            .at(pos));
        }
        let mut args = Vec::new();
        if self.at(&Tok::LParen) {
            self.next();
            loop {
                let (name, _) = self.term_token()?;
                args.push(Term::from_ident(&name));
                if self.at(&Tok::Comma) {
                    self.next();
                } else {
                    break;
                }
            }
            self.expect(Tok::RParen, "`,` or `)`")?;
        }
        Ok(Literal {
            predicate,
            args,
            negated,
        })
    }

    fn term_token(&mut self) -> PResult<(String, Pos)> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.next().pos))
            }
            Tok::Number(s) if !s.contains('.') => {
                let s = s.clone();
                Ok((s, self.next().pos))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn attributes(&mut self) -> PResult<Vec<(String, Pos, AttrValue)>> {
        let mut attrs = Vec::new();
        if !self.at(&Tok::LBracket) {
            return Ok(attrs);
        }
        self.next();
        let mut seen = BTreeSet::new();
        loop {
            let (key, pos) = self.ident("attribute name")?;
            self.expect(Tok::Eq, "`=`")?;
            let value = match self.next() {
                Token { tok: Tok::Number(n), pos } => AttrValue::Number(n.parse().map_err(|_| {
                    Diagnostic::error(DiagnosticKind::Syntax, format!("bad number `{n}`")).at(pos)
                })?),
                Token { tok: Tok::Str(s), .. } | Token { tok: Tok::Ident(s), .. } => AttrValue::Text(s),
                t => {
                    return Err(Diagnostic::error(
                        DiagnosticKind::Syntax,
                        format!("expected attribute value, found {}", t.tok.describe()),
                    )
                    .at(t.pos))
                }
            };
            if !seen.insert(key.clone()) {
                return Err(Diagnostic::error(DiagnosticKind::Syntax, format!("duplicate attribute `{key}`")).at(pos));
            }
            attrs.push((key, pos, value));
            if self.at(&Tok::Comma) {
                self.next();
            } else {
                break;
            }
        }
        self.expect(Tok::RBracket, "`,` or `]`")?;
        Ok(attrs)
    }
}

fn bad_attribute(key: &str, what: &str, pos: Pos) -> Diagnostic {
    Diagnostic::error(
        DiagnosticKind::Syntax,
        format!("unknown or ill-typed attribute `{key}` for {what}"),
    )
    .at(pos)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defeasible_rule_with_weight() {
        let t = parse_theory(
            "premise p3: ambiguity(heart_attack,clinical).\n\
             defeasible r2: ambiguity(Y,clinical) => ~prefer(Y) [weight=0.9].",
        )
        .unwrap();
        let r = &t.rules["r2"];
        assert_eq!(r.kind, RuleKind::Defeasible);
        assert_eq!(r.weight, 0.9);
        assert_eq!(r.body, vec![Literal::new("ambiguity", vec![Term::Var("Y".into()), Term::Const("clinical".into())])]);
        assert_eq!(r.head, Literal::new("prefer", vec![Term::Var("Y".into())]).negate());
    }

    #[test]
    fn empty_source_is_empty_theory() {
        let t = parse_theory("").unwrap();
        assert!(t.premises.is_empty() && t.rules.is_empty());
        assert_eq!(t.name, "untitled");
    }

    #[test]
    fn preference_cycle_reported() {
        let src = "defeasible r1: => a.\ndefeasible r2: => b.\npref r1 > r2. pref r2 > r1.";
        let diags = parse_theory(src).unwrap_err();
        assert!(diags.iter().any(|d| d.message == "preference cycle {r1,r2}"), "{diags:?}");
        assert!(diags.iter().all(|d| d.pos.is_some()));
    }

    #[test]
    fn syntax_errors_have_positions_and_recover() {
        let src = "premise p1 foo.\npremise p2: bar(.\npremise p3: ok.";
        let diags = parse_theory(src).unwrap_err();
        assert_eq!(diags.len(), 2, "{diags:?}");
        assert_eq!(diags[0].pos, Some(Pos::new(1, 12)));
        assert_eq!(diags[1].pos.unwrap().line, 2);
    }

    #[test]
    fn duplicate_id_rejected() {
        let diags = parse_theory("premise p1: a.\ndefeasible p1: a => b.").unwrap_err();
        assert_eq!(diags[0].kind, DiagnosticKind::DuplicateId);
        assert_eq!(diags[0].pos, Some(Pos::new(2, 12)));
    }

    #[test]
    fn arity_mismatch_rejected() {
        let diags = parse_theory("premise p1: a(x).\npremise p2: a(x, y).").unwrap_err();
        assert_eq!(diags[0].kind, DiagnosticKind::Arity);
    }

    #[test]
    fn unknown_preference_target_rejected() {
        let diags = parse_theory("defeasible r1: => a.\npref r1 > r9.").unwrap_err();
        assert_eq!(diags[0].kind, DiagnosticKind::PreferenceUnknown);
        assert_eq!(diags[0].pos, Some(Pos::new(2, 1)));
    }

    #[test]
    fn wrong_arrow_hint() {
        let diags = parse_theory("strict s1: a => b.").unwrap_err();
        assert!(diags[0].message.contains("strict rules use `->`"));
    }

    #[test]
    fn display_text_attributes() {
        let t = parse_theory(r#"premise e: eff(v) [lay="Safe.", professional="92% efficacy.", jargon=0.7]."#).unwrap();
        let p = &t.premises["e"];
        assert_eq!(p.display[&Band::Lay], "Safe.");
        assert_eq!(p.display[&Band::Professional], "92% efficacy.");
        assert_eq!(p.jargon, 0.7);
        assert_eq!(p.confidence, 1.0);
    }

    #[test]
    fn constants_collected_and_declared() {
        let t = parse_theory("const zeta.\npremise p: f(a, B2).").unwrap_err();
        assert_eq!(t[0].kind, DiagnosticKind::NonGroundPremise);
        let t = parse_theory("const zeta.\npremise p: f(a, 12).").unwrap();
        assert_eq!(t.constants.iter().cloned().collect::<Vec<_>>(), vec!["12", "a", "zeta"]);
    }
}
