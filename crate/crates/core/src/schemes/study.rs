//! PICO study records. Each study becomes four premises and one defeasible
//! rule recommending (or advising against) its intervention for its
//! population. Study credibility sets both the credibility premise's
//! confidence and the rule weight.

use std::cmp::Ordering;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theory::{is_constant_name, Literal, Premise, Rule, Theory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    #[serde(alias = "observed", alias = "+", alias = "true", alias = "1")]
    Positive,
    #[serde(alias = "not_observed", alias = "-", alias = "false", alias = "0")]
    Negative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRecord {
    pub id: String,
    pub population: String,
    pub intervention: String,
    /// Kept for provenance; it plays no part in the encoding's reasoning.
    pub comparison: String,
    pub outcome: Outcome,
    pub credibility: f64,
    pub sample_size: u64,
}

impl StudyRecord {
    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(Error::Study(format!("study `{}`: {msg}", self.id)));
        for (field, v) in [
            ("id", &self.id),
            ("population", &self.population),
            ("intervention", &self.intervention),
        ] {
            if !is_constant_name(v) {
                return err(format!("{field} `{v}` must be a lowercase identifier"));
            }
        }
        if self.comparison.trim().is_empty() {
            return err("comparison is empty".into());
        }
        if !(0.0..=1.0).contains(&self.credibility) {
            return err(format!("credibility {} outside [0, 1]", self.credibility));
        }
        if self.sample_size == 0 {
            return err("sample_size must be positive".into());
        }
        Ok(())
    }

    pub fn rule_id(&self) -> String {
        format!("{}_rec", self.id)
    }
}

/// The study's theory fragment.
pub fn encode_study(r: &StudyRecord) -> Result<Theory> {
    r.validate()?;
    let (s, p, i) = (r.id.as_str(), r.population.as_str(), r.intervention.as_str());
    let mut t = Theory::new(s);
    let source = format!("study {s} (comparison: {})", r.comparison);
    let body = vec![
        Literal::ground("population_match", &[s, p]),
        Literal::ground("intervention_applied", &[s, i]),
        Literal::ground("outcome_observed", &[s, i]).with_negation(r.outcome == Outcome::Negative),
        Literal::ground("credible", &[s]),
    ];
    for (k, lit) in body.iter().enumerate() {
        let confidence = if k == 3 { r.credibility } else { 1.0 };
        let mut prem = Premise::ordinary(format!("{s}_p{}", k + 1), lit.clone(), confidence);
        prem.source = source.clone();
        t.add_premise(prem);
    }
    let head = Literal::ground("recommend", &[i, p]).with_negation(r.outcome == Outcome::Negative);
    t.add_rule(Rule::defeasible(r.rule_id(), body, head, r.credibility));
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyVerdict {
    FirstPreferred,
    SecondPreferred,
    Incomparable,
}

/// Higher credibility wins; equal credibility falls back to sample size.
pub fn study_preference(a: &StudyRecord, b: &StudyRecord) -> StudyVerdict {
    let ord = a
        .credibility
        .partial_cmp(&b.credibility)
        .unwrap_or(Ordering::Equal)
        .then(a.sample_size.cmp(&b.sample_size));
    match ord {
        Ordering::Greater => StudyVerdict::FirstPreferred,
        Ordering::Less => StudyVerdict::SecondPreferred,
        Ordering::Equal => StudyVerdict::Incomparable,
    }
}

/// Merges the fragments of all studies and orders the rules of every pair
/// of studies on the same intervention and population.
pub fn encode_studies(name: &str, records: &[StudyRecord]) -> Result<Theory> {
    let mut t = Theory::new(name);
    for r in records {
        t.merge(&encode_study(r)?).map_err(Error::MergeConflict)?;
    }
    for (k, a) in records.iter().enumerate() {
        for b in &records[k + 1..] {
            if (&a.intervention, &a.population) != (&b.intervention, &b.population) {
                continue;
            }
            match study_preference(a, b) {
                StudyVerdict::FirstPreferred => t.prefer(a.rule_id(), b.rule_id()),
                StudyVerdict::SecondPreferred => t.prefer(b.rule_id(), a.rule_id()),
                StudyVerdict::Incomparable => {}
            }
        }
    }
    Ok(t)
}

/// Columns: id, population, intervention, comparison, outcome, credibility,
/// sample_size.
pub fn read_studies_csv(reader: impl Read) -> Result<Vec<StudyRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let rec: StudyRecord = row.map_err(|e| Error::Study(e.to_string()))?;
        rec.validate()?;
        out.push(rec);
    }
    Ok(out)
}

/// A JSON array of records with the CSV column names as fields.
pub fn read_studies_json(text: &str) -> Result<Vec<StudyRecord>> {
    let out: Vec<StudyRecord> = serde_json::from_str(text).map_err(|e| Error::Study(e.to_string()))?;
    for r in &out {
        r.validate()?;
    }
    Ok(out)
}
