//! One theory taken through every layer: grounding, argument construction,
//! defeat resolution, the abstract framework, and explanation.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::adapt::{build_dispute_tree, select_explanation, sufficiency, ExplanationSelection, UserProfile, UtilityWeights, DEFAULT_MAX_DEPTH};
use crate::af::{enumerate_labellings, ArgumentationFramework, Label, Labelling, Semantics};
use crate::aspic::{compute_attacks, construct_arguments, project_af, resolve_defeats, Argument, DefeatGraph, IdMap};
use crate::error::{Error, Result};
use crate::render::{render_explanation, Format, RenderedExplanation};
use crate::theory::{ground_theory, parse_literal, validate_theory, GroundTheory, Literal, Theory};

#[derive(Debug, Clone)]
pub struct Analysis {
    pub theory: Theory,
    pub ground: GroundTheory,
    pub defeats: DefeatGraph,
    /// Framework over argument labels.
    pub af: ArgumentationFramework,
    pub ids: IdMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConclusionStatus {
    /// Some argument for it is IN in some labelling.
    pub credulous: bool,
    /// Every labelling has some argument for it IN (false when there are no
    /// labellings).
    pub skeptical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Explanation {
    pub target: String,
    pub argument: String,
    pub argument_id: String,
    pub selection: ExplanationSelection,
    pub rendered: RenderedExplanation,
}

impl Analysis {
    pub fn new(t: &Theory) -> Result<Analysis> {
        let diags = validate_theory(t);
        if !diags.is_empty() {
            return Err(Error::Invalid(diags));
        }
        let ground = ground_theory(t)?;
        let args = construct_arguments(&ground)?;
        let attacks = compute_attacks(&args, &ground);
        let defeats = resolve_defeats(&attacks, &args, &ground.preference_order());
        let (af, ids) = project_af(&defeats);
        Ok(Analysis {
            theory: t.clone(),
            ground,
            defeats,
            af,
            ids,
        })
    }

    /// Looks an argument up by id or by label.
    pub fn argument(&self, key: &str) -> Option<&Argument> {
        self.defeats
            .arguments
            .get(key)
            .or_else(|| self.ids.node_to_arg.get(key).and_then(|id| self.defeats.arguments.get(id)))
    }

    pub fn labellings(&self, semantics: Semantics) -> Result<Vec<Labelling>> {
        enumerate_labellings(&self.af, semantics)
    }

    /// Arguments a target names: an argument id or label, or else every
    /// argument concluding the literal the target parses to.
    pub fn resolve_target(&self, target: &str) -> Result<Vec<&Argument>> {
        if let Some(a) = self.argument(target) {
            return Ok(vec![a]);
        }
        let lit = parse_literal(target).map_err(|_| Error::UnknownTarget(target.to_string()))?;
        let found: Vec<&Argument> = self.defeats.arguments.concluding(&lit).collect();
        if found.is_empty() {
            return Err(Error::UnknownTarget(target.to_string()));
        }
        Ok(found)
    }

    fn status_in(&self, labellings: &[Labelling], lit: &Literal) -> ConclusionStatus {
        let nodes: Vec<&str> = self
            .defeats
            .arguments
            .concluding(lit)
            .map(|a| self.ids.arg_to_node[&a.id].as_str())
            .collect();
        let has_in = |l: &Labelling| nodes.iter().any(|n| l.get(n) == Some(Label::In));
        ConclusionStatus {
            credulous: labellings.iter().any(has_in),
            skeptical: !labellings.is_empty() && labellings.iter().all(has_in),
        }
    }

    pub fn conclusion_status(&self, lit: &Literal, semantics: Semantics) -> Result<ConclusionStatus> {
        Ok(self.status_in(&self.labellings(semantics)?, lit))
    }

    /// Status of every conclusion, keyed by its text.
    pub fn acceptance_report(&self, semantics: Semantics) -> Result<BTreeMap<String, ConclusionStatus>> {
        let labellings = self.labellings(semantics)?;
        Ok(self
            .defeats
            .arguments
            .conclusions()
            .iter()
            .map(|c| (c.to_string(), self.status_in(&labellings, c)))
            .collect())
    }

    /// Explains the target through the argument with the strongest full
    /// dispute tree (ties to the smaller label).
    pub fn explain(
        &self,
        target: &str,
        profile: &UserProfile,
        weights: &UtilityWeights,
        format: Format,
    ) -> Result<Explanation> {
        let candidates = self.resolve_target(target)?;
        let mut best: Option<(f64, &Argument, crate::adapt::DisputeTree)> = None;
        for a in candidates {
            let tree = build_dispute_tree(&self.defeats, &self.theory, &a.id, DEFAULT_MAX_DEPTH)?;
            let s = sufficiency(&tree);
            let better = match &best {
                None => true,
                Some((bs, ba, _)) => s > *bs || (s == *bs && a.label < ba.label),
            };
            if better {
                best = Some((s, a, tree));
            }
        }
        let (_, arg, tree) = best.expect("resolve_target returns at least one argument");
        let selection = select_explanation(&tree, profile, weights)?;
        let rendered = render_explanation(&selection, profile, &self.defeats, &self.ground, format);
        Ok(Explanation {
            target: target.to_string(),
            argument: arg.label.clone(),
            argument_id: arg.id.clone(),
            selection,
            rendered,
        })
    }
}
