//! Request and response bodies, and the operations behind them. Both the
//! command line and the HTTP service go through here, so a subcommand's
//! JSON output and the matching endpoint's body are the same document.

use std::collections::{BTreeMap, BTreeSet};

use phax_core::adapt::{build_dispute_tree, sufficiency, Features, Role, Strategy, UserProfile, UtilityWeights, DEFAULT_MAX_DEPTH};
use phax_core::af::{Label, Semantics};
use phax_core::aspic::AttackKind;
use phax_core::pipeline::{Analysis, ConclusionStatus};
use phax_core::render::{Format, RenderedExplanation};
use phax_core::schemes::{apply_critical_question, fill_template, find_instance, scheme_bindings, undercutter_id, Scheme, SchemeId};
use phax_core::theory::{parse_theory, Diagnostic, Theory};
use phax_core::Error;
use serde::{Deserialize, Serialize};

/// Error body: a stable code, a message, and parse diagnostics when the
/// failure came from theory text.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: u16,
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

impl ApiError {
    pub fn new(status: u16, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
            diagnostics: Vec::new(),
        }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(400, "BAD_REQUEST", message)
    }

    pub fn unknown_session(id: &str) -> Self {
        ApiError::new(404, "UNKNOWN_SESSION", format!("no session `{id}`"))
    }

    /// Domain errors (as opposed to malformed requests).
    pub fn is_domain(&self) -> bool {
        self.status == 404 || self.status == 422
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::Invalid(diagnostics) => ApiError {
                status: 400,
                code: "INVALID_THEORY",
                message,
                diagnostics,
            },
            Error::Insufficient { .. } => ApiError::new(422, "INSUFFICIENT", message),
            Error::UnknownTarget(_) | Error::UnknownArgument(_) => ApiError::new(404, "UNKNOWN_TARGET", message),
            Error::UnknownInstance(_) => ApiError::new(404, "UNKNOWN_INSTANCE", message),
            Error::UnknownScheme(_) | Error::UnknownCriticalQuestion { .. } => {
                ApiError::new(404, "UNKNOWN_SCHEME", message)
            }
            Error::GroundingTooLarge { .. }
            | Error::ArgumentCapExceeded { .. }
            | Error::SizeCapExceeded { .. }
            | Error::TreeTooLarge { .. } => ApiError::new(422, "TOO_LARGE", message),
            Error::MergeConflict(_) => ApiError::new(409, "CONFLICT", message),
            _ => ApiError::bad_request(message),
        }
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.message.starts_with(&self.code) {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.code, self.message)
        }
    }
}

pub type ApiResult<T> = Result<T, ApiError>;

pub fn load_theory(source: &str) -> ApiResult<Theory> {
    parse_theory(source).map_err(|d| Error::Invalid(d).into())
}

fn label_of(an: &Analysis, id: &str) -> String {
    an.ids.arg_to_node.get(id).cloned().unwrap_or_else(|| id.to_string())
}

// ---------------------------------------------------------------------------
// Arguments

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArgumentView {
    pub id: String,
    pub label: String,
    pub conclusion: String,
    pub top_rule: Option<String>,
    /// Labels of the direct subarguments.
    pub subarguments: Vec<String>,
    pub premises: Vec<String>,
    pub weight: f64,
    pub scheme: Option<String>,
    pub grounded: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackView {
    pub attacker: String,
    pub attacked: String,
    pub kind: AttackKind,
    /// Subargument the attack lands on.
    pub target: String,
    pub defeat: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionView {
    pub id: String,
    pub text: String,
    pub posed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceView {
    pub rule_id: String,
    pub scheme: SchemeId,
    pub bindings: BTreeMap<String, String>,
    pub conclusion: String,
    pub critical_questions: Vec<QuestionView>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArgumentsView {
    pub theory: String,
    pub arguments: Vec<ArgumentView>,
    pub attacks: Vec<AttackView>,
    pub scheme_instances: Vec<InstanceView>,
}

/// Critical questions already posed against `rule_id`.
fn posed_questions(t: &Theory, rule_id: &str) -> BTreeSet<String> {
    t.premises
        .get(&undercutter_id(rule_id))
        .map(|p| {
            p.source
                .split(',')
                .filter_map(|tag| tag.strip_prefix("cq:"))
                .map(String::from)
                .collect()
        })
        .unwrap_or_default()
}

pub fn scheme_instances(t: &Theory) -> Vec<InstanceView> {
    t.rules
        .values()
        .filter_map(|r| {
            let (scheme, bindings) = scheme_bindings(r)?;
            let posed = posed_questions(t, &r.id);
            let questions = Scheme::get(scheme)
                .critical_questions
                .iter()
                .map(|q| QuestionView {
                    id: q.id.clone(),
                    text: fill_template(&q.text, &bindings),
                    posed: posed.contains(&q.id),
                })
                .collect();
            Some(InstanceView {
                rule_id: r.id.clone(),
                scheme,
                conclusion: r.head.to_string(),
                bindings,
                critical_questions: questions,
            })
        })
        .collect()
}

pub fn arguments_view(an: &Analysis) -> ArgumentsView {
    let grounded = an
        .labellings(Semantics::Grounded)
        .expect("grounded is never capped")
        .remove(0);
    let mut arguments: Vec<ArgumentView> = an
        .defeats
        .arguments
        .iter()
        .map(|a| ArgumentView {
            id: a.id.clone(),
            label: a.label.clone(),
            conclusion: a.conclusion.to_string(),
            top_rule: a.top_rule.clone(),
            subarguments: a.subarguments.iter().map(|s| label_of(an, s)).collect(),
            premises: a.premise_set.iter().cloned().collect(),
            weight: a.weight,
            scheme: a.scheme.clone(),
            grounded: grounded.get(&a.label).unwrap_or(Label::Undec),
        })
        .collect();
    arguments.sort_by(|a, b| a.label.cmp(&b.label));
    let mut attacks: Vec<AttackView> = an
        .defeats
        .attacks
        .iter()
        .map(|(a, ok)| AttackView {
            attacker: label_of(an, &a.attacker),
            attacked: label_of(an, &a.attacked),
            kind: a.kind,
            target: label_of(an, &a.target),
            defeat: *ok,
        })
        .collect();
    attacks.sort_by(|a, b| {
        (&a.attacker, &a.attacked, &a.target, a.kind).cmp(&(&b.attacker, &b.attacked, &b.target, b.kind))
    });
    ArgumentsView {
        theory: an.theory.name.clone(),
        arguments,
        attacks,
        scheme_instances: scheme_instances(&an.theory),
    }
}

// ---------------------------------------------------------------------------
// Extensions

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabellingView {
    #[serde(rename = "IN")]
    pub in_: Vec<String>,
    #[serde(rename = "OUT")]
    pub out: Vec<String>,
    #[serde(rename = "UNDEC")]
    pub undec: Vec<String>,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionsView {
    pub semantics: Semantics,
    pub nodes: Vec<String>,
    /// Defeats between argument labels.
    pub edges: Vec<(String, String)>,
    pub labellings: Vec<LabellingView>,
    pub conclusions: BTreeMap<String, ConclusionStatus>,
}

pub fn extensions_view(an: &Analysis, semantics: Semantics) -> ApiResult<ExtensionsView> {
    let labellings = an.labellings(semantics)?;
    Ok(ExtensionsView {
        semantics,
        nodes: an.af.args().to_vec(),
        edges: an.af.attacks().map(|(f, t)| (f.to_string(), t.to_string())).collect(),
        labellings: labellings
            .iter()
            .map(|l| LabellingView {
                in_: l.in_set().into_iter().collect(),
                out: l.out_set().into_iter().collect(),
                undec: l.undec_set().into_iter().collect(),
                summary: l.summary(),
            })
            .collect(),
        conclusions: an.acceptance_report(semantics)?,
    })
}

// ---------------------------------------------------------------------------
// Explain

/// A built-in profile by name, or a full profile inline.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ProfileRef {
    Name(String),
    Inline(UserProfile),
}

impl ProfileRef {
    pub fn resolve(&self) -> ApiResult<UserProfile> {
        let u = match self {
            ProfileRef::Name(n) => UserProfile::builtin(n).ok_or_else(|| {
                ApiError::bad_request(format!(
                    "unknown profile `{n}` (built in: {})",
                    UserProfile::builtin_names().join(", ")
                ))
            })?,
            ProfileRef::Inline(u) => u.clone(),
        };
        u.validate()?;
        Ok(u)
    }
}

/// Overrides on top of the default utility weights.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightOverrides {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub tau: Option<f64>,
    pub epsilon: Option<f64>,
}

impl WeightOverrides {
    pub fn apply(&self) -> ApiResult<UtilityWeights> {
        let d = UtilityWeights::default();
        let w = UtilityWeights {
            alpha: self.alpha.unwrap_or(d.alpha),
            beta: self.beta.unwrap_or(d.beta),
            gamma: self.gamma.unwrap_or(d.gamma),
            tau: self.tau.unwrap_or(d.tau),
            epsilon: self.epsilon.unwrap_or(d.epsilon),
        };
        w.validate()?;
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplainRequest {
    pub target: String,
    pub profile: ProfileRef,
    #[serde(default)]
    pub weights: WeightOverrides,
    #[serde(default)]
    pub semantics: Option<Semantics>,
    #[serde(default)]
    pub format: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeView {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub role: Role,
    pub argument: String,
    pub argument_id: String,
    pub base: f64,
    pub scheme: Option<String>,
    pub jargon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionView {
    pub nodes: Vec<NodeView>,
    pub sigma: f64,
    pub sigma_full: f64,
    pub utility: f64,
    pub features: Features,
    pub strategy: Strategy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExplainResponse {
    pub target: String,
    pub argument: String,
    pub argument_id: String,
    pub conclusion: String,
    pub profile: UserProfile,
    pub band: String,
    pub semantics: Semantics,
    pub acceptance: ConclusionStatus,
    pub weights: UtilityWeights,
    pub selection: SelectionView,
    pub rendered: RenderedExplanation,
}

pub fn explain(an: &Analysis, req: &ExplainRequest) -> ApiResult<ExplainResponse> {
    let profile = req.profile.resolve()?;
    let weights = req.weights.apply()?;
    let semantics = req.semantics.unwrap_or(Semantics::Grounded);
    let format: Format = req.format.as_deref().unwrap_or("text").parse()?;
    let ex = an.explain(&req.target, &profile, &weights, format)?;
    let arg = an.argument(&ex.argument_id).expect("explained argument exists");
    let nodes = ex
        .selection
        .subtree
        .nodes
        .values()
        .map(|n| NodeView {
            id: n.id,
            parent: n.parent,
            depth: n.depth,
            role: n.role,
            argument: n.label.clone(),
            argument_id: n.argument.clone(),
            base: n.base,
            scheme: n.scheme.clone(),
            jargon: n.jargon,
        })
        .collect();
    Ok(ExplainResponse {
        target: ex.target,
        argument: ex.argument,
        argument_id: ex.argument_id,
        conclusion: arg.conclusion.to_string(),
        acceptance: an.conclusion_status(&arg.conclusion, semantics)?,
        band: profile.band().to_string(),
        profile,
        semantics,
        weights,
        selection: SelectionView {
            nodes,
            sigma: ex.selection.sigma,
            sigma_full: ex.selection.sigma_full,
            utility: ex.selection.utility,
            features: ex.selection.features,
            strategy: ex.selection.strategy,
        },
        rendered: ex.rendered,
    })
}

// ---------------------------------------------------------------------------
// Challenge and what-if

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArgumentStatus {
    pub credulous: bool,
    pub skeptical: bool,
}

/// Acceptance and full-tree sufficiency of everything in a theory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub conclusions: BTreeMap<String, ConclusionStatus>,
    pub arguments: BTreeMap<String, ArgumentStatus>,
    /// σ of each argument's full dispute tree; null when the tree exceeds
    /// the size cap.
    pub sigma: BTreeMap<String, Option<f64>>,
}

pub fn snapshot(an: &Analysis, semantics: Semantics) -> ApiResult<Snapshot> {
    let labellings = an.labellings(semantics)?;
    let arguments = an
        .af
        .args()
        .iter()
        .map(|a| {
            let is_in = |l: &phax_core::af::Labelling| l.get(a) == Some(Label::In);
            let status = ArgumentStatus {
                credulous: labellings.iter().any(is_in),
                skeptical: !labellings.is_empty() && labellings.iter().all(is_in),
            };
            (a.clone(), status)
        })
        .collect();
    let sigma = an
        .defeats
        .arguments
        .iter()
        .map(|a| {
            let s = build_dispute_tree(&an.defeats, &an.theory, &a.id, DEFAULT_MAX_DEPTH)
                .ok()
                .map(|t| sufficiency(&t));
            (a.label.clone(), s)
        })
        .collect();
    Ok(Snapshot {
        conclusions: an.acceptance_report(semantics)?,
        arguments,
        sigma,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Change<T> {
    pub key: String,
    pub before: Option<T>,
    pub after: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Delta {
    pub conclusions: Vec<Change<ConclusionStatus>>,
    pub arguments: Vec<Change<ArgumentStatus>>,
    pub sigma: Vec<Change<f64>>,
}

fn diff<T: Clone + PartialEq>(before: &BTreeMap<String, T>, after: &BTreeMap<String, T>) -> Vec<Change<T>> {
    let keys: BTreeSet<&String> = before.keys().chain(after.keys()).collect();
    keys.into_iter()
        .filter_map(|k| {
            let (b, a) = (before.get(k).cloned(), after.get(k).cloned());
            (b != a).then(|| Change {
                key: k.clone(),
                before: b,
                after: a,
            })
        })
        .collect()
}

pub fn delta(before: &Snapshot, after: &Snapshot) -> Delta {
    let flat = |m: &BTreeMap<String, Option<f64>>| -> BTreeMap<String, f64> {
        m.iter().filter_map(|(k, v)| v.map(|v| (k.clone(), v))).collect()
    };
    Delta {
        conclusions: diff(&before.conclusions, &after.conclusions),
        arguments: diff(&before.arguments, &after.arguments),
        sigma: diff(&flat(&before.sigma), &flat(&after.sigma)),
    }
}

fn default_confidence() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChallengeRequest {
    /// Rule id of the scheme instance.
    pub instance: String,
    pub cq: String,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
    #[serde(default)]
    pub semantics: Option<Semantics>,
    /// Keep the challenge in the session (the default); `false` previews.
    #[serde(default = "default_true")]
    pub commit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChallengeResponse {
    pub instance: String,
    pub scheme: SchemeId,
    pub cq: String,
    pub question: String,
    pub conclusion: String,
    pub semantics: Semantics,
    pub before: Snapshot,
    pub after: Snapshot,
    pub delta: Delta,
    pub committed: bool,
}

/// Returns the challenged theory with the report; the caller decides
/// whether to keep it.
pub fn challenge(an: &Analysis, req: &ChallengeRequest) -> ApiResult<(Analysis, ChallengeResponse)> {
    let semantics = req.semantics.unwrap_or(Semantics::Grounded);
    let inst = find_instance(&an.theory, &req.instance)?;
    let scheme = Scheme::get(inst.scheme);
    let question = scheme
        .critical_question(&req.cq)
        .map(|q| fill_template(&q.text, &inst.bindings))
        .ok_or_else(|| Error::UnknownCriticalQuestion {
            scheme: inst.scheme.to_string(),
            cq: req.cq.clone(),
        })?;
    if !(req.confidence > 0.0 && req.confidence <= 1.0) {
        return Err(ApiError::bad_request("confidence must lie in (0, 1]"));
    }
    let challenged = Analysis::new(&apply_critical_question(&an.theory, &inst, &req.cq, req.confidence)?)?;
    let before = snapshot(an, semantics)?;
    let after = snapshot(&challenged, semantics)?;
    let response = ChallengeResponse {
        conclusion: an.theory.rules[&inst.rule_id].head.to_string(),
        instance: inst.rule_id,
        scheme: inst.scheme,
        cq: req.cq.clone(),
        question,
        semantics,
        delta: delta(&before, &after),
        before,
        after,
        committed: req.commit,
    };
    Ok((challenged, response))
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhatIfRequest {
    #[serde(default)]
    pub disable_premises: Vec<String>,
    /// `[higher, lower]` pairs to add.
    #[serde(default)]
    pub add_preferences: Vec<(String, String)>,
    #[serde(default)]
    pub remove_preferences: Vec<(String, String)>,
    #[serde(default)]
    pub semantics: Option<Semantics>,
    #[serde(default)]
    pub commit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WhatIfResponse {
    pub semantics: Semantics,
    pub before: Snapshot,
    pub after: Snapshot,
    pub delta: Delta,
    pub committed: bool,
}

/// Theory with the edits applied. Preferences mentioning a disabled
/// premise go with it.
pub fn edited_theory(t: &Theory, req: &WhatIfRequest) -> ApiResult<Theory> {
    let mut t = t.clone();
    for id in &req.disable_premises {
        if t.premises.remove(id).is_none() {
            return Err(ApiError::bad_request(format!("no premise `{id}`")));
        }
        t.preferences.retain(|(hi, lo)| hi != id && lo != id);
    }
    for pair in &req.remove_preferences {
        if !t.preferences.remove(pair) {
            return Err(ApiError::bad_request(format!("no preference `{} > {}`", pair.0, pair.1)));
        }
    }
    for (hi, lo) in &req.add_preferences {
        t.prefer(hi.clone(), lo.clone());
    }
    Ok(t)
}

pub fn whatif(an: &Analysis, req: &WhatIfRequest) -> ApiResult<(Analysis, WhatIfResponse)> {
    let semantics = req.semantics.unwrap_or(Semantics::Grounded);
    let edited = Analysis::new(&edited_theory(&an.theory, req)?)?;
    let before = snapshot(an, semantics)?;
    let after = snapshot(&edited, semantics)?;
    let response = WhatIfResponse {
        semantics,
        delta: delta(&before, &after),
        before,
        after,
        committed: req.commit,
    };
    Ok((edited, response))
}

// ---------------------------------------------------------------------------
// Schemes

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeView {
    pub id: SchemeId,
    pub description: String,
    pub variables: Vec<String>,
    pub formula: String,
    pub critical_questions: Vec<phax_core::schemes::CriticalQuestion>,
    pub audience_templates: BTreeMap<String, String>,
    pub example_bindings: BTreeMap<String, String>,
}

pub fn schemes_view() -> Vec<SchemeView> {
    SchemeId::ALL
        .into_iter()
        .map(|id| {
            let s = Scheme::get(id);
            let body: Vec<String> = s.premises.iter().map(|l| l.to_string()).collect();
            SchemeView {
                id,
                formula: format!("{} => {}", body.join(", "), s.conclusion),
                description: s.description.clone(),
                variables: s.variables.clone(),
                critical_questions: s.critical_questions.clone(),
                audience_templates: s.audience_templates.iter().map(|(b, t)| (b.to_string(), t.clone())).collect(),
                example_bindings: s.example_bindings.clone(),
            }
        })
        .collect()
}
