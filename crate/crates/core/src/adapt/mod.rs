//! User-adaptive explanation: dispute trees over the defeat graph, their
//! sufficiency score σ, a per-user utility, and selection of the subtree
//! that maximizes utility while staying faithful to the full tree.

mod select;
mod tree;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theory::Band;

pub use select::{
    select_explanation, select_explanation_with, select_explanation_beam, utility, ExplanationSelection, Features, Strategy, EXACT_LIMIT,
    BEAM_WIDTH,
};
pub use tree::{build_dispute_tree, sufficiency, DisputeTree, Role, TreeNode, DEFAULT_MAX_DEPTH, MAX_TREE_NODES};

/// Expertise `e`, lexical tolerance `l` and cognitive depth `c`, each in
/// [0, 1], plus the schemes this user finds most convincing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserProfile {
    pub name: String,
    pub e: f64,
    pub l: f64,
    pub c: f64,
    #[serde(default)]
    pub preferred_schemes: BTreeSet<String>,
}

impl UserProfile {
    pub fn validate(&self) -> Result<()> {
        for (k, v) in [("e", self.e), ("l", self.l), ("c", self.c)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidProfile(format!("`{k}` = {v} outside [0, 1]")));
            }
        }
        for s in &self.preferred_schemes {
            if crate::schemes::SchemeId::parse(s).is_none() {
                return Err(Error::InvalidProfile(format!("unknown scheme `{s}`")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<UserProfile> {
        let p: UserProfile = serde_json::from_str(text).map_err(|e| Error::InvalidProfile(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    /// One of the bundled profiles: patient, clinician, policymaker.
    pub fn builtin(name: &str) -> Option<UserProfile> {
        crate::fixtures::PROFILES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, json)| UserProfile::from_json(json).expect("bundled profiles are valid"))
    }

    pub fn builtin_names() -> Vec<&'static str> {
        crate::fixtures::PROFILES.iter().map(|(n, _)| *n).collect()
    }

    pub fn band(&self) -> Band {
        Band::from_expertise(self.e)
    }
}

fn default_third() -> f64 {
    1.0 / 3.0
}

fn default_tau() -> f64 {
    0.5
}

fn default_epsilon() -> f64 {
    0.05
}

/// Feature weights α, β, γ, sufficiency threshold τ and faithfulness
/// slack ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityWeights {
    #[serde(default = "default_third")]
    pub alpha: f64,
    #[serde(default = "default_third")]
    pub beta: f64,
    #[serde(default = "default_third")]
    pub gamma: f64,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

impl Default for UtilityWeights {
    fn default() -> Self {
        UtilityWeights {
            alpha: default_third(),
            beta: default_third(),
            gamma: default_third(),
            tau: default_tau(),
            epsilon: default_epsilon(),
        }
    }
}

impl UtilityWeights {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidWeights(msg));
        for (k, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !v.is_finite() || v < 0.0 {
                return bad(format!("{k} = {v} must be a nonnegative number"));
            }
        }
        if self.alpha + self.beta + self.gamma <= 0.0 {
            return bad("alpha + beta + gamma must be positive".into());
        }
        for (k, v) in [("tau", self.tau), ("epsilon", self.epsilon)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{k} = {v} outside [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn scaled(&self, k: f64) -> UtilityWeights {
        UtilityWeights {
            alpha: self.alpha * k,
            beta: self.beta * k,
            gamma: self.gamma * k,
            ..*self
        }
    }
}
