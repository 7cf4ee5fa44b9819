//! Structured argumentation with user-adaptive explanations.
//!
//! The crate is layered bottom-up:
//!
//! * [`theory`]: the `.phax` defeasible-theory format, validation, grounding
//! * [`af`]: abstract frameworks and labelling semantics
//! * [`aspic`]: structured arguments, attacks and preference-based defeat
//! * [`schemes`]: argumentation schemes, critical questions and study evidence
//! * [`adapt`]: dispute trees, sufficiency, utility and explanation selection
//! * [`render`]: audience-adapted text, markdown and DOT output
//!
//! [`pipeline::Analysis`] ties them together for a single theory.

pub mod adapt;
pub mod af;
pub mod aspic;
mod error;
pub mod fixtures;
pub mod pipeline;
pub mod render;
pub mod schemes;
pub mod theory;

pub use error::{Error, Result};
