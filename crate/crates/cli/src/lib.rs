//! Command-line tool and HTTP service over the argumentation engine.

pub mod api;
pub mod cli;
pub mod service;

pub use cli::dispatch;
