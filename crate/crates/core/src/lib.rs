//! Detection of deficient LLM-generated peer reviews.
//!
//! An orchestrator routes each review through four analysis tools (verify,
//! correct, complete, transform) under a quota ledger, an integrator issues
//! the single authoritative verdict, and the metrics module evaluates the
//! results. Every LLM-facing path runs against either a live chat-completion
//! endpoint or a deterministic scripted backend.

pub mod api;
pub mod backend;
pub mod config;
pub mod corpus;
pub mod integrator;
pub mod jsonx;
pub mod metrics;
pub mod orchestrator;
pub mod persona;
pub mod prompts;
pub mod report;
pub mod toolkit;
