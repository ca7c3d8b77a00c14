//! Agent-based simulation of private opinions and public actions.
//!
//! Each agent holds a private opinion and a public action on the same
//! issue, both in `[0, 1]`. Opinions are revised by bounded-confidence
//! averaging over the *observed actions* of others; actions are then chosen
//! to balance consistency with the agent's own opinion against conformity
//! with the population's mean action (the subjective norm).
//!
//! The crate is organised as:
//!
//! - [`model`]: agent state and the per-agent update rules.
//! - [`graph`]: interaction topologies and edge-list I/O.
//! - [`engine`]: scenario construction and the synchronous run loop.
//! - [`metrics`]: discrepancy and cluster statistics.
//! - [`sweep`]: repeated runs over an openness/commitment grid.
//! - [`config`]: JSON configuration documents and the named presets.
//! - [`cli`]: the `normdyn` command-line front end.

pub mod cli;
pub mod config;
pub mod engine;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod model;
pub mod sweep;

pub use error::{Error, Result};
