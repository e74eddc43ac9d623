//! Asynchronous message passing over monoid actions.
//!
//! Nodes hold a persistent state acted on by incoming messages; each state
//! change emits an argument through an argument function δ, and per-edge
//! message functions ψ turn accumulated arguments into messages for the
//! neighbours. When the action, δ (a 1-cocycle) and ψ (a monoid
//! homomorphism) satisfy their laws, every schedule reaches the same final
//! state. This crate checks those laws and runs instances under arbitrary
//! seeded schedules to confirm it.

pub mod algebra;
pub mod canon;
pub mod cli;
mod error;
pub mod fabric;
pub mod instances;
pub mod scheduler;
mod value;

pub use error::{Error, Result};
pub use value::{Value, BOT_TOKEN};
