//! Graphs, node runtimes and message functions: the gather/scatter
//! machinery that the scheduler drives.

mod attention;
mod graph;
mod instance;
mod message;
mod node;
mod round;
mod tropical;

pub use attention::{attention_message, attention_weights};
pub use graph::{Edge, EdgeId, Graph, NodeId};
pub use instance::{Injection, Instance, Verification};
pub use message::{
    check_homomorphism, compute_message, replay_homomorphism, Computed, MessageFn, MessageMode,
};
pub use node::{apply_message, Applied, NodeRuntime};
pub use round::gather_scatter_round;
pub use tropical::{tropical_apply, TropicalMatrix};
