use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::ArgumentFn;
use crate::value::Value;

/// A node's persistent state and the argument accumulated for each of its
/// outgoing edges, keyed by edge position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRuntime {
    pub state: Value,
    pub out_buffers: BTreeMap<usize, Value>,
}

/// What [`apply_message`] did to a node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Applied {
    pub state_before: Value,
    /// `δ_m(state_before)`.
    pub argument: Value,
    /// Out-edge positions whose buffer value changed.
    pub changed: Vec<usize>,
}

impl NodeRuntime {
    /// `state` with a zero buffer on each of `out_edges`.
    pub fn new(state: Value, out_edges: &[usize], alg: &ArgumentFn) -> Self {
        NodeRuntime {
            state,
            out_buffers: out_edges.iter().map(|&e| (e, alg.zero().clone())).collect(),
        }
    }

    pub fn buffer(&self, edge: usize) -> &Value {
        &self.out_buffers[&edge]
    }
}

/// Receives message `m`: the state becomes `m·state` and `δ_m(state)` is
/// added into every out-buffer.
pub fn apply_message(n: &mut NodeRuntime, m: &Value, alg: &ArgumentFn) -> Applied {
    let state_before = n.state.clone();
    let argument = alg.delta(m, &state_before);
    n.state = alg.action.act(m, &state_before);
    let mut changed = Vec::new();
    if argument != *alg.zero() {
        for (&edge, buf) in n.out_buffers.iter_mut() {
            let next = alg.args.op(buf, &argument);
            if next != *buf {
                *buf = next;
                changed.push(edge);
            }
        }
    }
    Applied {
        state_before,
        argument,
        changed,
    }
}
