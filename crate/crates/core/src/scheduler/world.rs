use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::trace::{Record, RecordKind};
use crate::error::{Error, Result};
use crate::fabric::{
    apply_message, compute_message, EdgeId, Instance, MessageMode, NodeId, NodeRuntime,
};
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    /// A message arriving at `node`, over `edge` or injected from outside.
    Deliver {
        edge: Option<EdgeId>,
        node: NodeId,
        message: Value,
    },
    /// Evaluation of ψ on `edge`.
    Compute { edge: EdgeId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub seq: u64,
    #[serde(flatten)]
    pub kind: EventKind,
}

impl Event {
    pub fn edge(&self) -> Option<EdgeId> {
        match self.kind {
            EventKind::Deliver { edge, .. } => edge,
            EventKind::Compute { edge } => Some(edge),
        }
    }

    pub fn is_compute(&self) -> bool {
        matches!(self.kind, EventKind::Compute { .. })
    }
}

/// Node runtimes plus the pending events of one execution.
#[derive(Clone, Debug)]
pub struct WorldState {
    pub nodes: Vec<NodeRuntime>,
    pending: BTreeMap<u64, Event>,
    /// Number of executed events.
    pub step: u64,
    next_seq: u64,
    /// Seq of the pending Compute of each edge position, if any.
    compute_pending: Vec<Option<u64>>,
}

impl WorldState {
    /// Initial states, zero buffers, and one Deliver per non-unit injection.
    pub fn new(inst: &Instance) -> Self {
        let mut w = WorldState {
            nodes: inst.fresh_nodes(),
            pending: BTreeMap::new(),
            step: 0,
            next_seq: 0,
            compute_pending: vec![None; inst.graph.edges().len()],
        };
        for inj in &inst.injections {
            if !inst.algebra(inj.node).messages().is_unit(&inj.message) {
                w.push(EventKind::Deliver {
                    edge: None,
                    node: inj.node,
                    message: inj.message.clone(),
                });
            }
        }
        w
    }

    fn push(&mut self, kind: EventKind) -> u64 {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.pending.insert(seq, Event { seq, kind });
        seq
    }

    /// Pending events in seq order.
    pub fn pending(&self) -> impl Iterator<Item = &Event> {
        self.pending.values()
    }

    pub fn pending_len(&self) -> usize {
        self.pending.len()
    }

    pub fn event(&self, seq: u64) -> Option<&Event> {
        self.pending.get(&seq)
    }

    pub fn states(&self) -> Vec<Value> {
        self.nodes.iter().map(|n| n.state.clone()).collect()
    }

    fn buffer(&self, inst: &Instance, pos: usize) -> &Value {
        self.nodes[inst.graph.edge(pos).src].buffer(pos)
    }

    /// Deliver: always. Incremental Compute: its buffer is non-zero.
    /// Blocking Compute: no node feeding its inputs is reachable from the
    /// target of any other pending event, so its inputs are final.
    pub fn is_eligible(&self, inst: &Instance, ev: &Event) -> bool {
        let EventKind::Compute { edge } = ev.kind else {
            return true;
        };
        let Some(pos) = inst.graph.position(edge) else {
            return false;
        };
        match inst.psi[pos].mode {
            MessageMode::Incremental => {
                let src = inst.graph.edge(pos).src;
                *self.buffer(inst, pos) != *inst.algebra(src).zero()
            }
            MessageMode::Blocking => {
                let seeds =
                    self.pending
                        .values()
                        .filter(|o| o.seq != ev.seq)
                        .map(|o| match o.kind {
                            EventKind::Deliver { node, .. } => node,
                            EventKind::Compute { edge } => {
                                inst.graph
                                    .edge(inst.graph.position(edge).expect("known edge"))
                                    .dst
                            }
                        });
                let live = inst.graph.reachable_from(seeds);
                inst.inputs[pos]
                    .iter()
                    .all(|&i| !live[inst.graph.edge(i).src])
            }
        }
    }

    /// Seqs of eligible pending events, ascending.
    pub fn eligible(&self, inst: &Instance) -> Vec<u64> {
        self.pending
            .values()
            .filter(|e| self.is_eligible(inst, e))
            .map(|e| e.seq)
            .collect()
    }

    /// Keeps at most one Compute pending per edge, and none for an
    /// incremental edge whose buffer is zero.
    fn refresh_compute(&mut self, inst: &Instance, pos: usize) {
        let src = inst.graph.edge(pos).src;
        let wanted = match inst.psi[pos].mode {
            MessageMode::Incremental => *self.buffer(inst, pos) != *inst.algebra(src).zero(),
            MessageMode::Blocking => true,
        };
        match (wanted, self.compute_pending[pos]) {
            (true, None) => {
                let seq = self.push(EventKind::Compute {
                    edge: inst.graph.edge(pos).id,
                });
                self.compute_pending[pos] = Some(seq);
            }
            (false, Some(seq)) => {
                self.pending.remove(&seq);
                self.compute_pending[pos] = None;
            }
            _ => {}
        }
    }
}

/// Executes pending event `seq`.
pub fn step(inst: &Instance, w: &mut WorldState, seq: u64) -> Result<Record> {
    let ev = w
        .pending
        .get(&seq)
        .ok_or_else(|| Error::Scheduling(format!("event {seq} is not pending")))?;
    if !w.is_eligible(inst, ev) {
        return Err(Error::Scheduling(format!("event {seq} is not eligible")));
    }
    let ev = w.pending.remove(&seq).expect("pending");
    w.step += 1;
    let record = match ev.kind {
        EventKind::Deliver {
            edge,
            node,
            message,
        } => {
            let alg = inst.algebra(node);
            let applied = apply_message(&mut w.nodes[node], &message, alg);
            for &changed in &applied.changed {
                for &reader in inst.readers(changed) {
                    w.refresh_compute(inst, reader);
                }
            }
            Record {
                step: w.step,
                seq,
                kind: RecordKind::Deliver,
                edge,
                node,
                payload: Some(message),
                state_before: Some(applied.state_before),
                state_after: Some(w.nodes[node].state.clone()),
                argument: Some(applied.argument),
                message: None,
            }
        }
        EventKind::Compute { edge } => {
            let pos = inst.edge_position(edge)?;
            w.compute_pending[pos] = None;
            let e = inst.graph.edge(pos);
            let inputs: Vec<Value> = inst.inputs[pos]
                .iter()
                .map(|&i| w.buffer(inst, i).clone())
                .collect();
            let out = compute_message(
                edge,
                &inst.psi[pos],
                &inputs,
                w.buffer(inst, pos),
                &inst.algebra(e.src).args,
                inst.algebra(e.dst).messages(),
            )?;
            *w.nodes[e.src]
                .out_buffers
                .get_mut(&pos)
                .expect("out buffer") = out.buffer;
            if out.deliver {
                w.push(EventKind::Deliver {
                    edge: Some(edge),
                    node: e.dst,
                    message: out.message.clone(),
                });
            }
            let payload = match inputs.len() {
                1 => inputs.into_iter().next().expect("one input"),
                _ => Value::Tuple(inputs),
            };
            Record {
                step: w.step,
                seq,
                kind: RecordKind::Compute,
                edge: Some(edge),
                node: e.src,
                payload: Some(payload),
                state_before: None,
                state_after: None,
                argument: None,
                message: Some(out.message),
            }
        }
    };
    Ok(record)
}

/// No pending events and every incremental buffer zero.
pub fn detect_quiescence(inst: &Instance, w: &WorldState) -> bool {
    w.pending.is_empty()
        && inst.graph.edges().iter().enumerate().all(|(pos, e)| {
            inst.psi[pos].mode == MessageMode::Blocking
                || w.nodes[e.src].buffer(pos) == inst.algebra(e.src).zero()
        })
}
