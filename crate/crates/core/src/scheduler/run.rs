use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::trace::{Record, RecordKind, ScriptStep, Trace, TraceHeader, RNG_NAME, TRACE_FORMAT};
use super::world::{detect_quiescence, step, WorldState};
use crate::error::{Error, Result};
use crate::fabric::{apply_message, compute_message, Instance, MessageMode, NodeId, NodeRuntime};
use crate::value::Value;

pub const DEFAULT_EVENT_CAP: u64 = 1_000_000;
pub const DEFAULT_ENUMERATION_BOUND: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchedulePolicy {
    /// Round-based execution; `None` runs to a fixed point.
    Synchronous { rounds: Option<u64> },
    /// Lowest pending seq first.
    Fifo,
    /// Uniform choice among eligible events.
    Random { seed: u64 },
    /// An explicit event sequence, typically taken from a trace.
    Scripted { script: Vec<ScriptStep> },
    /// Every interleaving; only meaningful for [`enumerate_interleavings`].
    Enumerate,
}

impl SchedulePolicy {
    pub fn label(&self) -> &'static str {
        match self {
            SchedulePolicy::Synchronous { .. } => "synchronous",
            SchedulePolicy::Fifo => "fifo",
            SchedulePolicy::Random { .. } => "random",
            SchedulePolicy::Scripted { .. } => "scripted",
            SchedulePolicy::Enumerate => "enumerate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum executed events (rounds, for the synchronous policy).
    pub event_cap: u64,
    /// Maximum explored prefixes when enumerating interleavings.
    pub enumeration_bound: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            event_cap: DEFAULT_EVENT_CAP,
            enumeration_bound: DEFAULT_ENUMERATION_BOUND,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Quiescent,
    /// A synchronous run stopped after its requested round count.
    RoundsCompleted,
    CapExceeded,
    /// Events are pending but none is eligible.
    Deadlock,
    /// A scripted schedule ended before quiescence.
    ScriptExhausted,
}

impl RunStatus {
    pub fn is_ok(self) -> bool {
        matches!(self, RunStatus::Quiescent | RunStatus::RoundsCompleted)
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub final_states: Vec<Value>,
    pub trace: Trace,
    pub status: RunStatus,
}

fn header(inst: &Instance, policy: &SchedulePolicy, caps: &Caps) -> TraceHeader {
    let (seed, rng) = match policy {
        SchedulePolicy::Random { seed } => (Some(*seed), Some(RNG_NAME.to_string())),
        _ => (None, None),
    };
    let rounds = match policy {
        SchedulePolicy::Synchronous { rounds } => *rounds,
        _ => None,
    };
    TraceHeader {
        format: TRACE_FORMAT.into(),
        instance: inst.fingerprint().into(),
        name: inst.name.clone(),
        policy: policy.label().into(),
        seed,
        rng,
        event_cap: caps.event_cap,
        rounds,
    }
}

/// Executes `inst` under `policy` until quiescence, the event cap, a
/// deadlock or the end of a script.
pub fn run(inst: &Instance, policy: &SchedulePolicy, caps: &Caps) -> Result<RunOutcome> {
    let header = header(inst, policy, caps);
    if let SchedulePolicy::Synchronous { rounds } = policy {
        let limit = rounds.unwrap_or(caps.event_cap);
        let sync = synchronous_rounds(inst, limit)?;
        let status = if sync.fixed_point {
            RunStatus::Quiescent
        } else if rounds.is_some() {
            RunStatus::RoundsCompleted
        } else {
            RunStatus::CapExceeded
        };
        return Ok(RunOutcome {
            final_states: sync.nodes.iter().map(|n| n.state.clone()).collect(),
            trace: Trace {
                header,
                records: sync.records,
            },
            status,
        });
    }
    let mut w = WorldState::new(inst);
    let mut records = Vec::new();
    let mut rng = match policy {
        SchedulePolicy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let mut script = match policy {
        SchedulePolicy::Scripted { script } => Some(script.iter()),
        SchedulePolicy::Enumerate => {
            return Err(Error::Configuration(
                "the enumerate policy explores all schedules; use enumerate_interleavings".into(),
            ))
        }
        _ => None,
    };
    let status = loop {
        if w.pending_len() == 0 {
            break if detect_quiescence(inst, &w) {
                RunStatus::Quiescent
            } else {
                RunStatus::Deadlock
            };
        }
        if w.step >= caps.event_cap {
            break RunStatus::CapExceeded;
        }
        let seq = if let Some(script) = script.as_mut() {
            let Some(next) = script.next() else {
                break RunStatus::ScriptExhausted;
            };
            let ev = w.event(next.seq).ok_or_else(|| {
                Error::Scheduling(format!("scripted event {} is not pending", next.seq))
            })?;
            let kind = if ev.is_compute() {
                RecordKind::Compute
            } else {
                RecordKind::Deliver
            };
            if kind != next.kind || ev.edge() != next.edge {
                return Err(Error::Scheduling(format!(
                    "scripted event {} does not match the pending event",
                    next.seq
                )));
            }
            next.seq
        } else {
            let eligible = w.eligible(inst);
            if eligible.is_empty() {
                break RunStatus::Deadlock;
            }
            match rng.as_mut() {
                Some(rng) => eligible[rng.gen_range(0..eligible.len())],
                None => eligible[0],
            }
        };
        records.push(step(inst, &mut w, seq)?);
    };
    Ok(RunOutcome {
        final_states: w.states(),
        trace: Trace { header, records },
        status,
    })
}

struct SyncResult {
    nodes: Vec<NodeRuntime>,
    records: Vec<Record>,
    fixed_point: bool,
}

/// Round 0 delivers the injections; each later round fires every edge with
/// work on its round-start buffers, then each node applies the product of
/// the messages it received.
fn synchronous_rounds(inst: &Instance, rounds: u64) -> Result<SyncResult> {
    let g = &inst.graph;
    let mut nodes = inst.fresh_nodes();
    let mut records = Vec::new();
    let mut dirty = vec![false; g.edges().len()];

    let mut inbox: Vec<Vec<Value>> = vec![Vec::new(); g.node_count()];
    for inj in &inst.injections {
        if !inst.algebra(inj.node).messages().is_unit(&inj.message) {
            inbox[inj.node].push(inj.message.clone());
        }
    }
    deliver_round(inst, &mut nodes, &inbox, 0, &mut dirty, &mut records);

    let has_work = |nodes: &[NodeRuntime], dirty: &[bool]| {
        g.edges()
            .iter()
            .enumerate()
            .any(|(p, e)| match inst.psi[p].mode {
                MessageMode::Incremental => nodes[e.src].buffer(p) != inst.algebra(e.src).zero(),
                MessageMode::Blocking => dirty[p],
            })
    };
    let mut done = 0;
    while done < rounds && has_work(&nodes, &dirty) {
        done += 1;
        let snapshot: Vec<Value> = g
            .edges()
            .iter()
            .enumerate()
            .map(|(p, e)| nodes[e.src].buffer(p).clone())
            .collect();
        let mut inbox: Vec<Vec<Value>> = vec![Vec::new(); g.node_count()];
        for (p, e) in g.edges().iter().enumerate() {
            let fire = match inst.psi[p].mode {
                MessageMode::Incremental => snapshot[p] != *inst.algebra(e.src).zero(),
                MessageMode::Blocking => std::mem::take(&mut dirty[p]),
            };
            if !fire {
                continue;
            }
            let inputs: Vec<Value> = inst.inputs[p]
                .iter()
                .map(|&i| snapshot[i].clone())
                .collect();
            let out = compute_message(
                e.id,
                &inst.psi[p],
                &inputs,
                &snapshot[p],
                &inst.algebra(e.src).args,
                inst.algebra(e.dst).messages(),
            )?;
            *nodes[e.src].out_buffers.get_mut(&p).expect("out buffer") = out.buffer;
            if out.deliver {
                inbox[e.dst].push(out.message);
            }
        }
        deliver_round(inst, &mut nodes, &inbox, done, &mut dirty, &mut records);
    }
    let fixed_point = !has_work(&nodes, &dirty);
    Ok(SyncResult {
        nodes,
        records,
        fixed_point,
    })
}

fn deliver_round(
    inst: &Instance,
    nodes: &mut [NodeRuntime],
    inbox: &[Vec<Value>],
    round: u64,
    dirty: &mut [bool],
    records: &mut Vec<Record>,
) {
    for (u, msgs) in inbox.iter().enumerate() {
        if msgs.is_empty() {
            continue;
        }
        let alg = inst.algebra(u);
        let m = msgs.iter().fold(alg.messages().unit.clone(), |acc, x| {
            alg.messages().op(x, &acc)
        });
        let applied = apply_message(&mut nodes[u], &m, alg);
        for &c in &applied.changed {
            for &r in inst.readers(c) {
                if inst.psi[r].mode == MessageMode::Blocking {
                    dirty[r] = true;
                }
            }
        }
        records.push(Record {
            step: round,
            seq: records.len() as u64,
            kind: RecordKind::Round,
            edge: None,
            node: u as NodeId,
            payload: Some(m),
            state_before: Some(applied.state_before),
            state_after: Some(nodes[u].state.clone()),
            argument: Some(applied.argument),
            message: None,
        });
    }
}

/// Node states after the injections and `rounds` synchronous rounds
/// (fewer if a fixed point is reached first, which changes nothing).
pub fn synchronous_run(inst: &Instance, rounds: u64) -> Result<Vec<Value>> {
    Ok(synchronous_rounds(inst, rounds)?
        .nodes
        .into_iter()
        .map(|n| n.state)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    /// Distinct final state vectors of complete interleavings.
    pub finals: Vec<Vec<Value>>,
    /// Complete interleavings reaching quiescence.
    pub interleavings: u64,
    /// Explored prefixes, counting the empty one.
    pub prefixes: u64,
    /// Leaves that ended in a deadlock or hit the event cap.
    pub stuck: u64,
    /// False when the prefix bound stopped the search early.
    pub complete: bool,
}

/// Depth-first exploration of every choice of eligible event.
pub fn enumerate_interleavings(inst: &Instance, caps: &Caps) -> Result<EnumerationReport> {
    struct Search<'a> {
        inst: &'a Instance,
        caps: &'a Caps,
        finals: BTreeSet<Vec<Value>>,
        interleavings: u64,
        prefixes: u64,
        stuck: u64,
        complete: bool,
    }
    impl Search<'_> {
        fn visit(&mut self, w: WorldState) -> Result<()> {
            if self.prefixes >= self.caps.enumeration_bound {
                self.complete = false;
                return Ok(());
            }
            self.prefixes += 1;
            if w.pending_len() == 0 {
                if detect_quiescence(self.inst, &w) {
                    self.interleavings += 1;
                    self.finals.insert(w.states());
                } else {
                    self.stuck += 1;
                }
                return Ok(());
            }
            let eligible = w.eligible(self.inst);
            if eligible.is_empty() || w.step >= self.caps.event_cap {
                self.stuck += 1;
                return Ok(());
            }
            for seq in eligible {
                let mut next = w.clone();
                step(self.inst, &mut next, seq)?;
                self.visit(next)?;
                if !self.complete {
                    break;
                }
            }
            Ok(())
        }
    }
    let mut s = Search {
        inst,
        caps,
        finals: BTreeSet::new(),
        interleavings: 0,
        prefixes: 0,
        stuck: 0,
        complete: true,
    };
    s.visit(WorldState::new(inst))?;
    Ok(EnumerationReport {
        finals: s.finals.into_iter().collect(),
        interleavings: s.interleavings,
        prefixes: s.prefixes,
        stuck: s.stuck,
        complete: s.complete,
    })
}
