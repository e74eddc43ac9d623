use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::graph::{EdgeId, Graph, NodeId};
use super::message::{MessageFn, MessageMode};
use super::node::NodeRuntime;
use crate::algebra::{
    check_action, check_cocycle, check_monoid_laws, ArgumentFn, CheckConfig, ViolationReport,
};
use crate::canon::{sha256_hex, to_canonical_string};
use crate::error::{Error, Result};
use crate::value::Value;

/// An externally injected message, delivered before any edge fires.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Injection {
    pub node: NodeId,
    pub message: Value,
}

/// A graph with node algebras, per-edge message functions, initial states
/// and injected messages: everything a run needs.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub graph: Graph,
    pub algebras: Vec<ArgumentFn>,
    /// Index into `algebras` for each node.
    pub node_algebra: Vec<usize>,
    /// ψ for each edge position.
    pub psi: Vec<MessageFn>,
    /// Buffer positions each ψ reads; an incremental ψ reads its own edge.
    pub inputs: Vec<Vec<usize>>,
    pub initial: Vec<Value>,
    pub injections: Vec<Injection>,
    readers: Vec<Vec<usize>>,
    fingerprint: String,
}

/// The reports from [`Instance::verify`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verification {
    pub passed: bool,
    pub reports: Vec<ViolationReport>,
}

impl Instance {
    /// Builds an instance. `inputs` defaults to each edge reading its own buffer.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        graph: Graph,
        algebras: Vec<ArgumentFn>,
        node_algebra: Vec<usize>,
        psi: Vec<MessageFn>,
        inputs: Option<Vec<Vec<usize>>>,
        initial: Vec<Value>,
        injections: Vec<Injection>,
    ) -> Result<Self> {
        let n = graph.node_count();
        let m = graph.edges().len();
        let inputs = inputs.unwrap_or_else(|| (0..m).map(|p| vec![p]).collect());
        for (what, len, want) in [
            ("node algebra", node_algebra.len(), n),
            ("initial state", initial.len(), n),
            ("message function", psi.len(), m),
            ("input list", inputs.len(), m),
        ] {
            if len != want {
                return Err(Error::spec(format!(
                    "expected {want} {what} entries, found {len}"
                )));
            }
        }
        if let Some(&bad) = node_algebra.iter().find(|&&a| a >= algebras.len()) {
            return Err(Error::spec(format!(
                "node algebra index {bad} out of range"
            )));
        }
        for u in graph.nodes() {
            let alg = &algebras[node_algebra[u]];
            if !alg.states().contains(&initial[u]) {
                return Err(Error::spec(format!(
                    "initial state {} of node {u} is not in the states of `{}`",
                    initial[u], alg.name
                )));
            }
        }
        for inj in &injections {
            if inj.node >= n {
                return Err(Error::spec(format!(
                    "injection targets missing node {}",
                    inj.node
                )));
            }
            let alg = &algebras[node_algebra[inj.node]];
            if !alg.messages().carrier.contains(&inj.message) {
                return Err(Error::spec(format!(
                    "injected {} is not a message of node {}",
                    inj.message, inj.node
                )));
            }
        }
        let mut readers = vec![Vec::new(); m];
        for (pos, (f, ins)) in psi.iter().zip(&inputs).enumerate() {
            let id = graph.edge(pos).id;
            match f.mode {
                MessageMode::Incremental if ins.as_slice() != [pos] => {
                    return Err(Error::spec(format!(
                        "edge {id}: an incremental message function reads only its own edge"
                    )));
                }
                MessageMode::Blocking if ins.len() != f.arity => {
                    return Err(Error::spec(format!(
                        "edge {id}: ψ `{}` takes {} inputs, {} given",
                        f.name,
                        f.arity,
                        ins.len()
                    )));
                }
                _ => {}
            }
            for &i in ins {
                if i >= m {
                    return Err(Error::spec(format!(
                        "edge {id} reads missing edge position {i}"
                    )));
                }
                readers[i].push(pos);
            }
        }
        let mut inst = Instance {
            name: name.into(),
            graph,
            algebras,
            node_algebra,
            psi,
            inputs,
            initial,
            injections,
            readers,
            fingerprint: String::new(),
        };
        inst.fingerprint = sha256_hex(to_canonical_string(&inst.describe()).as_bytes());
        Ok(inst)
    }

    fn describe(&self) -> serde_json::Value {
        let edges: Vec<_> = self
            .graph
            .edges()
            .iter()
            .enumerate()
            .map(|(p, e)| {
                json!({
                    "id": e.id,
                    "src": e.src,
                    "dst": e.dst,
                    "payload": e.payload,
                    "psi": self.psi[p].name,
                    "mode": self.psi[p].mode,
                    "inputs": self.inputs[p].iter().map(|&i| self.graph.edge(i).id).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "name": self.name,
            "nodes": self.graph.node_count(),
            "edges": edges,
            "algebras": self.node_algebra.iter().map(|&a| self.algebras[a].name.clone()).collect::<Vec<_>>(),
            "initial": self.initial,
            "injections": self.injections,
        })
    }

    /// Hex sha256 of the canonical description of the instance.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn algebra(&self, u: NodeId) -> &ArgumentFn {
        &self.algebras[self.node_algebra[u]]
    }

    /// Edge positions whose ψ reads the buffer of edge position `pos`.
    pub fn readers(&self, pos: usize) -> &[usize] {
        &self.readers[pos]
    }

    pub fn edge_position(&self, id: EdgeId) -> Result<usize> {
        self.graph
            .position(id)
            .ok_or_else(|| Error::spec(format!("no edge with id {id}")))
    }

    pub fn has_blocking(&self) -> bool {
        self.psi.iter().any(|f| f.mode == MessageMode::Blocking)
    }

    /// Fresh runtimes: initial states, zero buffers.
    pub fn fresh_nodes(&self) -> Vec<NodeRuntime> {
        self.graph
            .nodes()
            .map(|u| {
                NodeRuntime::new(
                    self.initial[u].clone(),
                    self.graph.out_edges(u),
                    self.algebra(u),
                )
            })
            .collect()
    }

    /// Checks every node algebra (monoid laws of `M` and `A`, the action,
    /// the cocycle laws) and every incremental ψ that is not already
    /// flagged as a homomorphism, recording ψ outcomes in `hom_verified`.
    /// Results are memoized per algebra and ψ name for the life of the
    /// process, so names must identify behaviour.
    pub fn verify(&mut self, cfg: &CheckConfig) -> Result<Verification> {
        let mut reports = Vec::new();
        for alg in &self.algebras {
            let key = format!(
                "alg|{}|{}|{}|{}|{cfg:?}",
                alg.name,
                alg.messages().carrier.describe(),
                alg.states().describe(),
                alg.args.carrier.describe()
            );
            reports.extend(cached(key, || {
                Ok(vec![
                    check_monoid_laws(alg.messages(), cfg)?,
                    check_monoid_laws(&alg.args, cfg)?,
                    check_action(&alg.action, cfg),
                    check_cocycle(alg, cfg),
                ])
            })?);
        }
        for pos in 0..self.psi.len() {
            let f = &self.psi[pos];
            if f.mode != MessageMode::Incremental || f.hom_verified() {
                continue;
            }
            let e = self.graph.edge(pos);
            let args = &self.algebras[self.node_algebra[e.src]].args;
            let msgs = self.algebras[self.node_algebra[e.dst]].messages();
            let key = format!(
                "psi|{}|{}|{}|{}|{}|{cfg:?}",
                f.name,
                args.name,
                args.carrier.describe(),
                msgs.name,
                msgs.carrier.describe()
            );
            let (args, msgs) = (args.clone(), msgs.clone());
            let f = &mut self.psi[pos];
            let report = cached(key, || {
                let mut probe = f.clone();
                Ok(vec![probe.verify_homomorphism(&args, &msgs, cfg)?])
            })?;
            if report[0].passed {
                *f = f.clone().assume_homomorphism();
            }
            reports.extend(report);
        }
        let passed = reports.iter().all(|r| r.passed);
        Ok(Verification { passed, reports })
    }
}

fn cached(
    key: String,
    run: impl FnOnce() -> Result<Vec<ViolationReport>>,
) -> Result<Vec<ViolationReport>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Vec<ViolationReport>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }
    let fresh = run()?;
    cache.lock().expect("cache lock").insert(key, fresh.clone());
    Ok(fresh)
}
