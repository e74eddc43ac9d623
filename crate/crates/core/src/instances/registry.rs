//! Names that instance files use for algebras, message functions, oracles
//! and decoders.

use serde_json::json;

use super::file::InstanceFile;
use super::oracle::{oracle_add, oracle_bellman_ford, oracle_maxmax_fixpoint, oracle_predecessors};
use crate::algebra::{naive_delta, stock, ArgumentFn};
use crate::error::{Error, Result};
use crate::fabric::{
    tropical_apply, Edge, Graph, Instance, MessageFn, MessageMode, NodeId, TropicalMatrix,
};
use crate::value::Value;

pub const ALGEBRAS: &[&str] = &[
    "bellman_ford",
    "bellman_ford_paths",
    "carry",
    "overflow",
    "max",
    "maxmax:<k>",
    "naive_max",
    "naive_or",
    "naive_nat",
    "naive_mul",
    "naive_xor",
];
pub const MESSAGE_FNS: &[&str] = &[
    "identity",
    "minus",
    "path_minus",
    "tropical",
    "reflect",
    "coordinate_sum",
    "join_minus",
];
pub const ORACLES: &[&str] = &[
    "bellman_ford",
    "bellman_ford_paths",
    "integer_addition",
    "maxmax_fixpoint",
];
pub const DECODERS: &[&str] = &["distances", "paths", "carry", "states"];

/// Verification window for the scalar max carriers.
const SCALAR_WINDOW: i64 = 20;
/// Verification window for ℕ-valued messages and arguments.
const NAT_WINDOW: i64 = 200;

fn named(mut alg: ArgumentFn, name: &str) -> ArgumentFn {
    alg.name = name.to_string();
    alg
}

/// The node algebra registered as `name` for a graph of `nodes` nodes.
pub fn algebra(name: &str, nodes: usize) -> Result<ArgumentFn> {
    let alg = match name {
        "bellman_ford" => stock::semilattice_delta(&stock::max_bot(-SCALAR_WINDOW, 0)),
        "bellman_ford_paths" => {
            stock::semilattice_delta(&stock::lex_path_max(10, nodes.max(1) as i64))
        }
        "carry" => stock::carry_delta(NAT_WINDOW),
        "overflow" => {
            let nat = stock::nat_add(0, 60);
            stock::zero_delta(&stock::self_action(&nat), &nat)
        }
        "max" => stock::semilattice_delta(&stock::max_bot(-SCALAR_WINDOW, SCALAR_WINDOW)),
        "naive_max" => naive_delta(&stock::max_bot(0, SCALAR_WINDOW))?,
        "naive_or" => naive_delta(&stock::bool_or())?,
        "naive_nat" => naive_delta(&stock::nat_add(0, SCALAR_WINDOW))?,
        "naive_mul" => naive_delta(&stock::nat_mul(1, SCALAR_WINDOW))?,
        "naive_xor" => naive_delta(&stock::bool_xor())?,
        other => match other.strip_prefix("maxmax:").map(str::parse::<usize>) {
            Some(Ok(k)) if (1..=8).contains(&k) => {
                // Keep the verification window near a hundred vectors.
                let half = match k {
                    1 => SCALAR_WINDOW,
                    2 => 3,
                    _ => 1,
                };
                stock::semilattice_delta(&stock::tropical_vector(k, -half, half))
            }
            _ => return Err(Error::UnknownName(other.to_string())),
        },
    };
    Ok(named(alg, name))
}

fn int_payload(name: &str, payload: &Value) -> Result<i64> {
    payload.int().ok_or_else(|| {
        Error::spec(format!(
            "ψ `{name}` needs an integer payload, got {payload}"
        ))
    })
}

fn minus(x: &Value, w: i64) -> Value {
    match x {
        Value::Int(v) => v
            .checked_sub(w)
            .map_or(Value::Tuple(Vec::new()), Value::Int),
        other => other.clone(),
    }
}

/// The message function `name` on an edge from `src` carrying `payload`.
/// `arity` is the number of inputs for blocking mode.
pub fn message_fn(
    name: &str,
    payload: &Value,
    src: NodeId,
    mode: MessageMode,
    arity: usize,
) -> Result<MessageFn> {
    let mut label = format!("{name}[{}]", crate::canon::to_canonical_string(payload));
    if name == "path_minus" {
        label.push_str(&format!("@{src}"));
    }
    let single: Box<dyn Fn(&Value) -> Value + Send + Sync> = match name {
        "identity" => Box::new(Value::clone),
        "minus" => {
            let w = int_payload(name, payload)?;
            Box::new(move |x| minus(x, w))
        }
        "path_minus" => {
            let w = int_payload(name, payload)?;
            let via = -(src as i64);
            Box::new(move |x| match x.tuple() {
                Some([len, _]) => Value::Tuple(vec![minus(len, w), Value::Int(via)]),
                _ => x.clone(),
            })
        }
        "tropical" => {
            let m = TropicalMatrix::from_value(payload)?;
            Box::new(move |x| match x.tuple().map(|xs| tropical_apply(&m, xs)) {
                Some(Ok(y)) => Value::Tuple(y),
                _ => Value::Tuple(Vec::new()),
            })
        }
        "reflect" => {
            let c = int_payload(name, payload)?;
            Box::new(move |x| match x {
                Value::Int(v) => Value::Int(c - v),
                other => other.clone(),
            })
        }
        "coordinate_sum" => Box::new(|x| {
            x.tuple()
                .and_then(|xs| xs.iter().try_fold(Value::Int(0), |acc, v| acc.trop_mul(v)))
                .unwrap_or(Value::Tuple(Vec::new()))
        }),
        "join_minus" => {
            let w = int_payload(name, payload)?;
            return match mode {
                MessageMode::Blocking => MessageFn::blocking(label, arity, move |xs| {
                    let joined = xs.iter().try_fold(Value::Bot, |acc, x| acc.join(x));
                    joined.map_or(Value::Tuple(Vec::new()), |j| minus(&j, w))
                }),
                MessageMode::Incremental => Ok(MessageFn::incremental(label, move |x| minus(x, w))),
            };
        }
        other => return Err(Error::UnknownName(other.to_string())),
    };
    match mode {
        MessageMode::Incremental => Ok(MessageFn::incremental(label, single)),
        MessageMode::Blocking if arity == 1 => {
            MessageFn::blocking(label, 1, move |xs| single(&xs[0]))
        }
        MessageMode::Blocking => Err(Error::spec(format!("ψ `{name}` takes exactly one input"))),
    }
}

/// Builds the runtime instance described by `file`. Nothing is verified.
pub fn build(file: &InstanceFile) -> Result<Instance> {
    let n = file.graph.nodes;
    let mut names: Vec<String> = Vec::new();
    let mut node_algebra = Vec::with_capacity(n);
    if let Some(list) = &file.node_algebras {
        if list.len() != n {
            return Err(Error::spec(format!(
                "{} node algebras given for {n} nodes",
                list.len()
            )));
        }
    }
    for u in 0..n {
        let name = file.node_algebra(u);
        let idx = match names.iter().position(|x| x == name) {
            Some(i) => i,
            None => {
                names.push(name.to_string());
                names.len() - 1
            }
        };
        node_algebra.push(idx);
    }
    let algebras = names
        .iter()
        .map(|a| algebra(a, n))
        .collect::<Result<Vec<_>>>()?;
    let graph = Graph::new(
        n,
        file.graph
            .edges
            .iter()
            .map(|e| Edge {
                id: e.id,
                src: e.src,
                dst: e.dst,
                payload: e.payload.clone(),
            })
            .collect(),
    )?;
    let mut psi = Vec::new();
    let mut inputs = Vec::new();
    for (pos, e) in file.graph.edges.iter().enumerate() {
        let ins = match &e.inputs {
            None => vec![pos],
            Some(ids) => ids
                .iter()
                .map(|&id| {
                    graph.position(id).ok_or_else(|| {
                        Error::spec(format!("edge {} reads unknown edge {id}", e.id))
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let mut f = message_fn(&e.psi, &e.payload, e.src, e.mode, ins.len())?;
        if e.trusted {
            f = f.assume_homomorphism();
        }
        psi.push(f);
        inputs.push(ins);
    }
    Instance::new(
        file.name.clone(),
        graph,
        algebras,
        node_algebra,
        psi,
        Some(inputs),
        file.initial_states.clone(),
        file.injections.clone(),
    )
}

fn weighted_edges(file: &InstanceFile) -> Result<Vec<(usize, usize, u64)>> {
    file.graph
        .edges
        .iter()
        .map(|e| match e.payload.int() {
            Some(w) if w >= 0 => Ok((e.src, e.dst, w as u64)),
            _ => Err(Error::spec(format!(
                "edge {} needs a non-negative integer weight",
                e.id
            ))),
        })
        .collect()
}

fn single_source(file: &InstanceFile) -> Result<usize> {
    match file.injections.as_slice() {
        [inj] => Ok(inj.node),
        _ => Err(Error::spec(
            "a shortest-path oracle needs exactly one injected source",
        )),
    }
}

fn small_digit(v: &Value, what: &str) -> Result<u8> {
    match v.int() {
        Some(d) if (0..=9).contains(&d) => Ok(d as u8),
        _ => Err(Error::spec(format!("{what} {v} is not a decimal digit"))),
    }
}

fn opt_vec(v: &Value) -> Result<Vec<Option<i64>>> {
    v.tuple()
        .ok_or_else(|| Error::spec(format!("{v} is not a vector")))?
        .iter()
        .map(|x| match x {
            Value::Bot => Ok(None),
            Value::Int(i) => Ok(Some(*i)),
            other => Err(Error::spec(format!("{other} is not a tropical scalar"))),
        })
        .collect()
}

/// Expected final states under the oracle the file names, in the
/// instance's own encoding. `None` when no oracle is registered.
pub fn oracle(file: &InstanceFile) -> Result<Option<Vec<Value>>> {
    let Some(name) = file.oracle.as_deref() else {
        return Ok(None);
    };
    let n = file.graph.nodes;
    let states = match name {
        "bellman_ford" => {
            let dist = oracle_bellman_ford(n, &weighted_edges(file)?, single_source(file)?);
            dist.into_iter()
                .map(|d| d.map_or(Value::Bot, |d| Value::Int(-(d as i64))))
                .collect()
        }
        "bellman_ford_paths" => {
            let edges = weighted_edges(file)?;
            let source = single_source(file)?;
            let dist = oracle_bellman_ford(n, &edges, source);
            let pred = oracle_predecessors(n, &edges, source, &dist);
            dist.iter()
                .zip(pred)
                .map(|(d, p)| match (d, p) {
                    (Some(d), Some(p)) => {
                        Value::Tuple(vec![Value::Int(-(*d as i64)), Value::Int(-(p as i64))])
                    }
                    _ => Value::Bot,
                })
                .collect()
        }
        "integer_addition" => {
            let k = n
                .checked_sub(1)
                .ok_or_else(|| Error::spec("an adder needs an overflow node"))?;
            if (0..k).any(|u| file.node_algebra(u) != "carry") || file.node_algebra(k) != "overflow"
            {
                return Err(Error::spec(
                    "integer_addition expects carry digits followed by one overflow node",
                ));
            }
            let x = (0..k)
                .map(|u| small_digit(&file.initial_states[u], "digit"))
                .collect::<Result<Vec<_>>>()?;
            let mut y = vec![0u8; k];
            for inj in &file.injections {
                if inj.node >= k {
                    return Err(Error::spec(
                        "integer_addition expects injections on digit nodes only",
                    ));
                }
                y[inj.node] = y[inj.node]
                    .checked_add(small_digit(&inj.message, "injected digit")?)
                    .filter(|d| *d <= 9)
                    .ok_or_else(|| Error::spec("one injected digit per node"))?;
            }
            let (digits, carry) = oracle_add(&x, &y);
            let base = file.initial_states[k]
                .int()
                .ok_or_else(|| Error::spec("overflow state must be an integer"))?;
            digits
                .into_iter()
                .map(|d| Value::Int(d as i64))
                .chain(std::iter::once(Value::Int(base + carry as i64)))
                .collect()
        }
        "maxmax_fixpoint" => {
            let mut features = file
                .initial_states
                .iter()
                .map(opt_vec)
                .collect::<Result<Vec<_>>>()?;
            for inj in &file.injections {
                let add = opt_vec(&inj.message)?;
                for (a, b) in features[inj.node].iter_mut().zip(add) {
                    *a = (*a).max(b);
                }
            }
            let edges = file
                .graph
                .edges
                .iter()
                .map(|e| {
                    let rows = e
                        .payload
                        .tuple()
                        .ok_or_else(|| {
                            Error::spec(format!("edge {} needs a matrix payload", e.id))
                        })?
                        .iter()
                        .map(opt_vec)
                        .collect::<Result<Vec<_>>>()?;
                    Ok((e.src, e.dst, rows))
                })
                .collect::<Result<Vec<_>>>()?;
            let fixed = oracle_maxmax_fixpoint(&features, &edges, 10_000)
                .ok_or_else(|| Error::spec("max-max iteration does not converge"))?;
            fixed
                .into_iter()
                .map(|v| Value::Tuple(v.into_iter().map(Value::from_opt).collect()))
                .collect()
        }
        other => return Err(Error::UnknownName(other.to_string())),
    };
    Ok(Some(states))
}

fn distance(v: &Value) -> serde_json::Value {
    let len = match v {
        Value::Tuple(items) => items.first().and_then(Value::int),
        other => other.int(),
    };
    len.map_or(serde_json::Value::Null, |l| json!(-l))
}

/// Human-facing rendering of final states under the file's decoder.
pub fn decode(file: &InstanceFile, states: &[Value]) -> Result<serde_json::Value> {
    Ok(match file.decoder.as_deref().unwrap_or("states") {
        "distances" => json!({ "distances": states.iter().map(distance).collect::<Vec<_>>() }),
        "paths" => {
            let preds: Vec<_> = states
                .iter()
                .map(|v| match v.tuple() {
                    Some([_, p]) => p.int().map_or(serde_json::Value::Null, |p| json!(-p)),
                    _ => serde_json::Value::Null,
                })
                .collect();
            json!({
                "distances": states.iter().map(distance).collect::<Vec<_>>(),
                "predecessors": preds,
            })
        }
        "carry" => {
            let mut digits = Vec::new();
            let mut overflow = json!(0);
            for (u, s) in states.iter().enumerate() {
                match file.node_algebra(u) {
                    "carry" => digits.push(json!(s.int())),
                    "overflow" => overflow = json!(s.int()),
                    _ => {}
                }
            }
            json!({ "digits": digits, "overflow": overflow })
        }
        "states" => json!({ "states": states }),
        other => return Err(Error::UnknownName(other.to_string())),
    })
}
