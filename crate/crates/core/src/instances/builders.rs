use super::file::{EdgeFile, GraphFile, InstanceFile, INSTANCE_VERSION};
use super::registry::build;
use crate::algebra::CheckConfig;
use crate::error::{Error, Result};
use crate::fabric::{Graph, Injection, Instance, MessageMode, NodeId, TropicalMatrix};
use crate::value::Value;

/// Longest operand accepted by the carry adder.
pub const MAX_DIGITS: usize = 30;

fn edge(id: u32, src: NodeId, dst: NodeId, psi: &str, payload: Value) -> EdgeFile {
    EdgeFile {
        id,
        src,
        dst,
        psi: psi.into(),
        payload,
        mode: MessageMode::Incremental,
        inputs: None,
        trusted: false,
    }
}

/// Builds and verifies the instance of `file`; any failed law is an error.
pub fn verified(file: &InstanceFile) -> Result<Instance> {
    let mut inst = build(file)?;
    let v = inst.verify(&CheckConfig::default())?;
    if !v.passed {
        let failed: Vec<&str> = v
            .reports
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.subject.as_str())
            .collect();
        return Err(Error::Verification(failed.join(", ")));
    }
    Ok(inst)
}

/// Shortest paths from `source` over a graph whose edge payloads are
/// non-negative integer lengths. States are negated distances under max;
/// the source starts at ⊥ and receives the message 0. With
/// `predecessors`, states are `(-distance, -predecessor)` pairs instead.
pub fn bellman_ford_file(
    name: &str,
    graph: &Graph,
    source: NodeId,
    predecessors: bool,
) -> Result<InstanceFile> {
    if source >= graph.node_count() {
        return Err(Error::spec(format!("source {source} is not a node")));
    }
    let (psi, algebra, oracle, decoder, zero) = if predecessors {
        (
            "path_minus",
            "bellman_ford_paths",
            "bellman_ford_paths",
            "paths",
            Value::Tuple(vec![Value::Int(0), Value::Int(-(source as i64))]),
        )
    } else {
        (
            "minus",
            "bellman_ford",
            "bellman_ford",
            "distances",
            Value::Int(0),
        )
    };
    let edges = graph
        .edges()
        .iter()
        .map(|e| match e.payload.int() {
            Some(w) if w >= 0 => Ok(edge(e.id, e.src, e.dst, psi, Value::Int(w))),
            _ => Err(Error::spec(format!(
                "edge {} has length {}; lengths must be non-negative integers",
                e.id, e.payload
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InstanceFile {
        version: INSTANCE_VERSION,
        name: name.into(),
        algebra: algebra.into(),
        node_algebras: None,
        graph: GraphFile {
            nodes: graph.node_count(),
            edges,
        },
        initial_states: vec![Value::Bot; graph.node_count()],
        injections: vec![Injection {
            node: source,
            message: zero,
        }],
        oracle: Some(oracle.into()),
        decoder: Some(decoder.into()),
    })
}

pub fn make_bellman_ford(graph: &Graph, source: NodeId) -> Result<Instance> {
    verified(&bellman_ford_file("bellman_ford", graph, source, false)?)
}

/// Shortest paths with smallest-id predecessor tracking.
pub fn make_bellman_ford_paths(graph: &Graph, source: NodeId) -> Result<Instance> {
    verified(&bellman_ford_file(
        "bellman_ford_paths",
        graph,
        source,
        true,
    )?)
}

/// `x + y` on a chain of digit nodes, least significant digit first,
/// followed by an overflow node. The digit nodes start at the digits of
/// `x` and receive the digits of `y`; carries travel along identity edges.
pub fn carry_file(x: &[u8], y: &[u8]) -> Result<InstanceFile> {
    let k = x.len().max(y.len()).max(1);
    if k > MAX_DIGITS {
        return Err(Error::spec(format!(
            "operands longer than {MAX_DIGITS} digits"
        )));
    }
    if let Some(d) = x.iter().chain(y).find(|&&d| d > 9) {
        return Err(Error::spec(format!("{d} is not a decimal digit")));
    }
    let digit = |ds: &[u8], i: usize| Value::Int(ds.get(i).copied().unwrap_or(0) as i64);
    let mut initial: Vec<Value> = (0..k).map(|i| digit(x, i)).collect();
    initial.push(Value::Int(0));
    let mut node_algebras = vec!["carry".to_string(); k];
    node_algebras.push("overflow".into());
    Ok(InstanceFile {
        version: INSTANCE_VERSION,
        name: "carry".into(),
        algebra: "carry".into(),
        node_algebras: Some(node_algebras),
        graph: GraphFile {
            nodes: k + 1,
            edges: (0..k)
                .map(|i| edge(i as u32, i, i + 1, "identity", Value::Tuple(Vec::new())))
                .collect(),
        },
        initial_states: initial,
        injections: (0..k)
            .map(|i| Injection {
                node: i,
                message: digit(y, i),
            })
            .collect(),
        oracle: Some("integer_addition".into()),
        decoder: Some("carry".into()),
    })
}

pub fn make_carry_adder(x: &[u8], y: &[u8]) -> Result<Instance> {
    verified(&carry_file(x, y)?)
}

/// Max-max layer: width-`k` tropical feature vectors, one tropical matrix
/// per edge, aggregation and update by componentwise max. Nodes start at
/// ⊥ and receive their features as messages, so quiescence is the least
/// fixed point of `x_u = max(f_u, max_v W_vu ⊗ x_v)`.
pub fn maxmax_file(
    graph: &Graph,
    features: &[Vec<Value>],
    matrices: &[TropicalMatrix],
) -> Result<InstanceFile> {
    let n = graph.node_count();
    if features.len() != n {
        return Err(Error::Dimension {
            expected: n,
            actual: features.len(),
        });
    }
    if matrices.len() != graph.edges().len() {
        return Err(Error::Dimension {
            expected: graph.edges().len(),
            actual: matrices.len(),
        });
    }
    let k = features.first().map_or(1, Vec::len);
    if let Some(f) = features.iter().find(|f| f.len() != k) {
        return Err(Error::Dimension {
            expected: k,
            actual: f.len(),
        });
    }
    for m in matrices {
        if m.rows() != k || m.cols() != k {
            return Err(Error::Dimension {
                expected: k,
                actual: if m.rows() != k { m.rows() } else { m.cols() },
            });
        }
    }
    let edges = graph
        .edges()
        .iter()
        .zip(matrices)
        .map(|(e, m)| edge(e.id, e.src, e.dst, "tropical", m.to_value()))
        .collect();
    Ok(InstanceFile {
        version: INSTANCE_VERSION,
        name: "maxmax".into(),
        algebra: format!("maxmax:{k}"),
        node_algebras: None,
        graph: GraphFile { nodes: n, edges },
        initial_states: vec![Value::bot_vector(k); n],
        injections: features
            .iter()
            .enumerate()
            .filter(|(_, f)| f.iter().any(|x| !x.is_bot()))
            .map(|(u, f)| Injection {
                node: u,
                message: Value::Tuple(f.clone()),
            })
            .collect(),
        oracle: Some("maxmax_fixpoint".into()),
        decoder: Some("states".into()),
    })
}

pub fn make_maxmax_layer(
    graph: &Graph,
    features: &[Vec<Value>],
    matrices: &[TropicalMatrix],
) -> Result<Instance> {
    verified(&maxmax_file(graph, features, matrices)?)
}

/// Two max nodes joined by `ψ(a) = 10 - a`, which reverses the order and
/// so is not a homomorphism of max, yet is flagged as one. The sender
/// receives 0 and 1; whether ψ sees them separately or combined changes the
/// receiver's final state.
pub fn sabotaged_file() -> InstanceFile {
    let mut e = edge(0, 0, 1, "reflect", Value::Int(10));
    e.trusted = true;
    InstanceFile {
        version: INSTANCE_VERSION,
        name: "sabotaged".into(),
        algebra: "max".into(),
        node_algebras: None,
        graph: GraphFile {
            nodes: 2,
            edges: vec![e],
        },
        initial_states: vec![Value::Bot, Value::Bot],
        injections: vec![
            Injection {
                node: 0,
                message: Value::Int(0),
            },
            Injection {
                node: 0,
                message: Value::Int(1),
            },
        ],
        oracle: None,
        decoder: Some("states".into()),
    }
}

pub fn make_sabotaged() -> Result<Instance> {
    verified(&sabotaged_file())
}
