use super::graph::Graph;
use super::message::MessageFn;
use crate::algebra::{ActionSpec, MonoidSpec};
use crate::error::{Error, Result};
use crate::value::Value;

/// One fully synchronous round: every node reads its neighbours'
/// round-start states, `x'_u = φ(x_u, ⊕_{v ∈ N_u} ψ_{vu}(x_v))`, with
/// `φ(x, m) = m·x`. Nodes without in-edges aggregate to the unit.
pub fn gather_scatter_round(
    g: &Graph,
    states: &[Value],
    psi: &[MessageFn],
    aggregate: &MonoidSpec,
    update: &ActionSpec,
) -> Result<Vec<Value>> {
    if states.len() != g.node_count() {
        return Err(Error::Dimension {
            expected: g.node_count(),
            actual: states.len(),
        });
    }
    if psi.len() != g.edges().len() {
        return Err(Error::Dimension {
            expected: g.edges().len(),
            actual: psi.len(),
        });
    }
    g.nodes()
        .map(|u| {
            let mut acc = aggregate.unit.clone();
            for &p in g.in_edges(u) {
                let e = g.edge(p);
                let msg = psi[p].eval(std::slice::from_ref(&states[e.src]))?;
                if !aggregate.carrier.contains(&msg) {
                    return Err(Error::TypeFault {
                        edge: e.id,
                        value: msg,
                    });
                }
                acc = aggregate.op(&acc, &msg);
            }
            Ok(update.act(&acc, &states[u]))
        })
        .collect()
}
