use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::value::Value;

/// Position of a node; nodes are numbered `0..node_count`.
pub type NodeId = usize;

/// User-facing edge identifier. Internally edges are addressed by their
/// position in [`Graph::edges`].
pub type EdgeId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub src: NodeId,
    pub dst: NodeId,
    /// Parameters of the edge's message function (a length, a matrix, ...).
    pub payload: Value,
}

/// A directed multigraph; self-loops allowed.
#[derive(Clone, Debug)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
    by_id: HashMap<EdgeId, usize>,
}

impl Graph {
    pub fn new(node_count: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut in_edges = vec![Vec::new(); node_count];
        let mut out_edges = vec![Vec::new(); node_count];
        let mut by_id = HashMap::with_capacity(edges.len());
        for (pos, e) in edges.iter().enumerate() {
            if e.src >= node_count || e.dst >= node_count {
                return Err(Error::spec(format!(
                    "edge {} ({} -> {}) references a missing node",
                    e.id, e.src, e.dst
                )));
            }
            if by_id.insert(e.id, pos).is_some() {
                return Err(Error::spec(format!("duplicate edge id {}", e.id)));
            }
            out_edges[e.src].push(pos);
            in_edges[e.dst].push(pos);
        }
        Ok(Graph {
            node_count,
            edges,
            in_edges,
            out_edges,
            by_id,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, pos: usize) -> &Edge {
        &self.edges[pos]
    }

    pub fn position(&self, id: EdgeId) -> Option<usize> {
        self.by_id.get(&id).copied()
    }

    /// Positions of edges entering `u`, in edge order.
    pub fn in_edges(&self, u: NodeId) -> &[usize] {
        &self.in_edges[u]
    }

    /// Positions of edges leaving `u`, in edge order.
    pub fn out_edges(&self, u: NodeId) -> &[usize] {
        &self.out_edges[u]
    }

    /// `N_u = { v | (v, u) ∈ E }`, in edge order (with repetition for parallel edges).
    pub fn neighborhood(&self, u: NodeId) -> Vec<NodeId> {
        self.in_edges[u]
            .iter()
            .map(|&p| self.edges[p].src)
            .collect()
    }

    pub fn max_out_degree(&self) -> usize {
        self.out_edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Nodes reachable from `seeds` (seeds included) along edge direction.
    pub fn reachable_from(&self, seeds: impl IntoIterator<Item = NodeId>) -> Vec<bool> {
        let mut seen = vec![false; self.node_count];
        let mut stack: Vec<NodeId> = Vec::new();
        for s in seeds {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(u) = stack.pop() {
            for &p in &self.out_edges[u] {
                let v = self.edges[p].dst;
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}
