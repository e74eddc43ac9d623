use serde::{Deserialize, Serialize};

use crate::canon::to_canonical_string;
use crate::error::{Error, Result};
use crate::fabric::{EdgeId, Injection, MessageMode, NodeId};
use crate::value::Value;

pub const INSTANCE_VERSION: u32 = 1;

/// On-disk description of an instance. Algebras, message functions,
/// oracles and decoders are referenced by registry name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub name: String,
    /// Node algebra used where `node_algebras` gives none.
    pub algebra: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_algebras: Option<Vec<String>>,
    pub graph: GraphFile,
    pub initial_states: Vec<Value>,
    #[serde(default)]
    pub injections: Vec<Injection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoder: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub nodes: usize,
    pub edges: Vec<EdgeFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub id: EdgeId,
    pub src: NodeId,
    pub dst: NodeId,
    pub psi: String,
    #[serde(default = "no_payload")]
    pub payload: Value,
    #[serde(default = "incremental")]
    pub mode: MessageMode,
    /// Edge ids whose buffers a blocking ψ reads; defaults to the edge itself.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<EdgeId>>,
    /// Skip the homomorphism check and treat ψ as one.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub trusted: bool,
}

fn no_payload() -> Value {
    Value::Tuple(Vec::new())
}

fn incremental() -> MessageMode {
    MessageMode::Incremental
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        if file.version != INSTANCE_VERSION {
            return Err(Error::spec(format!(
                "unsupported instance version {} (expected {INSTANCE_VERSION})",
                file.version
            )));
        }
        Ok(file)
    }

    /// Canonical JSON: sorted keys, no insignificant whitespace.
    pub fn to_canonical(&self) -> String {
        to_canonical_string(self)
    }

    pub fn node_algebra(&self, u: NodeId) -> &str {
        self.node_algebras
            .as_ref()
            .and_then(|names| names.get(u))
            .map_or(self.algebra.as_str(), String::as_str)
    }
}
