use serde::{Deserialize, Serialize};

use crate::canon::{sha256_hex, to_canonical_string};
use crate::error::{Error, Result};
use crate::fabric::{EdgeId, NodeId};
use crate::value::Value;

pub const TRACE_FORMAT: &str = "cocycle-trace/1";

/// Name of the generator behind the random policy, recorded in headers.
pub const RNG_NAME: &str = "rand_chacha::ChaCha8Rng::seed_from_u64";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    Deliver,
    Compute,
    /// A node update in a synchronous round; `step` is the round number.
    Round,
}

/// One executed event. Fields that do not apply to the event kind are null.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub step: u64,
    pub seq: u64,
    pub kind: RecordKind,
    pub edge: Option<EdgeId>,
    pub node: NodeId,
    /// The delivered message, or the argument(s) ψ read.
    pub payload: Option<Value>,
    pub state_before: Option<Value>,
    pub state_after: Option<Value>,
    /// δ emitted by a delivery.
    pub argument: Option<Value>,
    /// ψ output of a computation, including unit messages that were not delivered.
    pub message: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub format: String,
    pub instance: String,
    pub name: String,
    pub policy: String,
    pub seed: Option<u64>,
    pub rng: Option<String>,
    pub event_cap: u64,
    pub rounds: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub header: TraceHeader,
    pub records: Vec<Record>,
}

/// An entry of a scripted schedule: the event to run next.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptStep {
    pub seq: u64,
    pub kind: RecordKind,
    pub edge: Option<EdgeId>,
}

impl Trace {
    /// Header line followed by one canonical JSON line per record.
    pub fn to_jsonl(&self) -> String {
        let mut out = to_canonical_string(&self.header);
        out.push('\n');
        out.push_str(&self.records_jsonl());
        out
    }

    pub fn records_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&to_canonical_string(r));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: TraceHeader = serde_json::from_str(
            lines
                .next()
                .ok_or_else(|| Error::spec("trace has no header line"))?,
        )?;
        let records = lines
            .map(serde_json::from_str)
            .collect::<std::result::Result<Vec<Record>, _>>()?;
        Ok(Trace { header, records })
    }

    /// sha256 of [`Trace::to_jsonl`].
    pub fn digest(&self) -> String {
        sha256_hex(self.to_jsonl().as_bytes())
    }

    /// The event sequence of an asynchronous trace, for scripted replay.
    pub fn script(&self) -> Result<Vec<ScriptStep>> {
        self.records
            .iter()
            .map(|r| match r.kind {
                RecordKind::Round => Err(Error::spec(
                    "synchronous traces cannot be replayed as a script",
                )),
                kind => Ok(ScriptStep {
                    seq: r.seq,
                    kind,
                    edge: r.edge,
                }),
            })
            .collect()
    }
}
