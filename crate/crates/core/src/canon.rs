//! Canonical JSON (sorted keys, no insignificant whitespace) and digests.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Compact JSON with object keys in sorted order.
pub fn to_canonical_string<T: Serialize + ?Sized>(value: &T) -> String {
    // serde_json's map type is ordered by key, so going through `Value`
    // sorts every object regardless of field declaration order.
    let tree = serde_json::to_value(value).expect("serializable value");
    serde_json::to_string(&tree).expect("json tree")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
