//! Exact carrier values shared by every algebra, graph payload and trace.

use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Token used for the tropical bottom in every serialized file.
pub const BOT_TOKEN: &str = "bot";

/// A discrete algebra element.
///
/// `Bot` is the explicit bottom sentinel of ordered carriers: it is the
/// identity for `max` and absorbing for tropical `+`. Equality is structural.
/// The derived `Ord` is a total order used for deterministic collections
/// only; lattice orders are defined by the monoids themselves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bot,
    Bool(bool),
    Int(i64),
    Tuple(Vec<Value>),
}

impl Value {
    pub fn int(&self) -> Option<i64> {
        match self {
            Value::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Value::Bot)
    }

    pub fn tuple(&self) -> Option<&[Value]> {
        match self {
            Value::Tuple(items) => Some(items),
            _ => None,
        }
    }

    /// Scalar or tuple of scalars built from optional integers, `None` as `Bot`.
    pub fn from_opt(v: Option<i64>) -> Value {
        v.map_or(Value::Bot, Value::Int)
    }

    pub fn bot_vector(width: usize) -> Value {
        Value::Tuple(vec![Value::Bot; width])
    }

    /// `max` on `ℤ ∪ {⊥}` with `⊥` as identity. Tuples are joined
    /// componentwise. Returns `None` on shape mismatch.
    pub fn join(&self, other: &Value) -> Option<Value> {
        match (self, other) {
            (Value::Bot, x) | (x, Value::Bot) if !matches!(x, Value::Tuple(_)) => Some(x.clone()),
            (Value::Int(a), Value::Int(b)) => Some(Value::Int(*a.max(b))),
            (Value::Tuple(a), Value::Tuple(b)) if a.len() == b.len() => a
                .iter()
                .zip(b)
                .map(|(x, y)| x.join(y))
                .collect::<Option<Vec<_>>>()
                .map(Value::Tuple),
            _ => None,
        }
    }

    /// Tropical product (`+`) on scalars, `⊥` absorbing.
    pub fn trop_mul(&self, other: &Value) -> Option<Value> {
        match (self, other) {
            (Value::Bot, Value::Bot | Value::Int(_)) | (Value::Int(_), Value::Bot) => {
                Some(Value::Bot)
            }
            (Value::Int(a), Value::Int(b)) => a.checked_add(*b).map(Value::Int),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bot => f.write_str("⊥"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Tuple(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Bot => serializer.serialize_str(BOT_TOKEN),
            Value::Bool(b) => serializer.serialize_bool(*b),
            Value::Int(v) => serializer.serialize_i64(*v),
            Value::Tuple(items) => items.serialize(serializer),
        }
    }
}

struct ValueVisitor;

impl<'de> Visitor<'de> for ValueVisitor {
    type Value = Value;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "an integer, a boolean, \"{BOT_TOKEN}\" or an array of values"
        )
    }

    fn visit_bool<E: de::Error>(self, v: bool) -> Result<Value, E> {
        Ok(Value::Bool(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Value, E> {
        Ok(Value::Int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Value, E> {
        i64::try_from(v)
            .map(Value::Int)
            .map_err(|_| E::custom(format!("integer {v} out of range")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Value, E> {
        if v == BOT_TOKEN {
            Ok(Value::Bot)
        } else {
            Err(E::invalid_value(de::Unexpected::Str(v), &self))
        }
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Value, A::Error> {
        let mut items = Vec::with_capacity(seq.size_hint().unwrap_or(0));
        while let Some(item) = seq.next_element()? {
            items.push(item);
        }
        Ok(Value::Tuple(items))
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Value, D::Error> {
        deserializer.deserialize_any(ValueVisitor)
    }
}
