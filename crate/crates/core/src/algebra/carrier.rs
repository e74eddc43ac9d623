use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::value::Value;

type Membership = Box<dyn Fn(&Value) -> bool + Send + Sync>;

/// The underlying set of a monoid, state space or argument space.
///
/// An enumerable carrier lists every element. A non-enumerable carrier
/// (ℕ, ℤ ∪ {⊥}, vectors over those) lists a finite verification window and
/// keeps a membership predicate for the full set, so that laws can be
/// checked on the window while closure is judged against the whole set.
#[derive(Clone)]
pub struct Carrier(Arc<Inner>);

struct Inner {
    label: String,
    elements: Vec<Value>,
    enumerable: bool,
    window: Option<String>,
    member: Membership,
    index: HashMap<Value, usize>,
}

impl Carrier {
    /// A finite set given by its elements.
    pub fn finite(label: impl Into<String>, elements: Vec<Value>) -> Result<Self> {
        let index = build_index(&elements)?;
        let lookup = index.clone();
        Ok(Carrier(Arc::new(Inner {
            label: label.into(),
            elements,
            enumerable: true,
            window: None,
            member: Box::new(move |v| lookup.contains_key(v)),
            index,
        })))
    }

    /// An infinite set sampled on `elements`, with `member` deciding the full set.
    pub fn windowed(
        label: impl Into<String>,
        window: impl Into<String>,
        elements: Vec<Value>,
        member: impl Fn(&Value) -> bool + Send + Sync + 'static,
    ) -> Result<Self> {
        let index = build_index(&elements)?;
        if let Some(bad) = elements.iter().find(|v| !member(v)) {
            return Err(Error::spec(format!(
                "window element {bad} is outside its carrier"
            )));
        }
        Ok(Carrier(Arc::new(Inner {
            label: label.into(),
            elements,
            enumerable: false,
            window: Some(window.into()),
            member: Box::new(member),
            index,
        })))
    }

    /// ℕ on the window `[lo, hi]`.
    pub fn nat(lo: i64, hi: i64) -> Self {
        assert!(0 <= lo && lo <= hi, "invalid ℕ window [{lo},{hi}]");
        Carrier::windowed(
            "nat",
            format!("[{lo},{hi}]"),
            (lo..=hi).map(Value::Int).collect(),
            |v| matches!(v, Value::Int(x) if *x >= 0),
        )
        .expect("distinct integers")
    }

    /// ℤ ∪ {⊥} on the window `{⊥, lo..hi}`.
    pub fn int_bot(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "invalid window [{lo},{hi}]");
        let elements = std::iter::once(Value::Bot)
            .chain((lo..=hi).map(Value::Int))
            .collect();
        Carrier::windowed("int_bot", format!("{{bot,{lo}..{hi}}}"), elements, |v| {
            matches!(v, Value::Bot | Value::Int(_))
        })
        .expect("distinct integers")
    }

    /// Digits `{0, .., base-1}`.
    pub fn digits(base: i64) -> Self {
        Carrier::finite(format!("digits{base}"), (0..base).map(Value::Int).collect())
            .expect("distinct digits")
    }

    pub fn bools() -> Self {
        Carrier::finite("bool", vec![Value::Bool(false), Value::Bool(true)]).expect("distinct")
    }

    /// Cartesian product; elements are `Value::Tuple`s.
    pub fn product(label: impl Into<String>, parts: &[Carrier]) -> Self {
        let mut elements = vec![Vec::new()];
        for part in parts {
            elements = elements
                .into_iter()
                .flat_map(|prefix| {
                    part.elements().iter().map(move |e| {
                        let mut next = prefix.clone();
                        next.push(e.clone());
                        next
                    })
                })
                .collect();
        }
        let elements: Vec<Value> = elements.into_iter().map(Value::Tuple).collect();
        let owned: Vec<Carrier> = parts.to_vec();
        let member = move |v: &Value| match v {
            Value::Tuple(items) => {
                items.len() == owned.len() && items.iter().zip(&owned).all(|(x, c)| c.contains(x))
            }
            _ => false,
        };
        let label = label.into();
        if parts.iter().all(Carrier::is_enumerable) {
            let index = build_index(&elements).expect("product of distinct sets");
            Carrier(Arc::new(Inner {
                label,
                elements,
                enumerable: true,
                window: None,
                member: Box::new(member),
                index,
            }))
        } else {
            let window = parts
                .iter()
                .map(Carrier::describe)
                .collect::<Vec<_>>()
                .join(" x ");
            Carrier::windowed(label, window, elements, member).expect("product of distinct sets")
        }
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn elements(&self) -> &[Value] {
        &self.0.elements
    }

    pub fn len(&self) -> usize {
        self.0.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elements.is_empty()
    }

    pub fn is_enumerable(&self) -> bool {
        self.0.enumerable
    }

    pub fn window(&self) -> Option<&str> {
        self.0.window.as_deref()
    }

    /// Membership in the full (possibly infinite) set.
    pub fn contains(&self, v: &Value) -> bool {
        (self.0.member)(v)
    }

    /// Position of `v` in the listed elements.
    pub fn index_of(&self, v: &Value) -> Option<usize> {
        self.0.index.get(v).copied()
    }

    /// Human-readable description used in coverage records.
    pub fn describe(&self) -> String {
        match &self.0.window {
            Some(w) => format!("{}{}", self.0.label, w),
            None => format!("{}({})", self.0.label, self.0.elements.len()),
        }
    }

    pub fn same_elements(&self, other: &Carrier) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.elements == other.0.elements
    }
}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Carrier")
            .field("label", &self.0.label)
            .field("len", &self.0.elements.len())
            .field("window", &self.0.window)
            .finish()
    }
}

fn build_index(elements: &[Value]) -> Result<HashMap<Value, usize>> {
    let mut index = HashMap::with_capacity(elements.len());
    for (i, e) in elements.iter().enumerate() {
        if index.insert(e.clone(), i).is_some() {
            return Err(Error::spec(format!("duplicate carrier element {e}")));
        }
    }
    Ok(index)
}
