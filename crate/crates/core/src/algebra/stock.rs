//! Ready-made monoids, actions and argument functions.
//!
//! Operations return an empty tuple (never a carrier element) when handed
//! inputs of the wrong shape, so misuse shows up as a closure witness.

use super::action::ActionSpec;
use super::carrier::Carrier;
use super::cocycle::ArgumentFn;
use super::monoid::MonoidSpec;
use crate::value::Value;

fn invalid() -> Value {
    Value::Tuple(Vec::new())
}

fn int2(a: &Value, b: &Value, f: impl Fn(i64, i64) -> Option<i64>) -> Value {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => f(*x, *y).map_or_else(invalid, Value::Int),
        _ => invalid(),
    }
}

/// `(ℤ ∪ {⊥}, max, ⊥)` windowed on `{⊥, lo..hi}`.
pub fn max_bot(lo: i64, hi: i64) -> MonoidSpec {
    MonoidSpec::new(
        "max",
        Carrier::int_bot(lo, hi),
        Value::Bot,
        true,
        true,
        |a, b| a.join(b).unwrap_or_else(invalid),
    )
}

/// `(ℕ, +, 0)` windowed on `[lo, hi]`.
pub fn nat_add(lo: i64, hi: i64) -> MonoidSpec {
    MonoidSpec::new(
        "nat+",
        Carrier::nat(lo, hi),
        Value::Int(0),
        true,
        false,
        |a, b| int2(a, b, i64::checked_add),
    )
}

/// `(ℕ, ·, 1)` windowed on `[lo, hi]`.
pub fn nat_mul(lo: i64, hi: i64) -> MonoidSpec {
    MonoidSpec::new(
        "nat*",
        Carrier::nat(lo, hi),
        Value::Int(1),
        true,
        false,
        |a, b| int2(a, b, i64::checked_mul),
    )
}

pub fn bool_or() -> MonoidSpec {
    MonoidSpec::new(
        "or",
        Carrier::bools(),
        Value::Bool(false),
        true,
        true,
        |a, b| match (a, b) {
            (Value::Bool(x), Value::Bool(y)) => Value::Bool(*x || *y),
            _ => invalid(),
        },
    )
}

pub fn bool_xor() -> MonoidSpec {
    MonoidSpec::new(
        "xor",
        Carrier::bools(),
        Value::Bool(false),
        true,
        false,
        |a, b| match (a, b) {
            (Value::Bool(x), Value::Bool(y)) => Value::Bool(x ^ y),
            _ => invalid(),
        },
    )
}

/// `(ℤ/n, +, 0)`.
pub fn zmod_add(n: i64) -> MonoidSpec {
    MonoidSpec::new(
        format!("z/{n}"),
        Carrier::digits(n),
        Value::Int(0),
        true,
        false,
        move |a, b| int2(a, b, |x, y| Some((x + y).rem_euclid(n))),
    )
}

/// `({0..cap}, min(a+b, cap), 0)`.
pub fn saturating_add(cap: i64) -> MonoidSpec {
    MonoidSpec::new(
        format!("sat+{cap}"),
        Carrier::digits(cap + 1),
        Value::Int(0),
        true,
        false,
        move |a, b| int2(a, b, |x, y| Some((x + y).min(cap))),
    )
}

/// Truncated subtraction `a ∸ b = max(a - b, 0)` on `{0..top}`. Not a monoid:
/// used to exercise the law checker.
pub fn saturating_sub(top: i64) -> MonoidSpec {
    MonoidSpec::new(
        format!("monus{top}"),
        Carrier::digits(top + 1),
        Value::Int(0),
        false,
        false,
        |a, b| int2(a, b, |x, y| Some((x - y).max(0))),
    )
}

/// Tropical vectors of `width` coordinates under componentwise max.
pub fn tropical_vector(width: usize, lo: i64, hi: i64) -> MonoidSpec {
    let coord = Carrier::int_bot(lo, hi);
    let parts = vec![coord; width];
    MonoidSpec::new(
        format!("max^{width}"),
        Carrier::product(format!("trop{width}"), &parts),
        Value::bot_vector(width),
        true,
        true,
        |a, b| a.join(b).unwrap_or_else(invalid),
    )
}

/// `⊥` or a pair `(negated length, negated predecessor id)` under
/// lexicographic max, windowed on lengths `0..=max_len` and ids `0..nodes`.
pub fn lex_path_max(max_len: i64, nodes: i64) -> MonoidSpec {
    let mut elements = vec![Value::Bot];
    for len in 0..=max_len {
        for id in 0..nodes {
            elements.push(Value::Tuple(vec![Value::Int(-len), Value::Int(-id)]));
        }
    }
    let carrier = Carrier::windowed(
        "path",
        format!("{{bot}} u -[0,{max_len}] x -[0,{nodes})"),
        elements,
        |v| match v {
            Value::Bot => true,
            Value::Tuple(items) => matches!(items.as_slice(), [Value::Int(_), Value::Int(_)]),
            _ => false,
        },
    )
    .expect("distinct path labels");
    MonoidSpec::new("lexmax", carrier, Value::Bot, true, true, |a, b| {
        match (a, b) {
            (Value::Bot, x) | (x, Value::Bot) => x.clone(),
            (x @ Value::Tuple(_), y @ Value::Tuple(_)) => x.max(y).clone(),
            _ => invalid(),
        }
    })
}

/// A monoid acting on its own carrier by its operation.
pub fn self_action(m: &MonoidSpec) -> ActionSpec {
    let inner = m.clone();
    ActionSpec::new(
        format!("{} on itself", m.name),
        m.clone(),
        m.carrier.clone(),
        move |a, s| inner.op(a, s),
    )
}

/// `(ℕ,+)` acting on `{0..base-1}` by `m·s = (s + m) mod base`, the
/// iterate of the successor permutation.
pub fn add_mod_action(m: MonoidSpec, base: i64) -> ActionSpec {
    ActionSpec::new(
        format!("add mod {base}"),
        m,
        Carrier::digits(base),
        move |a, s| int2(a, s, |x, y| (x >= 0).then(|| (x + y).rem_euclid(base))),
    )
}

/// The join-semilattice argument function: `δ_m(s) = 0` if `m ≤ s` and
/// `m ∨ s` otherwise, with `M = S = A` the given idempotent monoid and the
/// action its own join.
pub fn semilattice_delta(m: &MonoidSpec) -> ArgumentFn {
    let action = self_action(m);
    let join = m.clone();
    ArgumentFn::new(
        format!("semilattice δ over {}", m.name),
        action,
        m.clone(),
        move |msg, s| {
            let j = join.op(msg, s);
            if j == *s {
                join.unit.clone()
            } else {
                j
            }
        },
    )
    .expect("join is commutative")
}

/// Digit addition with carries: `(ℕ,+)` acting on `{0..9}` by addition mod
/// 10, arguments in `(ℕ,+)`, `δ_m(s) = ⌊(m + s)/10⌋`. `M` and `A` are
/// windowed on `[0, m_hi]`.
pub fn carry_delta(m_hi: i64) -> ArgumentFn {
    let action = add_mod_action(nat_add(0, m_hi), 10);
    ArgumentFn::new("carry", action, nat_add(0, m_hi), |m, s| {
        int2(m, s, |x, y| (x >= 0).then(|| (x + y).div_euclid(10)))
    })
    .expect("nat+ is commutative")
}

/// Emits one carry for every nonzero message regardless of state; fails the
/// product law.
pub fn always_carry(m_hi: i64) -> ArgumentFn {
    let action = add_mod_action(nat_add(0, m_hi), 10);
    ArgumentFn::new("always carry", action, nat_add(0, m_hi), |m, _| match m {
        Value::Int(0) => Value::Int(0),
        Value::Int(_) => Value::Int(1),
        _ => invalid(),
    })
    .expect("nat+ is commutative")
}

/// The trivial cocycle.
pub fn zero_delta(action: &ActionSpec, args: &MonoidSpec) -> ArgumentFn {
    let zero = args.unit.clone();
    ArgumentFn::new(
        format!("zero δ on {}", action.name),
        action.clone(),
        args.clone(),
        move |_, _| zero.clone(),
    )
    .expect("argument monoid claimed commutative")
}
