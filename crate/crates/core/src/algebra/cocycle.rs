use std::fmt;
use std::sync::Arc;

use super::action::ActionSpec;
use super::carrier::Carrier;
use super::monoid::{BinOp, MonoidSpec};
use super::readout::ReadoutTable;
use super::report::{CheckConfig, Collector, Law, ViolationReport, Witness};
use crate::error::{Error, Result};
use crate::value::Value;

/// The node-local data of a message-passing node: an action of the message
/// monoid `M` on states `S`, a commutative argument monoid `A`, and the
/// argument function `δ: M × S → A` that says what a node emits when a
/// message changes its state.
#[derive(Clone)]
pub struct ArgumentFn {
    pub name: String,
    pub action: ActionSpec,
    pub args: MonoidSpec,
    delta: BinOp,
}

impl ArgumentFn {
    pub fn new(
        name: impl Into<String>,
        action: ActionSpec,
        args: MonoidSpec,
        delta: impl Fn(&Value, &Value) -> Value + Send + Sync + 'static,
    ) -> Result<Self> {
        let name = name.into();
        if !args.commutative {
            return Err(Error::spec(format!(
                "argument monoid `{}` of `{name}` must be commutative",
                args.name
            )));
        }
        Ok(ArgumentFn {
            name,
            action,
            args,
            delta: Arc::new(delta),
        })
    }

    /// `δ_m(s)`.
    #[inline]
    pub fn delta(&self, m: &Value, s: &Value) -> Value {
        (self.delta)(m, s)
    }

    pub fn messages(&self) -> &MonoidSpec {
        &self.action.monoid
    }

    pub fn states(&self) -> &Carrier {
        &self.action.states
    }

    pub fn zero(&self) -> &Value {
        &self.args.unit
    }

    /// Same δ checked over different windows for `M`, `S` and `A`.
    pub fn with_windows(&self, messages: Carrier, states: Carrier, args: Carrier) -> Self {
        ArgumentFn {
            action: self.action.with_windows(messages, states),
            args: self.args.with_carrier(args),
            ..self.clone()
        }
    }

    pub fn replay(&self, w: &Witness) -> bool {
        let m_op = &self.action.monoid;
        let (lhs, rhs) = match (w.law, w.inputs.as_slice()) {
            (Law::Closure, [m, s, ..]) => (
                Value::Bool(self.args.carrier.contains(&self.delta(m, s))),
                Value::Bool(true),
            ),
            (Law::CocycleUnit, [s]) => (self.delta(&m_op.unit, s), self.args.unit.clone()),
            (Law::CocycleProduct, [n, m, s]) => {
                let (lhs, rhs) = self.product_sides(n, m, s);
                (lhs, rhs)
            }
            _ => return false,
        };
        lhs != rhs && lhs == w.lhs && rhs == w.rhs
    }

    /// `δ_{n·m}(s)` and `δ_m(s) + δ_n(m·s)`.
    fn product_sides(&self, n: &Value, m: &Value, s: &Value) -> (Value, Value) {
        let nm = self.action.monoid.op(n, m);
        let lhs = self.delta(&nm, s);
        let ms = self.action.act(m, s);
        let rhs = self.args.op(&self.delta(m, s), &self.delta(n, &ms));
        (lhs, rhs)
    }
}

impl fmt::Debug for ArgumentFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArgumentFn")
            .field("name", &self.name)
            .field("action", &self.action)
            .field("args", &self.args)
            .finish()
    }
}

/// The argument axioms: `δ_1(s) = 0` and `δ_{n·m}(s) = δ_m(s) + δ_n(m·s)`
/// for every tested `(n, m, s)`, plus closure of δ in `A`.
pub fn check_cocycle(d: &ArgumentFn, cfg: &CheckConfig) -> ViolationReport {
    let ms = d.action.monoid.carrier.elements();
    let ss = d.action.states.elements();
    let window = format!(
        "M={} S={}",
        d.action.monoid.carrier.describe(),
        d.action.states.describe()
    );
    let mut c = Collector::new(format!("cocycle {}", d.name), window, cfg);
    let unit = &d.action.monoid.unit;

    c.visit([ss.len()], cfg, |c, [i]| {
        let s = &ss[i];
        c.expect_eq(
            Law::CocycleUnit,
            || vec![s.clone()],
            d.delta(unit, s),
            d.args.unit.clone(),
        );
    });
    c.visit([ms.len(), ss.len()], cfg, |c, [i, j]| {
        let (m, s) = (&ms[i], &ss[j]);
        let out = d.delta(m, s);
        let inside = d.args.carrier.contains(&out);
        c.expect_member(|| vec![m.clone(), s.clone(), out], inside);
    });
    c.visit([ms.len(), ms.len(), ss.len()], cfg, |c, [i, j, k]| {
        let (n, m, s) = (&ms[i], &ms[j], &ss[k]);
        let (lhs, rhs) = d.product_sides(n, m, s);
        c.expect_eq(
            Law::CocycleProduct,
            || vec![n.clone(), m.clone(), s.clone()],
            lhs,
            rhs,
        );
    });
    c.finish()
}

/// `δ_m(s) = 0` if `m` is the unit and `m·s` otherwise, for a monoid acting
/// on itself by its own operation (`M = S = A`).
pub fn naive_delta(monoid: &MonoidSpec) -> Result<ArgumentFn> {
    let action = ActionSpec::new(
        format!("{} on itself", monoid.name),
        monoid.clone(),
        monoid.carrier.clone(),
        {
            let m = monoid.clone();
            move |a, s| m.op(a, s)
        },
    );
    naive_delta_with(&action, monoid)
}

/// [`naive_delta`] for an explicit action and argument monoid, which must
/// share one carrier.
pub fn naive_delta_with(action: &ActionSpec, args: &MonoidSpec) -> Result<ArgumentFn> {
    let m = &action.monoid.carrier;
    if !(m.same_elements(&action.states) && m.same_elements(&args.carrier)) {
        return Err(Error::spec(format!(
            "naive δ needs M = S = A; got M={}, S={}, A={}",
            m.describe(),
            action.states.describe(),
            args.carrier.describe()
        )));
    }
    let inner = action.clone();
    let zero = args.unit.clone();
    ArgumentFn::new(
        format!("naive δ over {}", args.name),
        action.clone(),
        args.clone(),
        move |m, s| {
            if inner.monoid.is_unit(m) {
                zero.clone()
            } else {
                inner.act(m, s)
            }
        },
    )
}

/// The extended-state action `m ⋆ (s, a) = (m·s, a + δ_m(s))`.
pub fn star_act(d: &ArgumentFn, m: &Value, state: &Value, arg: &Value) -> (Value, Value) {
    (d.action.act(m, state), d.args.op(arg, &d.delta(m, state)))
}

/// `⋆` packaged as an action of `M` on `S × A` (pairs as 2-tuples), so that
/// [`super::check_action`] can judge it. Its verdict matches the cocycle
/// verdict of `d` whenever the window of `A` contains the zero argument.
pub fn star_action(d: &ArgumentFn) -> ActionSpec {
    let states = Carrier::product(
        format!("{}x{}", d.action.states.label(), d.args.carrier.label()),
        &[d.action.states.clone(), d.args.carrier.clone()],
    );
    let inner = d.clone();
    ActionSpec::new(
        format!("⋆ of {}", d.name),
        d.action.monoid.clone(),
        states,
        move |m, pair| match pair.tuple() {
            Some([s, a]) => {
                let (s2, a2) = star_act(&inner, m, s, a);
                Value::Tuple(vec![s2, a2])
            }
            _ => Value::Tuple(Vec::new()),
        },
    )
}

/// The unique cocycle of an `(ℕ,+)` action with `δ_1 = ω`:
/// `δ_n(s) = Σ_{i<n} ω(π^i(s))`, where `π = 1·(-)`.
pub fn cocycle_from_pointwise(omega: &ReadoutTable, action: &ActionSpec) -> Result<ArgumentFn> {
    let monoid = &action.monoid;
    if monoid.unit != Value::Int(0) || monoid.op(&Value::Int(2), &Value::Int(3)) != Value::Int(5) {
        return Err(Error::spec(format!(
            "cocycle_from_pointwise needs M = (ℕ,+), got `{}`",
            monoid.name
        )));
    }
    if !omega.states().same_elements(&action.states) {
        return Err(Error::spec("ω is tabulated over a different state set"));
    }
    let omega = omega.clone();
    let act = action.clone();
    let args = omega.args().clone();
    let sum = args.clone();
    ArgumentFn::new(
        format!("pointwise cocycle of {}", omega.name()),
        action.clone(),
        args,
        move |n, s| {
            let Some(steps) = n.int().filter(|k| *k >= 0) else {
                return Value::Tuple(Vec::new());
            };
            let one = Value::Int(1);
            let mut acc = sum.unit.clone();
            let mut cur = s.clone();
            for _ in 0..steps {
                match omega.eval(&cur) {
                    Some(w) => acc = sum.op(&acc, w),
                    None => return Value::Tuple(Vec::new()),
                }
                cur = act.act(&one, &cur);
            }
            acc
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_action, stock};

    fn cfg() -> CheckConfig {
        CheckConfig::default()
    }

    #[test]
    fn bellman_ford_delta_is_a_cocycle_exercising_all_cases() {
        let d = stock::semilattice_delta(&stock::max_bot(0, 20));
        let r = check_cocycle(&d, &cfg());
        assert!(r.passed, "{r:?}");
        assert!(r.coverage.is_exhaustive());
        // the three cases of the case analysis: m,n ≤ s; only n > s; only m > s
        let (i, s) = (Value::Int, Value::Int(5));
        assert_eq!(d.delta(&i(3), &s), Value::Bot);
        assert_eq!(d.delta(&i(7), &s), i(7));
        assert_eq!(d.delta(&Value::Bot, &s), Value::Bot);
    }

    #[test]
    fn carry_delta_is_a_cocycle_on_its_window() {
        let d = stock::carry_delta(200);
        let r = check_cocycle(&d, &cfg());
        assert!(r.passed, "{r:?}");
        assert_eq!(r.checked, 10 + 201 * 10 + 201 * 201 * 10);
    }

    #[test]
    fn naive_nat_fails_with_frozen_witness() {
        // m=n=1, s=0: δ_2(0)=2 while δ_1(0)+δ_1(1)=1+2=3.
        let d = naive_delta(&stock::nat_add(0, 50)).unwrap();
        let r = check_cocycle(&d, &cfg());
        assert!(!r.passed);
        let expected = Witness {
            law: Law::CocycleProduct,
            inputs: vec![Value::Int(1), Value::Int(1), Value::Int(0)],
            lhs: Value::Int(2),
            rhs: Value::Int(3),
        };
        assert!(r.witnesses.contains(&expected), "{:?}", r.witnesses);
        assert!(d.replay(&expected));
        assert!(r.witnesses.iter().all(|w| d.replay(w)));
    }

    #[test]
    fn naive_max_passes_and_matches_formula() {
        let d = naive_delta(&stock::max_bot(0, 20)).unwrap();
        assert_eq!(d.delta(&Value::Int(4), &Value::Int(2)), Value::Int(4));
        for s in d.states().elements() {
            assert_eq!(d.delta(&Value::Bot, s), Value::Bot);
        }
        assert!(check_cocycle(&d, &cfg()).passed);
    }

    #[test]
    fn naive_delta_requires_identical_carriers() {
        let action = stock::add_mod_action(stock::nat_add(0, 20), 10);
        assert!(naive_delta_with(&action, &stock::nat_add(0, 20)).is_err());
    }

    #[test]
    fn star_examples() {
        let carry = stock::carry_delta(200);
        assert_eq!(
            star_act(&carry, &Value::Int(7), &Value::Int(5), &Value::Int(0)),
            (Value::Int(2), Value::Int(1))
        );
        let bf = stock::semilattice_delta(&stock::max_bot(0, 20));
        assert_eq!(
            star_act(&bf, &Value::Int(7), &Value::Int(5), &Value::Bot),
            (Value::Int(7), Value::Int(7))
        );
        assert_eq!(
            star_act(&bf, &Value::Int(3), &Value::Int(5), &Value::Bot),
            (Value::Int(5), Value::Bot)
        );
        for s in bf.states().elements() {
            assert_eq!(
                star_act(&bf, &Value::Bot, s, &Value::Int(4)),
                (s.clone(), Value::Int(4))
            );
        }
    }

    #[test]
    fn star_action_verdict_tracks_cocycle_verdict() {
        let bf = stock::semilattice_delta(&stock::max_bot(0, 20));
        assert!(check_action(&star_action(&bf), &cfg()).passed);
        let naive = naive_delta(&stock::nat_add(0, 12)).unwrap();
        assert!(!check_action(&star_action(&naive), &cfg()).passed);
    }

    #[test]
    fn pointwise_carry_reproduces_floor_formula() {
        let action = stock::add_mod_action(stock::nat_add(0, 60), 10);
        let args = stock::nat_add(0, 60);
        let omega = ReadoutTable::from_fn("ω_carry", &action, &args, |s| {
            Value::Int((1 + s.int().unwrap()) / 10)
        })
        .unwrap();
        let d = cocycle_from_pointwise(&omega, &action).unwrap();
        for m in 0..=60 {
            for s in 0..10 {
                assert_eq!(
                    d.delta(&Value::Int(m), &Value::Int(s)),
                    Value::Int((m + s) / 10)
                );
            }
        }
        assert!(check_cocycle(&d, &cfg()).passed);
    }

    #[test]
    fn pointwise_constant_one_counts_steps() {
        let action = stock::add_mod_action(stock::nat_add(0, 30), 10);
        let args = stock::nat_add(0, 30);
        let omega = ReadoutTable::from_fn("ω=1", &action, &args, |_| Value::Int(1)).unwrap();
        let d = cocycle_from_pointwise(&omega, &action).unwrap();
        for n in 0..=30 {
            for s in 0..10 {
                assert_eq!(d.delta(&Value::Int(n), &Value::Int(s)), Value::Int(n));
            }
        }
        let zero = ReadoutTable::zero(&action, &args).unwrap();
        let z = cocycle_from_pointwise(&zero, &action).unwrap();
        assert!(action
            .monoid
            .carrier
            .elements()
            .iter()
            .all(|n| z.delta(n, &Value::Int(3)) == Value::Int(0)));
    }

    #[test]
    fn argument_monoid_must_be_commutative() {
        let action = stock::self_action(&stock::max_bot(0, 3));
        let mut args = stock::max_bot(0, 3);
        args.commutative = false;
        assert!(ArgumentFn::new("x", action, args, |_, _| Value::Bot).is_err());
    }
}
