use std::fmt;
use std::sync::Arc;

use super::carrier::Carrier;
use super::monoid::{BinOp, MonoidSpec};
use super::report::{CheckConfig, Collector, Law, ViolationReport, Witness};
use crate::value::Value;

/// A left action `m·s` of a monoid on a set of states.
#[derive(Clone)]
pub struct ActionSpec {
    pub name: String,
    pub monoid: MonoidSpec,
    pub states: Carrier,
    act: BinOp,
}

impl ActionSpec {
    pub fn new(
        name: impl Into<String>,
        monoid: MonoidSpec,
        states: Carrier,
        act: impl Fn(&Value, &Value) -> Value + Send + Sync + 'static,
    ) -> Self {
        ActionSpec {
            name: name.into(),
            monoid,
            states,
            act: Arc::new(act),
        }
    }

    /// `m·s`.
    #[inline]
    pub fn act(&self, m: &Value, s: &Value) -> Value {
        (self.act)(m, s)
    }

    pub fn with_windows(&self, monoid: Carrier, states: Carrier) -> Self {
        ActionSpec {
            monoid: self.monoid.with_carrier(monoid),
            states,
            ..self.clone()
        }
    }

    pub fn replay(&self, w: &Witness) -> bool {
        let (lhs, rhs) = match (w.law, w.inputs.as_slice()) {
            (Law::Closure, [m, s, ..]) => (
                Value::Bool(self.states.contains(&self.act(m, s))),
                Value::Bool(true),
            ),
            (Law::ActionUnit, [s]) => (self.act(&self.monoid.unit, s), s.clone()),
            (Law::ActionAssociativity, [n, m, s]) => (
                self.act(&self.monoid.op(n, m), s),
                self.act(n, &self.act(m, s)),
            ),
            _ => return false,
        };
        lhs != rhs && lhs == w.lhs && rhs == w.rhs
    }
}

impl fmt::Debug for ActionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ActionSpec")
            .field("name", &self.name)
            .field("monoid", &self.monoid.name)
            .field("states", &self.states)
            .finish()
    }
}

/// `1·s = s` and `(n·m)·s = n·(m·s)` over the windowed product of carriers,
/// plus closure of `act` in the state set.
pub fn check_action(a: &ActionSpec, cfg: &CheckConfig) -> ViolationReport {
    let ms = a.monoid.carrier.elements();
    let ss = a.states.elements();
    let window = format!(
        "M={} S={}",
        a.monoid.carrier.describe(),
        a.states.describe()
    );
    let mut c = Collector::new(format!("action {}", a.name), window, cfg);

    c.visit([ss.len()], cfg, |c, [i]| {
        let s = &ss[i];
        c.expect_eq(
            Law::ActionUnit,
            || vec![s.clone()],
            a.act(&a.monoid.unit, s),
            s.clone(),
        );
    });
    c.visit([ms.len(), ss.len()], cfg, |c, [i, j]| {
        let (m, s) = (&ms[i], &ss[j]);
        let out = a.act(m, s);
        let inside = a.states.contains(&out);
        c.expect_member(|| vec![m.clone(), s.clone(), out], inside);
    });
    c.visit([ms.len(), ms.len(), ss.len()], cfg, |c, [i, j, k]| {
        let (n, m, s) = (&ms[i], &ms[j], &ss[k]);
        c.expect_eq(
            Law::ActionAssociativity,
            || vec![n.clone(), m.clone(), s.clone()],
            a.act(&a.monoid.op(n, m), s),
            a.act(n, &a.act(m, s)),
        );
    });
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::stock;

    #[test]
    fn max_acting_on_itself() {
        let a = stock::self_action(&stock::max_bot(0, 20));
        let r = check_action(&a, &CheckConfig::default());
        assert!(r.passed, "{r:?}");
        assert!(r.coverage.is_exhaustive());
    }

    #[test]
    fn successor_mod_ten() {
        let a = stock::add_mod_action(stock::nat_add(0, 200), 10);
        assert_eq!(a.act(&Value::Int(3), &Value::Int(9)), Value::Int(2));
        for s in a.states.elements() {
            assert_eq!(a.act(&Value::Int(0), s), *s);
        }
        assert!(check_action(&a, &CheckConfig::default()).passed);
    }

    #[test]
    fn non_associative_update_is_caught_and_replays() {
        // s ↦ 2s + m is not an action of (ℕ,+): applying 1 then 1 gives 4s+3,
        // applying 2 gives 2s+2.
        let states = Carrier::nat(0, 10);
        let a = ActionSpec::new("affine", stock::nat_add(0, 10), states, |m, s| {
            Value::Int(2 * s.int().unwrap() + m.int().unwrap())
        });
        let cfg = CheckConfig {
            max_witnesses: 64,
            ..CheckConfig::default()
        };
        let r = check_action(&a, &cfg);
        assert!(!r.passed);
        assert!(r.laws_violated().contains(&Law::ActionUnit));
        assert!(r.laws_violated().contains(&Law::ActionAssociativity));
        assert!(r.witnesses.iter().all(|w| a.replay(w)));
    }
}
