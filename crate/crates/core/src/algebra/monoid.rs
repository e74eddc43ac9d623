use std::fmt;
use std::sync::Arc;

use super::carrier::Carrier;
use super::report::{CheckConfig, Collector, Law, ViolationReport, Witness};
use crate::error::{Error, Result};
use crate::value::Value;

pub type BinOp = Arc<dyn Fn(&Value, &Value) -> Value + Send + Sync>;

/// A monoid on a carrier, with its claimed properties.
///
/// Claims are not trusted: [`check_monoid_laws`] verifies commutativity and
/// idempotence whenever they are claimed.
#[derive(Clone)]
pub struct MonoidSpec {
    pub name: String,
    pub carrier: Carrier,
    pub unit: Value,
    pub commutative: bool,
    pub idempotent: bool,
    op: BinOp,
}

impl MonoidSpec {
    pub fn new(
        name: impl Into<String>,
        carrier: Carrier,
        unit: Value,
        commutative: bool,
        idempotent: bool,
        op: impl Fn(&Value, &Value) -> Value + Send + Sync + 'static,
    ) -> Self {
        MonoidSpec {
            name: name.into(),
            carrier,
            unit,
            commutative,
            idempotent,
            op: Arc::new(op),
        }
    }

    #[inline]
    pub fn op(&self, a: &Value, b: &Value) -> Value {
        (self.op)(a, b)
    }

    /// Folds `items` left to right starting from the unit.
    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a Value>) -> Value {
        items
            .into_iter()
            .fold(self.unit.clone(), |acc, x| self.op(&acc, x))
    }

    pub fn is_unit(&self, v: &Value) -> bool {
        *v == self.unit
    }

    /// The same operation over a different verification window.
    pub fn with_carrier(&self, carrier: Carrier) -> Self {
        MonoidSpec {
            carrier,
            ..self.clone()
        }
    }

    /// Re-evaluates a witness produced by [`check_monoid_laws`] or
    /// [`is_idempotent`]; true iff the inequality is reproduced.
    pub fn replay(&self, w: &Witness) -> bool {
        let i = &w.inputs;
        let (lhs, rhs) = match (w.law, i.as_slice()) {
            (Law::Closure, [a, b, ..]) => (
                Value::Bool(self.carrier.contains(&self.op(a, b))),
                Value::Bool(true),
            ),
            (Law::Associativity, [a, b, c]) => {
                (self.op(&self.op(a, b), c), self.op(a, &self.op(b, c)))
            }
            (Law::LeftUnit, [a]) => (self.op(&self.unit, a), a.clone()),
            (Law::RightUnit, [a]) => (self.op(a, &self.unit), a.clone()),
            (Law::Commutativity, [a, b]) => (self.op(a, b), self.op(b, a)),
            (Law::Idempotence, [a]) => (self.op(a, a), a.clone()),
            _ => return false,
        };
        lhs != rhs && lhs == w.lhs && rhs == w.rhs
    }
}

impl fmt::Debug for MonoidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonoidSpec")
            .field("name", &self.name)
            .field("carrier", &self.carrier)
            .field("unit", &self.unit)
            .field("commutative", &self.commutative)
            .field("idempotent", &self.idempotent)
            .finish()
    }
}

/// Closure, associativity, both unit laws, and the claimed commutativity and
/// idempotence, over the carrier's elements (or window).
pub fn check_monoid_laws(m: &MonoidSpec, cfg: &CheckConfig) -> Result<ViolationReport> {
    if !m.carrier.contains(&m.unit) {
        return Err(Error::spec(format!(
            "unit {} of monoid `{}` is not in its carrier",
            m.unit, m.name
        )));
    }
    let xs = m.carrier.elements();
    let n = xs.len();
    let mut c = Collector::new(format!("monoid {}", m.name), m.carrier.describe(), cfg);

    c.visit([n], cfg, |c, [i]| {
        let a = &xs[i];
        c.expect_eq(
            Law::LeftUnit,
            || vec![a.clone()],
            m.op(&m.unit, a),
            a.clone(),
        );
        c.expect_eq(
            Law::RightUnit,
            || vec![a.clone()],
            m.op(a, &m.unit),
            a.clone(),
        );
        if m.idempotent {
            c.expect_eq(Law::Idempotence, || vec![a.clone()], m.op(a, a), a.clone());
        }
    });
    c.visit([n, n], cfg, |c, [i, j]| {
        let (a, b) = (&xs[i], &xs[j]);
        let ab = m.op(a, b);
        let inside = m.carrier.contains(&ab);
        c.expect_member(|| vec![a.clone(), b.clone(), ab.clone()], inside);
        if m.commutative {
            c.expect_eq(
                Law::Commutativity,
                || vec![a.clone(), b.clone()],
                ab,
                m.op(b, a),
            );
        }
    });
    c.visit([n, n, n], cfg, |c, [i, j, k]| {
        let (a, b, d) = (&xs[i], &xs[j], &xs[k]);
        c.expect_eq(
            Law::Associativity,
            || vec![a.clone(), b.clone(), d.clone()],
            m.op(&m.op(a, b), d),
            m.op(a, &m.op(b, d)),
        );
    });
    Ok(c.finish())
}

/// Whether `a + a = a` for every tested element, with the first failing
/// element otherwise.
pub fn is_idempotent(m: &MonoidSpec) -> (bool, Option<Value>) {
    match m.carrier.elements().iter().find(|a| m.op(a, a) != **a) {
        Some(a) => (false, Some(a.clone())),
        None => (true, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::stock;

    #[test]
    fn max_with_bottom_is_a_commutative_idempotent_monoid() {
        let m = stock::max_bot(0, 20);
        let r = check_monoid_laws(&m, &CheckConfig::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.coverage.is_exhaustive());
        assert_eq!(is_idempotent(&m), (true, None));
    }

    #[test]
    fn nat_addition_passes_on_window_and_is_not_idempotent() {
        let m = stock::nat_add(0, 50);
        let r = check_monoid_laws(&m, &CheckConfig::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(is_idempotent(&m), (false, Some(Value::Int(1))));
    }

    #[test]
    fn one_element_monoid_is_idempotent() {
        let carrier = Carrier::finite("one", vec![Value::Int(0)]).unwrap();
        let m = MonoidSpec::new("trivial", carrier, Value::Int(0), true, true, |_, _| {
            Value::Int(0)
        });
        assert!(
            check_monoid_laws(&m, &CheckConfig::default())
                .unwrap()
                .passed
        );
        assert_eq!(is_idempotent(&m), (true, None));
    }

    #[test]
    fn saturating_subtraction_breaks_associativity() {
        // First failing triple of an exhaustive scan over {0..3}^3 in
        // lexicographic order: (1∸0)∸1 = 0 but 1∸(0∸1) = 1.
        let m = stock::saturating_sub(3);
        let r = check_monoid_laws(&m, &CheckConfig::default()).unwrap();
        assert!(!r.passed);
        let assoc: Vec<_> = r
            .witnesses
            .iter()
            .filter(|w| w.law == Law::Associativity)
            .collect();
        assert_eq!(
            assoc[0].inputs,
            vec![Value::Int(1), Value::Int(0), Value::Int(1)]
        );
        assert_eq!(
            (assoc[0].lhs.clone(), assoc[0].rhs.clone()),
            (Value::Int(0), Value::Int(1))
        );
        assert!(r.witnesses.iter().all(|w| m.replay(w)));
    }

    #[test]
    fn unit_outside_carrier_is_a_spec_error() {
        let m = stock::nat_add(1, 5);
        let broken = MonoidSpec {
            unit: Value::Int(-1),
            ..m
        };
        assert!(matches!(
            check_monoid_laws(&broken, &CheckConfig::default()),
            Err(Error::Spec(_))
        ));
    }

    #[test]
    fn escaping_op_yields_closure_witness() {
        let digits = Carrier::digits(10);
        let m = MonoidSpec::new(
            "plain add on digits",
            digits,
            Value::Int(0),
            true,
            false,
            |a, b| Value::Int(a.int().unwrap() + b.int().unwrap()),
        );
        let r = check_monoid_laws(&m, &CheckConfig::default()).unwrap();
        assert!(r.witnesses.iter().any(|w| w.law == Law::Closure));
        assert!(r.witnesses.iter().all(|w| m.replay(w)));
    }
}
