//! Readout functions `[S, A]`, their right `M`-action, and the semidirect
//! product `[S, A] ⋊ M` whose splittings are the cocycles.

use std::fmt;

use super::action::ActionSpec;
use super::carrier::Carrier;
use super::cocycle::ArgumentFn;
use super::monoid::MonoidSpec;
use super::report::{CheckConfig, Collector, Law, ViolationReport};
use crate::error::{Error, Result};
use crate::value::Value;

/// A function `S → A` tabulated over the listed states.
///
/// Only available when the listed states are closed under the action of the
/// listed messages; [`readout_ract`] reports an error otherwise rather than
/// extrapolating past the table.
#[derive(Clone)]
pub struct ReadoutTable {
    name: String,
    action: ActionSpec,
    args: MonoidSpec,
    table: Vec<Value>,
}

impl ReadoutTable {
    pub fn from_fn(
        name: impl Into<String>,
        action: &ActionSpec,
        args: &MonoidSpec,
        f: impl Fn(&Value) -> Value,
    ) -> Result<Self> {
        let table = action.states.elements().iter().map(f).collect();
        ReadoutTable::from_values(name, action, args, table)
    }

    pub fn from_values(
        name: impl Into<String>,
        action: &ActionSpec,
        args: &MonoidSpec,
        table: Vec<Value>,
    ) -> Result<Self> {
        if table.len() != action.states.len() {
            return Err(Error::Dimension {
                expected: action.states.len(),
                actual: table.len(),
            });
        }
        if let Some(bad) = table.iter().find(|v| !args.carrier.contains(v)) {
            return Err(Error::spec(format!(
                "readout value {bad} is not an argument"
            )));
        }
        Ok(ReadoutTable {
            name: name.into(),
            action: action.clone(),
            args: args.clone(),
            table,
        })
    }

    /// The all-zero table.
    pub fn zero(action: &ActionSpec, args: &MonoidSpec) -> Result<Self> {
        ReadoutTable::from_fn("0", action, args, |_| args.unit.clone())
    }

    /// The curried cocycle `D(m) = δ_m(-)`.
    pub fn curry(d: &ArgumentFn, m: &Value) -> Result<Self> {
        ReadoutTable::from_fn(format!("D({m})"), &d.action, &d.args, |s| d.delta(m, s))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &Carrier {
        &self.action.states
    }

    pub fn args(&self) -> &MonoidSpec {
        &self.args
    }

    pub fn values(&self) -> &[Value] {
        &self.table
    }

    pub fn eval(&self, s: &Value) -> Option<&Value> {
        self.action.states.index_of(s).map(|i| &self.table[i])
    }

    fn compatible(&self, other: &ReadoutTable) -> Result<()> {
        if self.action.name == other.action.name
            && self.action.states.same_elements(&other.action.states)
            && self.args.carrier.same_elements(&other.args.carrier)
        {
            Ok(())
        } else {
            Err(Error::spec(format!(
                "readouts `{}` and `{}` live over different carriers",
                self.name, other.name
            )))
        }
    }
}

impl PartialEq for ReadoutTable {
    fn eq(&self, other: &Self) -> bool {
        self.compatible(other).is_ok() && self.table == other.table
    }
}

impl fmt::Debug for ReadoutTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReadoutTable")
            .field("name", &self.name)
            .field("table", &self.table)
            .finish()
    }
}

/// `(f + g)(s) = f(s) + g(s)`.
pub fn readout_add(f: &ReadoutTable, g: &ReadoutTable) -> Result<ReadoutTable> {
    f.compatible(g)?;
    let table = f
        .table
        .iter()
        .zip(&g.table)
        .map(|(a, b)| f.args.op(a, b))
        .collect();
    Ok(ReadoutTable {
        name: format!("({}+{})", f.name, g.name),
        table,
        ..f.clone()
    })
}

/// `(f·m)(s) = f(m·s)`.
pub fn readout_ract(f: &ReadoutTable, m: &Value) -> Result<ReadoutTable> {
    let table = f
        .action
        .states
        .elements()
        .iter()
        .map(|s| {
            let ms = f.action.act(m, s);
            f.eval(&ms).cloned().ok_or_else(|| {
                Error::spec(format!(
                    "{m}·{s} = {ms} leaves the tabulated states of `{}`",
                    f.action.name
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReadoutTable {
        name: format!("{}·{m}", f.name),
        table,
        ..f.clone()
    })
}

/// An element `(f, a)` of `[S, A] ⋊ M`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemidirectElement {
    pub f: ReadoutTable,
    pub a: Value,
}

impl SemidirectElement {
    pub fn unit(action: &ActionSpec, args: &MonoidSpec) -> Result<Self> {
        Ok(SemidirectElement {
            f: ReadoutTable::zero(action, args)?,
            a: action.monoid.unit.clone(),
        })
    }

    /// Encoding as `(table, a)` so the product can be handed to the generic
    /// monoid checker.
    pub fn to_value(&self) -> Value {
        Value::Tuple(vec![Value::Tuple(self.f.table.clone()), self.a.clone()])
    }

    pub fn from_value(action: &ActionSpec, args: &MonoidSpec, v: &Value) -> Result<Self> {
        match v.tuple() {
            Some([Value::Tuple(table), a]) => Ok(SemidirectElement {
                f: ReadoutTable::from_values("f", action, args, table.clone())?,
                a: a.clone(),
            }),
            _ => Err(Error::spec(format!("{v} is not a semidirect element"))),
        }
    }
}

/// `(f, a) ∗ (g, b) = (f·b + g, a·b)`.
pub fn semidirect_mul(x: &SemidirectElement, y: &SemidirectElement) -> Result<SemidirectElement> {
    let fb = readout_ract(&x.f, &y.a)?;
    Ok(SemidirectElement {
        f: readout_add(&fb, &y.f)?,
        a: x.f.action.monoid.op(&x.a, &y.a),
    })
}

/// The semidirect product as a [`MonoidSpec`] whose window is `samples`
/// plus the unit. Elements are encoded with [`SemidirectElement::to_value`].
pub fn semidirect_monoid(
    action: &ActionSpec,
    args: &MonoidSpec,
    samples: &[SemidirectElement],
) -> Result<MonoidSpec> {
    let unit = SemidirectElement::unit(action, args)?.to_value();
    let mut window = vec![unit.clone()];
    for s in samples {
        let v = s.to_value();
        if !window.contains(&v) {
            window.push(v);
        }
    }
    let (a1, g1) = (action.clone(), args.clone());
    let carrier = Carrier::windowed(
        "semidirect",
        format!("{} samples", window.len()),
        window,
        move |v| {
            SemidirectElement::from_value(&a1, &g1, v)
                .map(|e| a1.monoid.carrier.contains(&e.a))
                .unwrap_or(false)
        },
    )?;
    let (a2, g2) = (action.clone(), args.clone());
    Ok(MonoidSpec::new(
        format!("[S,A]⋊M for {}", action.name),
        carrier,
        unit,
        false,
        false,
        move |x, y| {
            let product = SemidirectElement::from_value(&a2, &g2, x)
                .and_then(|x| Ok((x, SemidirectElement::from_value(&a2, &g2, y)?)))
                .and_then(|(x, y)| semidirect_mul(&x, &y));
            match product {
                Ok(p) => p.to_value(),
                Err(_) => Value::Tuple(Vec::new()),
            }
        },
    ))
}

/// Checks that `a ↦ (D(a), a)` is a monoid homomorphism `M → [S,A] ⋊ M`
/// over the window of `M`. Requires the listed states to be closed under
/// the listed messages.
pub fn check_splitting(d: &ArgumentFn, cfg: &CheckConfig) -> Result<ViolationReport> {
    let ms = d.action.monoid.carrier.elements();
    let splits = ms
        .iter()
        .map(|m| {
            Ok(SemidirectElement {
                f: ReadoutTable::curry(d, m)?,
                a: m.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    // Tabulating every right translation up front turns an escape from the
    // tabulated states into an error instead of a spurious witness.
    for f in &splits {
        for m in ms {
            readout_ract(&f.f, m)?;
        }
    }
    let unit = SemidirectElement::unit(&d.action, &d.args)?;
    let window = format!(
        "M={} S={}",
        d.action.monoid.carrier.describe(),
        d.action.states.describe()
    );
    let mut c = Collector::new(format!("splitting {}", d.name), window, cfg);
    let s_unit = SemidirectElement {
        f: ReadoutTable::curry(d, &d.action.monoid.unit)?,
        a: d.action.monoid.unit.clone(),
    };
    c.expect_eq(
        Law::SplittingUnit,
        Vec::new,
        s_unit.to_value(),
        unit.to_value(),
    );

    let mut fault = None;
    c.visit([ms.len(), ms.len()], cfg, |c, [i, j]| {
        let (a, b) = (&ms[i], &ms[j]);
        let ab = d.action.monoid.op(a, b);
        let lhs = match ReadoutTable::curry(d, &ab) {
            Ok(f) => SemidirectElement { f, a: ab },
            Err(e) => {
                fault.get_or_insert(e);
                return;
            }
        };
        match semidirect_mul(&splits[i], &splits[j]) {
            Ok(rhs) => c.expect_eq(
                Law::SplittingProduct,
                || vec![a.clone(), b.clone()],
                lhs.to_value(),
                rhs.to_value(),
            ),
            Err(e) => {
                fault.get_or_insert(e);
            }
        }
    });
    match fault {
        Some(e) => Err(e),
        None => Ok(c.finish()),
    }
}

/// Whether the splitting `a ↦ (D(a), a)` is a homomorphism.
pub fn splitting_is_hom(d: &ArgumentFn, cfg: &CheckConfig) -> Result<bool> {
    check_splitting(d, cfg).map(|r| r.passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_cocycle, check_monoid_laws, naive_delta, stock};

    fn carry_setup() -> (ActionSpec, MonoidSpec) {
        (
            stock::add_mod_action(stock::nat_add(0, 20), 10),
            stock::nat_add(0, 20),
        )
    }

    #[test]
    fn zero_table_is_additive_unit_and_unit_acts_trivially() {
        let (action, args) = carry_setup();
        let f = ReadoutTable::from_fn("f", &action, &args, |s| {
            Value::Int((1 + s.int().unwrap()) / 10)
        })
        .unwrap();
        let zero = ReadoutTable::zero(&action, &args).unwrap();
        assert_eq!(readout_add(&f, &zero).unwrap().values(), f.values());
        assert_eq!(
            readout_ract(&f, &Value::Int(0)).unwrap().values(),
            f.values()
        );
    }

    #[test]
    fn right_translation_example() {
        // (f·5)(4) = f(9) = ⌊10/10⌋ = 1
        let (action, args) = carry_setup();
        let f = ReadoutTable::from_fn("f", &action, &args, |s| {
            Value::Int((1 + s.int().unwrap()) / 10)
        })
        .unwrap();
        let f5 = readout_ract(&f, &Value::Int(5)).unwrap();
        assert_eq!(f5.eval(&Value::Int(4)), Some(&Value::Int(1)));
        assert_eq!(f5.eval(&Value::Int(3)), Some(&Value::Int(0)));
    }

    #[test]
    fn right_action_is_associative() {
        let (action, args) = carry_setup();
        let f = ReadoutTable::from_fn("f", &action, &args, |s| Value::Int(s.int().unwrap() % 3))
            .unwrap();
        for m in 0..20 {
            for n in 0..20 {
                let (vm, vn) = (Value::Int(m), Value::Int(n));
                let lhs = readout_ract(&f, &action.monoid.op(&vm, &vn)).unwrap();
                let rhs = readout_ract(&readout_ract(&f, &vm).unwrap(), &vn).unwrap();
                assert_eq!(lhs.values(), rhs.values());
            }
        }
    }

    #[test]
    fn mismatched_carriers_are_rejected() {
        let (action, args) = carry_setup();
        let f = ReadoutTable::zero(&action, &args).unwrap();
        let other = stock::self_action(&stock::max_bot(0, 9));
        let g = ReadoutTable::zero(&other, &stock::max_bot(0, 9)).unwrap();
        assert!(readout_add(&f, &g).is_err());
    }

    #[test]
    fn semidirect_unit_and_trivial_readouts() {
        let (action, args) = carry_setup();
        let unit = SemidirectElement::unit(&action, &args).unwrap();
        let f =
            ReadoutTable::from_fn("f", &action, &args, |s| Value::Int(s.int().unwrap())).unwrap();
        let x = SemidirectElement {
            f,
            a: Value::Int(3),
        };
        assert_eq!(semidirect_mul(&unit, &x).unwrap(), x);

        let zero = ReadoutTable::zero(&action, &args).unwrap();
        let p = semidirect_mul(
            &SemidirectElement {
                f: zero.clone(),
                a: Value::Int(4),
            },
            &SemidirectElement {
                f: zero.clone(),
                a: Value::Int(5),
            },
        )
        .unwrap();
        assert_eq!(
            p,
            SemidirectElement {
                f: zero,
                a: Value::Int(9)
            }
        );
    }

    #[test]
    fn semidirect_product_is_associative_on_three_state_example() {
        // S = ℤ/3 under (ℕ,+) on a window, A = (ℕ,+): every readout table
        // with entries in {0,1} paired with a ∈ {0,1,2}.
        let action = stock::add_mod_action(stock::nat_add(0, 2), 3);
        let args = stock::nat_add(0, 3);
        let samples: Vec<_> = (0..8)
            .flat_map(|bits: i64| {
                let action = &action;
                let args = &args;
                (0..3).map(move |a| SemidirectElement {
                    f: ReadoutTable::from_values(
                        "t",
                        action,
                        args,
                        (0..3).map(|i| Value::Int((bits >> i) & 1)).collect(),
                    )
                    .unwrap(),
                    a: Value::Int(a),
                })
            })
            .collect();
        let m = semidirect_monoid(&action, &args, &samples).unwrap();
        let r = check_monoid_laws(&m, &CheckConfig::default()).unwrap();
        assert!(r.coverage.is_exhaustive());
        assert!(!r.laws_violated().contains(&Law::Associativity), "{r:?}");
        assert!(!r.laws_violated().contains(&Law::LeftUnit));
        assert!(!r.laws_violated().contains(&Law::RightUnit));
    }

    #[test]
    fn splitting_agrees_with_cocycle() {
        let cfg = CheckConfig::default();
        let bf = stock::semilattice_delta(&stock::max_bot(0, 20));
        assert!(splitting_is_hom(&bf, &cfg).unwrap());
        assert!(check_cocycle(&bf, &cfg).passed);

        let naive = naive_delta(&stock::zmod_add(4)).unwrap();
        assert!(!splitting_is_hom(&naive, &cfg).unwrap());
        assert!(!check_cocycle(&naive, &cfg).passed);

        let zero = stock::zero_delta(
            &stock::add_mod_action(stock::nat_add(0, 20), 10),
            &stock::nat_add(0, 20),
        );
        assert!(splitting_is_hom(&zero, &cfg).unwrap());
    }

    #[test]
    fn splitting_unavailable_for_unclosed_window() {
        let naive = naive_delta(&stock::nat_add(0, 10)).unwrap();
        assert!(matches!(
            splitting_is_hom(&naive, &CheckConfig::default()),
            Err(Error::Spec(_))
        ));
    }
}
