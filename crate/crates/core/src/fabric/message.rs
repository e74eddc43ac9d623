use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::report::Collector;
use crate::algebra::{CheckConfig, Law, MonoidSpec, ViolationReport, Witness};
use crate::error::{Error, Result};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageMode {
    /// Single-argument ψ recomputed on every buffer change, buffer reset on read.
    Incremental,
    /// Multivariate ψ evaluated once its inputs are final; buffers are kept.
    Blocking,
}

type Eval = Arc<dyn Fn(&[Value]) -> Value + Send + Sync>;

/// A per-edge message function ψ.
#[derive(Clone)]
pub struct MessageFn {
    pub name: String,
    pub mode: MessageMode,
    pub arity: usize,
    hom_verified: bool,
    eval: Eval,
}

impl MessageFn {
    pub fn incremental(
        name: impl Into<String>,
        f: impl Fn(&Value) -> Value + Send + Sync + 'static,
    ) -> Self {
        MessageFn {
            name: name.into(),
            mode: MessageMode::Incremental,
            arity: 1,
            hom_verified: false,
            eval: Arc::new(move |args| f(&args[0])),
        }
    }

    pub fn blocking(
        name: impl Into<String>,
        arity: usize,
        f: impl Fn(&[Value]) -> Value + Send + Sync + 'static,
    ) -> Result<Self> {
        if arity == 0 {
            return Err(Error::spec(
                "a blocking message function needs at least one input",
            ));
        }
        Ok(MessageFn {
            name: name.into(),
            mode: MessageMode::Blocking,
            arity,
            hom_verified: false,
            eval: Arc::new(f),
        })
    }

    /// The identity ψ.
    pub fn identity() -> Self {
        MessageFn::incremental("identity", Value::clone)
    }

    pub fn eval(&self, args: &[Value]) -> Result<Value> {
        if args.len() != self.arity {
            return Err(Error::Dimension {
                expected: self.arity,
                actual: args.len(),
            });
        }
        Ok((self.eval)(args))
    }

    pub fn hom_verified(&self) -> bool {
        self.hom_verified
    }

    /// Marks ψ as a homomorphism without checking. A ψ flagged this way
    /// that is not one breaks confluence.
    pub fn assume_homomorphism(mut self) -> Self {
        self.hom_verified = true;
        self
    }

    /// Runs [`check_homomorphism`] on the argument window and records the
    /// outcome in `hom_verified`.
    pub fn verify_homomorphism(
        &mut self,
        args: &MonoidSpec,
        msgs: &MonoidSpec,
        cfg: &CheckConfig,
    ) -> Result<ViolationReport> {
        let report = check_homomorphism(self, args, msgs, args.carrier.elements(), cfg)?;
        self.hom_verified = report.passed;
        Ok(report)
    }
}

impl fmt::Debug for MessageFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MessageFn")
            .field("name", &self.name)
            .field("mode", &self.mode)
            .field("arity", &self.arity)
            .field("hom_verified", &self.hom_verified)
            .finish()
    }
}

/// Output of [`compute_message`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Computed {
    pub message: Value,
    /// The buffer after the read: zero for incremental ψ, unchanged for blocking ψ.
    pub buffer: Value,
    /// False when the message is the unit and must not be delivered.
    pub deliver: bool,
}

/// Evaluates ψ on an edge. `inputs` are the arguments ψ reads (the edge's
/// own buffer for incremental ψ); `buffer` is the edge's own buffer.
pub fn compute_message(
    edge: u32,
    psi: &MessageFn,
    inputs: &[Value],
    buffer: &Value,
    args: &MonoidSpec,
    msgs: &MonoidSpec,
) -> Result<Computed> {
    let (message, buffer) = match psi.mode {
        MessageMode::Incremental => {
            if !psi.hom_verified {
                return Err(Error::Configuration(format!(
                    "edge {edge}: incremental ψ `{}` is not a verified homomorphism",
                    psi.name
                )));
            }
            (psi.eval(inputs)?, args.unit.clone())
        }
        MessageMode::Blocking => (psi.eval(inputs)?, buffer.clone()),
    };
    if !msgs.carrier.contains(&message) {
        return Err(Error::TypeFault {
            edge,
            value: message,
        });
    }
    let deliver = !msgs.is_unit(&message);
    Ok(Computed {
        message,
        buffer,
        deliver,
    })
}

/// `ψ(0) = 1` and `ψ(a + b) = ψ(a)·ψ(b)` for all `a, b` in `samples`.
pub fn check_homomorphism(
    psi: &MessageFn,
    args: &MonoidSpec,
    msgs: &MonoidSpec,
    samples: &[Value],
    cfg: &CheckConfig,
) -> Result<ViolationReport> {
    if psi.arity != 1 {
        return Err(Error::spec(format!(
            "ψ `{}` has arity {}; homomorphism checks need arity 1",
            psi.name, psi.arity
        )));
    }
    let apply = |a: &Value| (psi.eval)(std::slice::from_ref(a));
    let window = format!("A={} ({} samples)", args.carrier.describe(), samples.len());
    let mut c = Collector::new(format!("homomorphism {}", psi.name), window, cfg);
    c.expect_eq(
        Law::HomomorphismUnit,
        || vec![args.unit.clone()],
        apply(&args.unit),
        msgs.unit.clone(),
    );
    c.visit([samples.len(), samples.len()], cfg, |c, [i, j]| {
        let (a, b) = (&samples[i], &samples[j]);
        c.expect_eq(
            Law::HomomorphismProduct,
            || vec![a.clone(), b.clone()],
            apply(&args.op(a, b)),
            msgs.op(&apply(a), &apply(b)),
        );
    });
    Ok(c.finish())
}

/// Re-evaluates a witness from [`check_homomorphism`].
pub fn replay_homomorphism(
    psi: &MessageFn,
    args: &MonoidSpec,
    msgs: &MonoidSpec,
    w: &Witness,
) -> bool {
    let apply = |a: &Value| (psi.eval)(std::slice::from_ref(a));
    let (lhs, rhs) = match (w.law, w.inputs.as_slice()) {
        (Law::HomomorphismUnit, [z]) => (apply(z), msgs.unit.clone()),
        (Law::HomomorphismProduct, [a, b]) => {
            (apply(&args.op(a, b)), msgs.op(&apply(a), &apply(b)))
        }
        _ => return false,
    };
    lhs != rhs && lhs == w.lhs && rhs == w.rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::stock;
    use crate::fabric::tropical::{tropical_apply, TropicalMatrix};

    fn shift(len: i64) -> MessageFn {
        MessageFn::incremental(format!("shift{len}"), move |a| match a {
            Value::Int(x) => Value::Int(x - len),
            other => other.clone(),
        })
    }

    #[test]
    fn identity_is_a_homomorphism() {
        let m = stock::nat_add(0, 30);
        let r = check_homomorphism(
            &MessageFn::identity(),
            &m,
            &m,
            m.carrier.elements(),
            &CheckConfig::default(),
        )
        .unwrap();
        assert!(r.passed);
    }

    #[test]
    fn tropical_matrix_over_max_is_a_homomorphism() {
        let vecs = stock::tropical_vector(2, -3, 3);
        let w = TropicalMatrix::new(
            2,
            2,
            vec![Value::Int(0), Value::Bot, Value::Int(1), Value::Int(-2)],
        )
        .unwrap();
        let psi = MessageFn::incremental("trop", move |x| {
            Value::Tuple(tropical_apply(&w, x.tuple().unwrap()).unwrap())
        });
        let r = check_homomorphism(
            &psi,
            &vecs,
            &vecs,
            vecs.carrier.elements(),
            &CheckConfig::default(),
        )
        .unwrap();
        assert!(r.passed, "{:?}", r.witnesses);
    }

    #[test]
    fn coordinate_sum_is_not_a_homomorphism() {
        let vecs = stock::tropical_vector(2, 0, 1);
        let scalars = stock::max_bot(0, 2);
        let psi = MessageFn::incremental("coordinate sum", |x| {
            let xs = x.tuple().unwrap();
            xs[0].trop_mul(&xs[1]).unwrap()
        });
        let samples = vec![
            Value::Tuple(vec![Value::Int(0), Value::Int(1)]),
            Value::Tuple(vec![Value::Int(1), Value::Int(0)]),
        ];
        let r =
            check_homomorphism(&psi, &vecs, &scalars, &samples, &CheckConfig::default()).unwrap();
        assert!(!r.passed);
        let w = r
            .witnesses
            .iter()
            .find(|w| w.law == Law::HomomorphismProduct)
            .unwrap();
        assert_eq!(w.inputs, samples);
        assert_eq!(
            (w.lhs.clone(), w.rhs.clone()),
            (Value::Int(2), Value::Int(1))
        );
        assert!(r
            .witnesses
            .iter()
            .all(|w| replay_homomorphism(&psi, &vecs, &scalars, w)));
    }

    #[test]
    fn incremental_read_resets_and_skips_unit() {
        let m = stock::max_bot(-30, 0);
        let psi = shift(2).assume_homomorphism();
        let out = compute_message(0, &psi, &[Value::Int(-5)], &Value::Int(-5), &m, &m).unwrap();
        assert_eq!(out.message, Value::Int(-7));
        assert_eq!(out.buffer, Value::Bot);
        assert!(out.deliver);

        let out = compute_message(0, &psi, &[Value::Bot], &Value::Bot, &m, &m).unwrap();
        assert_eq!(out.message, Value::Bot);
        assert!(!out.deliver);
    }

    #[test]
    fn carry_link_forwards_the_carry() {
        let n = stock::nat_add(0, 200);
        let mut psi = MessageFn::identity();
        psi.verify_homomorphism(&n, &n, &CheckConfig::default())
            .unwrap();
        let out = compute_message(4, &psi, &[Value::Int(3)], &Value::Int(3), &n, &n).unwrap();
        assert_eq!(out.message, Value::Int(3));
        assert_eq!(out.buffer, Value::Int(0));
    }

    #[test]
    fn unverified_incremental_psi_is_a_configuration_fault() {
        let m = stock::max_bot(-30, 0);
        let err =
            compute_message(0, &shift(1), &[Value::Int(0)], &Value::Int(0), &m, &m).unwrap_err();
        assert!(matches!(err, Error::Configuration(_)));
    }

    #[test]
    fn blocking_read_keeps_buffer_and_checks_type() {
        let m = stock::max_bot(-30, 0);
        let psi = MessageFn::blocking("max of two", 2, |xs| xs[0].join(&xs[1]).unwrap()).unwrap();
        let out = compute_message(
            1,
            &psi,
            &[Value::Int(-4), Value::Int(-2)],
            &Value::Int(-4),
            &m,
            &m,
        )
        .unwrap();
        assert_eq!(out.message, Value::Int(-2));
        assert_eq!(out.buffer, Value::Int(-4));

        let bad = MessageFn::blocking("bool", 1, |_| Value::Bool(true)).unwrap();
        let err = compute_message(1, &bad, &[Value::Bot], &Value::Bot, &m, &m).unwrap_err();
        assert!(matches!(err, Error::TypeFault { edge: 1, .. }));
    }
}
