use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::value::Value;

/// Budget for law checks.
///
/// A law quantified over a product of carriers is checked exhaustively when
/// the product has at most `exhaustive_cap` points, and on `samples` points
/// drawn with a ChaCha8 generator seeded by `seed` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub exhaustive_cap: u64,
    pub samples: u64,
    pub seed: u64,
    pub max_witnesses: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            exhaustive_cap: 5_000_000,
            samples: 200_000,
            seed: 0,
            max_witnesses: 8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Closure,
    Associativity,
    LeftUnit,
    RightUnit,
    Commutativity,
    Idempotence,
    ActionUnit,
    ActionAssociativity,
    CocycleUnit,
    CocycleProduct,
    HomomorphismUnit,
    HomomorphismProduct,
    SplittingUnit,
    SplittingProduct,
}

/// A concrete counterexample: the law, its inputs in the order the law
/// quantifies them, and the two sides that differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub law: Law,
    pub inputs: Vec<Value>,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Coverage {
    Exhaustive {
        window: String,
    },
    Sampled {
        window: String,
        seed: u64,
        samples: u64,
    },
}

impl Coverage {
    pub fn is_exhaustive(&self) -> bool {
        matches!(self, Coverage::Exhaustive { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub subject: String,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
    /// Total number of failing law instances, of which at most
    /// `max_witnesses` are kept.
    pub violations: u64,
    pub checked: u64,
    pub coverage: Coverage,
}

impl ViolationReport {
    pub fn laws_violated(&self) -> Vec<Law> {
        let mut laws: Vec<Law> = Vec::new();
        for w in &self.witnesses {
            if !laws.contains(&w.law) {
                laws.push(w.law);
            }
        }
        laws
    }
}

/// Accumulates law evaluations into a report.
pub(crate) struct Collector {
    subject: String,
    max_witnesses: usize,
    witnesses: Vec<Witness>,
    violations: u64,
    checked: u64,
    sampled: Option<(u64, u64)>,
    window: String,
}

impl Collector {
    pub(crate) fn new(
        subject: impl Into<String>,
        window: impl Into<String>,
        cfg: &CheckConfig,
    ) -> Self {
        Collector {
            subject: subject.into(),
            max_witnesses: cfg.max_witnesses.max(1),
            witnesses: Vec::new(),
            violations: 0,
            checked: 0,
            sampled: None,
            window: window.into(),
        }
    }

    pub(crate) fn expect_eq(
        &mut self,
        law: Law,
        inputs: impl FnOnce() -> Vec<Value>,
        lhs: Value,
        rhs: Value,
    ) {
        self.checked += 1;
        if lhs != rhs {
            self.violations += 1;
            if self.witnesses.len() < self.max_witnesses {
                self.witnesses.push(Witness {
                    law,
                    inputs: inputs(),
                    lhs,
                    rhs,
                });
            }
        }
    }

    /// Records a closure failure: `value` produced from `inputs` is outside its carrier.
    pub(crate) fn expect_member(&mut self, inputs: impl FnOnce() -> Vec<Value>, is_member: bool) {
        self.expect_eq(
            Law::Closure,
            inputs,
            Value::Bool(is_member),
            Value::Bool(true),
        );
    }

    /// Visits every index tuple of `dims`, or a seeded sample when the
    /// product exceeds the configured cap.
    pub(crate) fn visit<const N: usize>(
        &mut self,
        dims: [usize; N],
        cfg: &CheckConfig,
        mut f: impl FnMut(&mut Self, [usize; N]),
    ) {
        let total = dims
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d as u64))
            .unwrap_or(u64::MAX);
        if total == 0 {
            return;
        }
        if total <= cfg.exhaustive_cap {
            let mut idx = [0usize; N];
            loop {
                f(self, idx);
                let mut k = N;
                loop {
                    if k == 0 {
                        return;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < dims[k] {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for _ in 0..cfg.samples {
                let mut idx = [0usize; N];
                for (slot, &d) in idx.iter_mut().zip(&dims) {
                    *slot = rng.gen_range(0..d);
                }
                f(self, idx);
            }
            let prev = self.sampled.map_or(0, |(_, n)| n);
            self.sampled = Some((cfg.seed, prev + cfg.samples));
        }
    }

    pub(crate) fn finish(self) -> ViolationReport {
        let coverage = match self.sampled {
            None => Coverage::Exhaustive {
                window: self.window,
            },
            Some((seed, samples)) => Coverage::Sampled {
                window: self.window,
                seed,
                samples,
            },
        };
        ViolationReport {
            subject: self.subject,
            passed: self.witnesses.is_empty(),
            witnesses: self.witnesses,
            violations: self.violations,
            checked: self.checked,
            coverage,
        }
    }
}
