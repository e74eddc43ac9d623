use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::value::Value;

/// A matrix over `ℤ ∪ {⊥}` acting by max-plus multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Value>,
}

impl TropicalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Value>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        if let Some(bad) = entries
            .iter()
            .find(|v| !matches!(v, Value::Bot | Value::Int(_)))
        {
            return Err(Error::spec(format!("{bad} is not a tropical scalar")));
        }
        Ok(TropicalMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// `0` on the diagonal, `⊥` elsewhere.
    pub fn identity(n: usize) -> Self {
        let entries = (0..n * n)
            .map(|i| {
                if i / n == i % n {
                    Value::Int(0)
                } else {
                    Value::Bot
                }
            })
            .collect();
        TropicalMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Value {
        &self.entries[i * self.cols + j]
    }

    /// Nested-array form `[[..], ..]` used in instance payloads.
    pub fn to_value(&self) -> Value {
        Value::Tuple(
            self.entries
                .chunks(self.cols.max(1))
                .map(|row| Value::Tuple(row.to_vec()))
                .collect(),
        )
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let rows = v
            .tuple()
            .ok_or_else(|| Error::spec(format!("matrix payload {v} is not an array of rows")))?;
        let mut entries = Vec::new();
        let mut cols = None;
        for row in rows {
            let row = row
                .tuple()
                .ok_or_else(|| Error::spec(format!("matrix row {row} is not an array")))?;
            match cols {
                None => cols = Some(row.len()),
                Some(c) if c != row.len() => {
                    return Err(Error::Dimension {
                        expected: c,
                        actual: row.len(),
                    })
                }
                _ => {}
            }
            entries.extend(row.iter().cloned());
        }
        TropicalMatrix::new(rows.len(), cols.unwrap_or(0), entries)
    }
}

/// `y_i = max_j (W_ij + x_j)`, with `⊥` absorbing for `+` and the max of an
/// all-`⊥` row being `⊥`.
pub fn tropical_apply(w: &TropicalMatrix, x: &[Value]) -> Result<Vec<Value>> {
    if x.len() != w.cols {
        return Err(Error::Dimension {
            expected: w.cols,
            actual: x.len(),
        });
    }
    (0..w.rows)
        .map(|i| {
            let mut acc = Value::Bot;
            for (j, xj) in x.iter().enumerate() {
                let term = w
                    .get(i, j)
                    .trop_mul(xj)
                    .ok_or_else(|| Error::spec(format!("{xj} is not a tropical scalar")))?;
                acc = acc.join(&term).expect("scalars");
            }
            Ok(acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scalar() -> impl Strategy<Value = Value> {
        prop_oneof![1 => Just(Value::Bot), 4 => (-20i64..20).prop_map(Value::Int)]
    }

    /// Independent max-plus evaluation on `Option<i64>`.
    fn brute(w: &[Vec<Option<i64>>], x: &[Option<i64>]) -> Vec<Option<i64>> {
        w.iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter_map(|(a, b)| Some((*a)? + (*b)?))
                    .max()
            })
            .collect()
    }

    #[test]
    fn identity_matrix_is_identity() {
        let x = vec![Value::Int(3), Value::Bot, Value::Int(-1)];
        assert_eq!(tropical_apply(&TropicalMatrix::identity(3), &x).unwrap(), x);
    }

    #[test]
    fn small_example_matches_brute_force() {
        let w = TropicalMatrix::new(
            2,
            2,
            vec![Value::Int(0), Value::Bot, Value::Int(1), Value::Int(2)],
        )
        .unwrap();
        let got = tropical_apply(&w, &[Value::Int(3), Value::Int(4)]).unwrap();
        let expect = brute(
            &[vec![Some(0), None], vec![Some(1), Some(2)]],
            &[Some(3), Some(4)],
        );
        assert_eq!(expect, vec![Some(3), Some(6)]);
        assert_eq!(got, vec![Value::Int(3), Value::Int(6)]);
    }

    #[test]
    fn bottom_vector_maps_to_bottom() {
        let w = TropicalMatrix::new(2, 2, vec![Value::Int(5); 4]).unwrap();
        assert_eq!(
            tropical_apply(&w, &[Value::Bot, Value::Bot]).unwrap(),
            vec![Value::Bot; 2]
        );
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let w = TropicalMatrix::identity(2);
        assert!(matches!(
            tropical_apply(&w, &[Value::Int(1)]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn payload_round_trip() {
        let w = TropicalMatrix::new(2, 3, (0..6).map(Value::Int).collect()).unwrap();
        assert_eq!(TropicalMatrix::from_value(&w.to_value()).unwrap(), w);
    }

    proptest! {
        #[test]
        fn distributes_over_componentwise_max(
            entries in prop::collection::vec(scalar(), 9),
            x in prop::collection::vec(scalar(), 3),
            y in prop::collection::vec(scalar(), 3),
        ) {
            let w = TropicalMatrix::new(3, 3, entries).unwrap();
            let xy: Vec<Value> = x.iter().zip(&y).map(|(a, b)| a.join(b).unwrap()).collect();
            let lhs = tropical_apply(&w, &xy).unwrap();
            let rhs: Vec<Value> = tropical_apply(&w, &x).unwrap().iter()
                .zip(tropical_apply(&w, &y).unwrap())
                .map(|(a, b)| a.join(&b).unwrap())
                .collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
