use crate::error::{Error, Result};

/// Softmax of `qᵀk_i` over the neighbours, computed with the maximum logit
/// subtracted.
pub fn attention_weights(q: &[f64], keys: &[Vec<f64>]) -> Result<Vec<f64>> {
    if keys.is_empty() {
        return Err(Error::spec("attention needs at least one neighbour"));
    }
    let logits = keys
        .iter()
        .map(|k| {
            if k.len() != q.len() {
                return Err(Error::Dimension {
                    expected: q.len(),
                    actual: k.len(),
                });
            }
            Ok(q.iter().zip(k).map(|(a, b)| a * b).sum::<f64>())
        })
        .collect::<Result<Vec<f64>>>()?;
    let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = exps.iter().sum();
    Ok(exps.into_iter().map(|e| e / total).collect())
}

/// `α_i · v_i` for each neighbour, with `α = softmax(qᵀk)`. A blocking
/// message: it needs every neighbour's key at once.
pub fn attention_message(
    q: &[f64],
    keys: &[Vec<f64>],
    values: &[Vec<f64>],
) -> Result<Vec<Vec<f64>>> {
    if keys.len() != values.len() {
        return Err(Error::Dimension {
            expected: keys.len(),
            actual: values.len(),
        });
    }
    let alpha = attention_weights(q, keys)?;
    Ok(alpha
        .iter()
        .zip(values)
        .map(|(a, v)| v.iter().map(|x| a * x).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_neighbour_passes_value_through() {
        let out = attention_message(&[0.3, -2.0], &[vec![5.0, 1.0]], &[vec![1.5, 2.5]]).unwrap();
        assert_eq!(out, vec![vec![1.5, 2.5]]);
    }

    #[test]
    fn equal_logits_split_evenly() {
        let keys = vec![vec![1.0, 2.0]; 3];
        let alpha = attention_weights(&[0.5, 0.25], &keys).unwrap();
        for a in alpha {
            assert!((a - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_neighbour_example() {
        let out = attention_message(
            &[1.0, 0.0],
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
            &[vec![2.0], vec![4.0]],
        )
        .unwrap();
        // softmax(1, 0) = (e/(e+1), 1/(e+1))
        let e = std::f64::consts::E;
        let a0 = e / (e + 1.0);
        let a1 = 1.0 / (e + 1.0);
        assert!((out[0][0] - 2.0 * a0).abs() < 1e-12);
        assert!((out[1][0] - 4.0 * a1).abs() < 1e-12);
    }

    #[test]
    fn large_logits_do_not_overflow() {
        let alpha = attention_weights(&[1000.0], &[vec![1.0], vec![0.999]]).unwrap();
        assert!(alpha.iter().all(|a| a.is_finite()));
        assert!((alpha.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn malformed_inputs_are_faults() {
        assert!(attention_weights(&[1.0], &[]).is_err());
        assert!(attention_message(&[1.0], &[vec![1.0]], &[]).is_err());
        assert!(attention_weights(&[1.0, 2.0], &[vec![1.0]]).is_err());
    }
}
