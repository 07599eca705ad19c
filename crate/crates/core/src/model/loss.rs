use super::gpt::log_softmax;
use super::tensor::{Scalar, Tensor};
use crate::error::{Error, Result};

/// Mean next-token cross-entropy over the positions that carry a target.
/// `logits` is `len × vocab`; `targets[i]` is the id expected after
/// position `i`.
pub fn cross_entropy<T: Scalar>(logits: &Tensor<T>, targets: &[Option<u32>]) -> Result<f64> {
    let v = *logits.shape.last().ok_or_else(|| Error::Invalid("scalar logits".into()))?;
    if logits.data.len() != targets.len() * v {
        return Err(Error::Invalid("targets and logits differ in length".into()));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for (i, t) in targets.iter().enumerate() {
        let Some(t) = *t else { continue };
        if t as usize >= v {
            return Err(Error::TokenOutOfRange { id: t, size: v });
        }
        let ls = log_softmax(logits.row(i));
        total -= ls[t as usize].to_f64().expect("finite");
        count += 1;
    }
    if count == 0 {
        return Err(Error::AllMasked);
    }
    Ok(total / count as f64)
}

/// Shifted targets for plain language modelling over `ids`, with the
/// positions before `loss_from` masked out.
pub fn shifted_targets(ids: &[u32], loss_from: usize) -> Vec<Option<u32>> {
    (0..ids.len())
        .map(|i| {
            let next = ids.get(i + 1).copied()?;
            (i + 1 >= loss_from).then_some(next)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(logits: &[Vec<f64>], targets: &[Option<u32>]) -> f64 {
        let mut s = 0.0;
        let mut n = 0.0;
        for (row, t) in logits.iter().zip(targets) {
            if let Some(t) = t {
                let z: f64 = row.iter().map(|x| x.exp()).sum();
                s += -(row[*t as usize].exp() / z).ln();
                n += 1.0;
            }
        }
        s / n
    }

    #[test]
    fn matches_naive_softmax() {
        let rows = vec![vec![0.1, -2.0, 3.0, 0.5], vec![1.0, 1.0, 1.0, 1.0], vec![-0.3, 0.2, 0.0, 4.0]];
        let t = Tensor {
            shape: vec![3, 4],
            data: rows.concat(),
        };
        let targets = [Some(2), None, Some(0)];
        let got = cross_entropy(&t, &targets).unwrap();
        assert!((got - naive(&rows, &targets)).abs() < 1e-12);
    }

    #[test]
    fn uniform_logits_give_log_vocab() {
        let t = Tensor::<f64>::zeros(&[2, 7]);
        let got = cross_entropy(&t, &[Some(3), Some(6)]).unwrap();
        assert!((got - 7f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn all_masked_is_an_error() {
        let t = Tensor::<f64>::zeros(&[2, 3]);
        assert!(matches!(cross_entropy(&t, &[None, None]), Err(Error::AllMasked)));
    }

    #[test]
    fn shifted_targets_mask_prefix() {
        assert_eq!(shifted_targets(&[5, 6, 7, 8], 0), vec![Some(6), Some(7), Some(8), None]);
        assert_eq!(shifted_targets(&[5, 6, 7, 8], 2), vec![None, Some(7), Some(8), None]);
    }
}
