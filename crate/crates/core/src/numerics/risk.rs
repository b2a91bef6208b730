use crate::error::{Error, Result};

/// Empirical and expected risk of one trained model, in loss units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskPair {
    pub empirical: f64,
    pub expected: f64,
    /// `expected - empirical`, stored exactly as computed.
    pub gap: f64,
    pub n_train: usize,
    pub n_eval: usize,
}

impl RiskPair {
    pub fn new(empirical: f64, expected: f64, n_train: usize, n_eval: usize) -> Self {
        Self {
            empirical,
            expected,
            gap: expected - empirical,
            n_train,
            n_eval,
        }
    }
}

fn mean_loss<S, F>(loss: &mut F, set: &[S], what: &'static str) -> Result<f64>
where
    F: FnMut(&S) -> f64,
{
    if set.is_empty() {
        return Err(Error::Empty(what));
    }
    let mut total = 0.0;
    for (i, s) in set.iter().enumerate() {
        let l = loss(s);
        if l.is_nan() {
            return Err(Error::NanLoss(i));
        }
        total += l;
    }
    Ok(total / set.len() as f64)
}

/// Mean loss on the training set versus mean loss on a held-out set, the
/// latter standing in for the expected risk.
pub fn estimate_risk_pair<S, F>(mut loss: F, train: &[S], eval: &[S]) -> Result<RiskPair>
where
    F: FnMut(&S) -> f64,
{
    let empirical = mean_loss(&mut loss, train, "training set")?;
    let expected = mean_loss(&mut loss, eval, "evaluation set")?;
    Ok(RiskPair::new(empirical, expected, train.len(), eval.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_loss_has_no_gap() {
        let r = estimate_risk_pair(|_: &u8| 1.0, &[1, 2, 3], &[4, 5]).unwrap();
        assert_eq!(r.gap, 0.0);
        assert_eq!((r.n_train, r.n_eval), (3, 2));
    }

    #[test]
    fn exact_means() {
        let r = estimate_risk_pair(|x: &f64| *x, &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(r, RiskPair::new(0.0, 1.0, 2, 2));
        assert_eq!(r.gap, 1.0);
    }

    #[test]
    fn errors() {
        let empty: [f64; 0] = [];
        assert_eq!(
            estimate_risk_pair(|x: &f64| *x, &empty, &[1.0]).unwrap_err(),
            Error::Empty("training set")
        );
        assert_eq!(
            estimate_risk_pair(|x: &f64| *x, &[1.0], &[0.0, f64::NAN]).unwrap_err(),
            Error::NanLoss(1)
        );
    }
}
