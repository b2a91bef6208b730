use crate::error::Result;
use crate::nn::{Mlp, LOG_FLOOR};

/// Black-box membership score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MiaStrategy {
    /// Largest soft probability; high means member.
    Likelihood,
    /// MSE against the true label; low means member.
    Loss,
    /// Modified prediction entropy; low means member.
    Mentr,
}

impl MiaStrategy {
    pub const ALL: [MiaStrategy; 3] = [MiaStrategy::Likelihood, MiaStrategy::Loss, MiaStrategy::Mentr];

    pub fn name(self) -> &'static str {
        match self {
            MiaStrategy::Likelihood => "likelihood",
            MiaStrategy::Loss => "loss",
            MiaStrategy::Mentr => "mentr",
        }
    }

    pub fn score(self, model: &Mlp, x: &[f64], label: usize) -> Result<f64> {
        match self {
            MiaStrategy::Likelihood => likelihood_score(model, x),
            MiaStrategy::Loss => loss_score(model, x, label),
            MiaStrategy::Mentr => mentr_score(model, x, label),
        }
    }

    /// Membership decision for a score against threshold `h`.
    pub fn predicts_member(self, score: f64, h: f64) -> bool {
        match self {
            MiaStrategy::Likelihood => score > h,
            MiaStrategy::Loss | MiaStrategy::Mentr => score < h,
        }
    }
}

impl std::str::FromStr for MiaStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        MiaStrategy::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown membership strategy `{s}`"))
    }
}

pub fn likelihood_score(model: &Mlp, x: &[f64]) -> Result<f64> {
    Ok(model.forward(x)?.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

pub fn loss_score(model: &Mlp, x: &[f64], label: usize) -> Result<f64> {
    model.mse_loss(x, label)
}

pub fn mentr_score(model: &Mlp, x: &[f64], label: usize) -> Result<f64> {
    let f = model.forward(x)?;
    if label >= f.len() {
        return model.mse_loss(x, label);
    }
    Ok(mentr_of(&f, label))
}

/// `-(1 - f_y) log f_y - sum_{i != y} f_i log(1 - f_i)`, logs floored.
pub(crate) fn mentr_of(f: &[f64], label: usize) -> f64 {
    let ln = |p: f64| p.max(LOG_FLOOR).ln();
    f.iter()
        .enumerate()
        .map(|(i, &p)| if i == label { -(1.0 - p) * ln(p) } else { -p * ln(1.0 - p) })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mentr_values() {
        assert_eq!(mentr_of(&[1.0, 0.0], 0), 0.0);
        assert!((mentr_of(&[0.5, 0.5], 0) - std::f64::consts::LN_2).abs() < 1e-12);
        // both terms hit the floor: 2 * ln(1e12)
        let v = mentr_of(&[0.0, 1.0], 0);
        assert!((v - 2.0 * 1e12f64.ln()).abs() < 1e-9, "{v}");
        assert!((1e12f64.ln() - 27.631021115928547).abs() < 1e-12);
    }

    #[test]
    fn likelihood_is_max_output() {
        // a single-layer model realising outputs proportional to exp(z)
        let z = [0.1f64.ln(), 0.7f64.ln(), 0.2f64.ln()];
        let m = Mlp::from_params(&[1, 3], vec![0.0, 0.0, 0.0, z[0], z[1], z[2]]).unwrap();
        assert!((likelihood_score(&m, &[1.0]).unwrap() - 0.7).abs() < 1e-12);
        let u = Mlp::zeros(&[2, 4]).unwrap();
        assert!((likelihood_score(&u, &[0.3, 0.1]).unwrap() - 0.25).abs() < 1e-15);
        assert!((loss_score(&u, &[0.3, 0.1], 1).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn directions() {
        assert!(MiaStrategy::Likelihood.predicts_member(0.9, 0.8));
        assert!(!MiaStrategy::Likelihood.predicts_member(0.8, 0.8));
        assert!(MiaStrategy::Loss.predicts_member(0.1, 0.2));
        assert!(!MiaStrategy::Mentr.predicts_member(0.3, 0.2));
        assert!(MiaStrategy::Likelihood.predicts_member(0.0, f64::NEG_INFINITY));
        assert_eq!("mentr".parse::<MiaStrategy>().unwrap(), MiaStrategy::Mentr);
        assert!("nope".parse::<MiaStrategy>().is_err());
    }
}
