use crate::data::encode_attribute;
use crate::error::{invalid, Error, Result};
use crate::nn::Mlp;

/// Criterion used to rank candidate values of the sensitive attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttrStrategy {
    /// Highest top-class probability.
    Likelihood,
    /// Highest top-class probability among candidates predicting the true
    /// label.
    Accuracy,
    /// Lowest loss on the true label.
    Loss,
    /// Smallest squared norm of the parameter gradient of the loss.
    Gradient,
}

impl AttrStrategy {
    pub const ALL: [AttrStrategy; 4] = [
        AttrStrategy::Likelihood,
        AttrStrategy::Accuracy,
        AttrStrategy::Loss,
        AttrStrategy::Gradient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttrStrategy::Likelihood => "likelihood",
            AttrStrategy::Accuracy => "accuracy",
            AttrStrategy::Loss => "loss",
            AttrStrategy::Gradient => "gradient",
        }
    }
}

impl std::str::FromStr for AttrStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        AttrStrategy::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown attribute strategy `{s}`"))
    }
}

/// A partially known record: the attacker sees `v` and `y` and must
/// recover `t_true`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeInstance {
    pub v: Vec<f64>,
    pub t_true: usize,
    pub y: usize,
    pub candidate_count: usize,
}

impl AttributeInstance {
    pub fn new(v: Vec<f64>, t_true: usize, y: usize, candidate_count: usize) -> Result<Self> {
        if t_true >= candidate_count {
            return Err(invalid("t_true", format!("{t_true} out of range for {candidate_count} candidates")));
        }
        Ok(Self {
            v,
            t_true,
            y,
            candidate_count,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttrGuess {
    pub t: usize,
    /// The accuracy criterion found no candidate predicting the true label
    /// and ranked all of them by likelihood instead.
    pub fallback: bool,
}

/// Picks the lowest-index best candidate. `better(a, b)` says `a` beats `b`.
fn best_of(scores: &[(usize, f64)], better: impl Fn(f64, f64) -> bool) -> usize {
    let mut best = scores[0];
    for &s in &scores[1..] {
        if better(s.1, best.1) {
            best = s;
        }
    }
    best.0
}

/// Infers the sensitive attribute by scoring every candidate.
pub fn attr_infer(model: &Mlp, inst: &AttributeInstance, strategy: AttrStrategy) -> Result<AttrGuess> {
    let k = inst.candidate_count;
    if k == 0 {
        return Err(Error::Empty("candidate set"));
    }
    if model.input_dim() != inst.v.len() + k {
        return Err(Error::DimensionMismatch {
            expected: model.input_dim(),
            got: inst.v.len() + k,
        });
    }
    let inputs = (0..k).map(|t| encode_attribute(&inst.v, t, k));
    let higher = |a: f64, b: f64| a > b;
    let lower = |a: f64, b: f64| a < b;
    let guess = |t| AttrGuess { t, fallback: false };
    match strategy {
        AttrStrategy::Likelihood | AttrStrategy::Accuracy => {
            let mut all = Vec::with_capacity(k);
            let mut correct = Vec::new();
            for (t, x) in inputs.enumerate() {
                let f = model.forward(&x)?;
                let top = crate::nn::argmax_of(&f);
                all.push((t, f[top]));
                if top == inst.y {
                    correct.push((t, f[top]));
                }
            }
            if strategy == AttrStrategy::Accuracy && !correct.is_empty() {
                Ok(guess(best_of(&correct, higher)))
            } else {
                Ok(AttrGuess {
                    t: best_of(&all, higher),
                    fallback: strategy == AttrStrategy::Accuracy,
                })
            }
        }
        AttrStrategy::Loss => {
            let scores = inputs
                .enumerate()
                .map(|(t, x)| model.mse_loss(&x, inst.y).map(|l| (t, l)))
                .collect::<Result<Vec<_>>>()?;
            Ok(guess(best_of(&scores, lower)))
        }
        AttrStrategy::Gradient => {
            let scores = inputs
                .enumerate()
                .map(|(t, x)| model.backprop(&x, inst.y).map(|(_, g)| (t, g.iter().map(|v| v * v).sum())))
                .collect::<Result<Vec<_>>>()?;
            Ok(guess(best_of(&scores, lower)))
        }
    }
}
