use super::mlp::Mlp;
use crate::data::Dataset;
use crate::error::{invalid, Error, Result};
use crate::numerics::RngStream;

/// Minibatch Adam with loss-plateau early stopping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub lr: f64,
    pub max_epochs: usize,
    pub batch_size: usize,
    /// Stop once the full training loss changes by less than this between
    /// consecutive epochs.
    pub early_stop_delta: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lr: 5e-3,
            max_epochs: 150,
            batch_size: 200,
            early_stop_delta: 1e-3,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lr > 0.0) {
            return Err(invalid("lr", "must be positive"));
        }
        if self.max_epochs == 0 {
            return Err(invalid("max_epochs", "must be positive"));
        }
        if self.batch_size == 0 {
            return Err(invalid("batch_size", "must be positive"));
        }
        if !(self.early_stop_delta > 0.0) {
            return Err(invalid("early_stop_delta", "must be positive"));
        }
        for (name, b) in [("adam_beta1", self.adam_beta1), ("adam_beta2", self.adam_beta2)] {
            if !(b > 0.0 && b < 1.0) {
                return Err(invalid(name, format!("must lie in (0, 1), got {b}")));
            }
        }
        if !(self.adam_eps > 0.0) {
            return Err(invalid("adam_eps", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochLog {
    /// Mean training loss before training (index 0) and after each epoch.
    pub losses: Vec<f64>,
    pub stopped_early: bool,
}

impl EpochLog {
    pub fn epochs(&self) -> usize {
        self.losses.len() - 1
    }
}

/// Mean MSE over the dataset.
pub(crate) fn mean_loss(model: &Mlp, data: &Dataset) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..data.len() {
        total += model.mse_loss(data.features(i), data.label(i))?;
    }
    Ok(total / data.len() as f64)
}

/// Trains `model` on `data`. The shuffle order of every epoch derives from
/// `cfg.seed`, so equal seeds give bitwise-equal parameters.
pub fn train(mut model: Mlp, data: &Dataset, cfg: &TrainConfig) -> Result<(Mlp, EpochLog)> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::Empty("training set"));
    }
    if data.dim() != model.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.input_dim(),
            got: data.dim(),
        });
    }
    if data.classes() > model.classes() {
        return Err(invalid("labels", "dataset has more classes than the model outputs"));
    }

    let p = model.param_count();
    let (mut m1, mut m2) = (vec![0.0; p], vec![0.0; p]);
    let mut grad = vec![0.0; p];
    let mut step = 0i32;
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut rng = RngStream::new(cfg.seed, 1);

    let mut losses = vec![mean_loss(&model, data)?];
    let mut stopped_early = false;
    for _ in 0..cfg.max_epochs {
        rng.shuffle(&mut order);
        for batch in order.chunks(cfg.batch_size) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            let scale = 1.0 / batch.len() as f64;
            for &i in batch {
                model.accumulate_gradient(data.features(i), data.label(i), scale, &mut grad)?;
            }
            step += 1;
            let c1 = 1.0 - cfg.adam_beta1.powi(step);
            let c2 = 1.0 - cfg.adam_beta2.powi(step);
            for (k, w) in model.params_mut().iter_mut().enumerate() {
                m1[k] = cfg.adam_beta1 * m1[k] + (1.0 - cfg.adam_beta1) * grad[k];
                m2[k] = cfg.adam_beta2 * m2[k] + (1.0 - cfg.adam_beta2) * grad[k] * grad[k];
                *w -= cfg.lr * (m1[k] / c1) / ((m2[k] / c2).sqrt() + cfg.adam_eps);
            }
        }
        let loss = mean_loss(&model, data)?;
        let prev = *losses.last().unwrap();
        losses.push(loss);
        if (loss - prev).abs() < cfg.early_stop_delta {
            stopped_early = true;
            break;
        }
    }
    Ok((model, EpochLog { losses, stopped_early }))
}

/// Fraction of samples whose predicted class equals the label.
pub fn accuracy(model: &Mlp, data: &Dataset) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    let mut hits = 0usize;
    for i in 0..data.len() {
        hits += (model.predict(data.features(i))? == data.label(i)) as usize;
    }
    Ok(hits as f64 / data.len() as f64)
}
