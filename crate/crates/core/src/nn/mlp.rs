use crate::error::{invalid, Error, Result};
use crate::numerics::RngStream;

/// Floor applied inside any logarithm of a network output.
pub const LOG_FLOOR: f64 = 1e-12;

/// Multilayer perceptron. Parameters live in one flat vector, layer by
/// layer, each layer as its `out x in` weight matrix (row-major) followed
/// by its `out` biases.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    dims: Vec<usize>,
    params: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Layer {
    fan_in: usize,
    fan_out: usize,
    w: usize,
    b: usize,
}

pub fn one_hot(label: usize, classes: usize) -> Vec<f64> {
    let mut v = vec![0.0; classes];
    v[label] = 1.0;
    v
}

fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for v in z.iter_mut() {
        *v = (*v - max).exp();
        total += *v;
    }
    for v in z.iter_mut() {
        *v /= total;
    }
}

impl Mlp {
    /// Zero-initialized network. Outputs are uniform over classes.
    pub fn zeros(dims: &[usize]) -> Result<Self> {
        if dims.len() < 2 || dims.contains(&0) {
            return Err(invalid("layer_dims", format!("need at least two positive sizes, got {dims:?}")));
        }
        if *dims.last().unwrap() < 2 {
            return Err(invalid("layer_dims", "need at least two output classes"));
        }
        let count = dims.windows(2).map(|w| (w[0] + 1) * w[1]).sum();
        Ok(Self {
            dims: dims.to_vec(),
            params: vec![0.0; count],
        })
    }

    /// Weights uniform in `+-sqrt(6 / (fan_in + fan_out))`, biases zero.
    pub fn new(dims: &[usize], seed: u64) -> Result<Self> {
        let mut m = Self::zeros(dims)?;
        let mut rng = RngStream::new(seed, 0);
        for layer in m.layers() {
            let limit = (6.0 / (layer.fan_in + layer.fan_out) as f64).sqrt();
            for p in &mut m.params[layer.w..layer.b] {
                *p = rng.uniform(-limit, limit);
            }
        }
        Ok(m)
    }

    pub fn from_params(dims: &[usize], params: Vec<f64>) -> Result<Self> {
        let mut m = Self::zeros(dims)?;
        if params.len() != m.params.len() {
            return Err(Error::DimensionMismatch {
                expected: m.params.len(),
                got: params.len(),
            });
        }
        m.params = params;
        Ok(m)
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn input_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn classes(&self) -> usize {
        *self.dims.last().unwrap()
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn layers(&self) -> Vec<Layer> {
        let mut offset = 0;
        self.dims
            .windows(2)
            .map(|w| {
                let l = Layer {
                    fan_in: w[0],
                    fan_out: w[1],
                    w: offset,
                    b: offset + w[0] * w[1],
                };
                offset = l.b + w[1];
                l
            })
            .collect()
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    fn check_label(&self, label: usize) -> Result<()> {
        if label >= self.classes() {
            return Err(invalid("label", format!("{label} out of range for {} classes", self.classes())));
        }
        Ok(())
    }

    fn affine(&self, layer: Layer, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        let w = &self.params[layer.w..layer.b];
        let b = &self.params[layer.b..layer.b + layer.fan_out];
        for o in 0..layer.fan_out {
            let row = &w[o * layer.fan_in..(o + 1) * layer.fan_in];
            let mut acc = b[o];
            for (wi, xi) in row.iter().zip(input) {
                acc += wi * xi;
            }
            out.push(acc);
        }
    }

    /// Every layer's activation, input first. Hidden layers are rectified;
    /// the last entry is the output distribution.
    fn activations(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let layers = self.layers();
        let mut acts = Vec::with_capacity(layers.len() + 1);
        acts.push(x.to_vec());
        for (k, &layer) in layers.iter().enumerate() {
            let mut z = Vec::with_capacity(layer.fan_out);
            self.affine(layer, &acts[k], &mut z);
            if k + 1 == layers.len() {
                softmax_in_place(&mut z);
            } else {
                for v in z.iter_mut() {
                    *v = v.max(0.0);
                }
            }
            acts.push(z);
        }
        acts
    }

    /// Soft class probabilities.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(self.activations(x).pop().unwrap())
    }

    /// `sum_k (f_k(x) - y_k)^2` against the one-hot encoding of `label`.
    /// Lies in `[0, 2)`.
    pub fn mse_loss(&self, x: &[f64], label: usize) -> Result<f64> {
        self.check_label(label)?;
        let f = self.forward(x)?;
        Ok(squared_error(&f, label))
    }

    /// Loss and its exact gradient with respect to every parameter.
    pub fn backprop(&self, x: &[f64], label: usize) -> Result<(f64, Vec<f64>)> {
        let mut grad = vec![0.0; self.params.len()];
        let loss = self.accumulate_gradient(x, label, 1.0, &mut grad)?;
        Ok((loss, grad))
    }

    /// Adds `scale * dL/dparams` into `grad` and returns the loss.
    pub(crate) fn accumulate_gradient(&self, x: &[f64], label: usize, scale: f64, grad: &mut [f64]) -> Result<f64> {
        self.check_input(x)?;
        self.check_label(label)?;
        let layers = self.layers();
        let acts = self.activations(x);
        let f = acts.last().unwrap();
        let loss = squared_error(f, label);

        // dL/df = 2 (f - y); through the softmax Jacobian
        let g: Vec<f64> = f
            .iter()
            .enumerate()
            .map(|(k, fk)| 2.0 * (fk - if k == label { 1.0 } else { 0.0 }))
            .collect();
        let fg: f64 = f.iter().zip(&g).map(|(a, b)| a * b).sum();
        let mut delta: Vec<f64> = f.iter().zip(&g).map(|(fk, gk)| fk * (gk - fg)).collect();

        for (k, &layer) in layers.iter().enumerate().rev() {
            let input = &acts[k];
            for o in 0..layer.fan_out {
                let d = scale * delta[o];
                let row = &mut grad[layer.w + o * layer.fan_in..layer.w + (o + 1) * layer.fan_in];
                for (gw, xi) in row.iter_mut().zip(input) {
                    *gw += d * xi;
                }
                grad[layer.b + o] += d;
            }
            if k == 0 {
                break;
            }
            let w = &self.params[layer.w..layer.b];
            let mut prev = vec![0.0; layer.fan_in];
            for o in 0..layer.fan_out {
                let row = &w[o * layer.fan_in..(o + 1) * layer.fan_in];
                for (p, wi) in prev.iter_mut().zip(row) {
                    *p += wi * delta[o];
                }
            }
            // rectifier derivative, zero at the kink
            for (p, a) in prev.iter_mut().zip(input) {
                if *a <= 0.0 {
                    *p = 0.0;
                }
            }
            delta = prev;
        }
        Ok(loss)
    }

    /// Index of the largest output probability, lowest index on ties.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        let f = self.forward(x)?;
        Ok(argmax(&f))
    }
}

pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn squared_error(f: &[f64], label: usize) -> f64 {
    f.iter()
        .enumerate()
        .map(|(k, fk)| {
            let y = if k == label { 1.0 } else { 0.0 };
            (fk - y) * (fk - y)
        })
        .sum()
}
