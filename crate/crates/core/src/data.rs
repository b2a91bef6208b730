//! Labeled datasets and the synthetic generators used by the attack games.

use crate::error::{invalid, Error, Result};
use crate::numerics::{derive_seed, RngStream};

/// Dense labeled samples, features stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dim: usize,
    classes: usize,
    features: Vec<f64>,
    labels: Vec<usize>,
}

impl Dataset {
    pub fn new(dim: usize, classes: usize, features: Vec<f64>, labels: Vec<usize>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim", "must be positive"));
        }
        if features.len() != dim * labels.len() {
            return Err(Error::DimensionMismatch {
                expected: dim * labels.len(),
                got: features.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= classes) {
            return Err(invalid("labels", format!("label {bad} out of range for {classes} classes")));
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(invalid("features", "non-finite value"));
        }
        Ok(Self {
            dim,
            classes,
            features,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn features(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Copies the listed rows, in the given order.
    pub fn subset(&self, rows: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(rows.len() * self.dim);
        for &i in rows {
            features.extend_from_slice(self.features(i));
        }
        Dataset {
            dim: self.dim,
            classes: self.classes,
            features,
            labels: rows.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

/// Samples whose model input is the non-sensitive features followed by a
/// one-hot encoding of a sensitive attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeDataset {
    public: Dataset,
    sensitive: Vec<usize>,
    candidate_count: usize,
}

impl AttributeDataset {
    pub fn new(public: Dataset, sensitive: Vec<usize>, candidate_count: usize) -> Result<Self> {
        if sensitive.len() != public.len() {
            return Err(Error::DimensionMismatch {
                expected: public.len(),
                got: sensitive.len(),
            });
        }
        if candidate_count == 0 {
            return Err(invalid("candidate_count", "must be positive"));
        }
        if let Some(&bad) = sensitive.iter().find(|&&t| t >= candidate_count) {
            return Err(invalid("sensitive", format!("value {bad} out of range for {candidate_count} candidates")));
        }
        Ok(Self {
            public,
            sensitive,
            candidate_count,
        })
    }

    pub fn len(&self) -> usize {
        self.public.len()
    }

    pub fn is_empty(&self) -> bool {
        self.public.is_empty()
    }

    /// Non-sensitive features and labels.
    pub fn public(&self) -> &Dataset {
        &self.public
    }

    pub fn sensitive(&self, i: usize) -> usize {
        self.sensitive[i]
    }

    pub fn candidate_count(&self) -> usize {
        self.candidate_count
    }

    /// Width of the model input.
    pub fn input_dim(&self) -> usize {
        self.public.dim() + self.candidate_count
    }

    /// `v` followed by the one-hot encoding of `t`.
    pub fn encode(&self, v: &[f64], t: usize) -> Vec<f64> {
        encode_attribute(v, t, self.candidate_count)
    }

    pub fn subset(&self, rows: &[usize]) -> AttributeDataset {
        AttributeDataset {
            public: self.public.subset(rows),
            sensitive: rows.iter().map(|&i| self.sensitive[i]).collect(),
            candidate_count: self.candidate_count,
        }
    }

    /// The dataset a model is trained on, with the sensitive attribute
    /// appended to every feature row.
    pub fn model_dataset(&self) -> Dataset {
        let dim = self.input_dim();
        let mut features = Vec::with_capacity(self.len() * dim);
        for i in 0..self.len() {
            features.extend(self.encode(self.public.features(i), self.sensitive[i]));
        }
        Dataset {
            dim,
            classes: self.public.classes(),
            features,
            labels: self.public.labels.clone(),
        }
    }
}

pub fn encode_attribute(v: &[f64], t: usize, candidates: usize) -> Vec<f64> {
    let mut x = Vec::with_capacity(v.len() + candidates);
    x.extend_from_slice(v);
    x.extend((0..candidates).map(|k| if k == t { 1.0 } else { 0.0 }));
    x
}

/// Two isotropic Gaussian classes in `dim` dimensions whose means sit
/// `separation` apart along the all-ones direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlobConfig {
    pub dim: usize,
    pub separation: f64,
    pub noise: f64,
}

impl Default for BlobConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            separation: 2.0,
            noise: 1.0,
        }
    }
}

/// `n` samples with equiprobable labels, drawn from stream `(seed, 0)`.
pub fn blobs(cfg: &BlobConfig, n: usize, seed: u64) -> Result<Dataset> {
    if cfg.dim == 0 || !(cfg.noise > 0.0) || !cfg.separation.is_finite() {
        return Err(invalid("blobs", format!("bad configuration {cfg:?}")));
    }
    let mut rng = RngStream::new(seed, 0);
    let offset = 0.5 * cfg.separation / (cfg.dim as f64).sqrt();
    let mut features = Vec::with_capacity(n * cfg.dim);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let label = rng.index(2);
        let sign = if label == 1 { 1.0 } else { -1.0 };
        for _ in 0..cfg.dim {
            features.push(rng.normal(sign * offset, cfg.noise));
        }
        labels.push(label);
    }
    Dataset::new(cfg.dim, 2, features, labels)
}

/// Synthetic handwriting corpus: every writer distorts ten digit templates
/// in a consistent personal style. A sample's features are the 32 resampled
/// pen positions (x coordinates, then y), the stroke count and the total pen
/// length, each scaled to roughly `[0, 1]`. The writer is the sensitive
/// attribute and the digit is the label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenDigitsConfig {
    pub writers: usize,
    pub samples_per_digit: usize,
    /// Scales every writer-specific distortion. Zero makes all writers
    /// identical.
    pub style_amplitude: f64,
    /// Standard deviation of per-sample pen jitter.
    pub jitter: f64,
}

pub const PEN_POINTS: usize = 32;
pub const PEN_DIGITS: usize = 10;
pub const PEN_FEATURES: usize = 2 * PEN_POINTS + 2;

impl Default for PenDigitsConfig {
    fn default() -> Self {
        Self {
            writers: 44,
            samples_per_digit: 25,
            style_amplitude: 1.0,
            jitter: 0.03,
        }
    }
}

/// Control polylines per digit on the unit square, one inner list per
/// stroke.
fn digit_template(digit: usize) -> Vec<Vec<(f64, f64)>> {
    let ring = |cx: f64, cy: f64, rx: f64, ry: f64, start: f64, sweep: f64, k: usize| -> Vec<(f64, f64)> {
        (0..=k)
            .map(|i| {
                let a = start + sweep * i as f64 / k as f64;
                (cx + rx * a.cos(), cy + ry * a.sin())
            })
            .collect()
    };
    use std::f64::consts::PI;
    match digit {
        0 => vec![ring(0.5, 0.5, 0.3, 0.45, PI / 2.0, 2.0 * PI, 16)],
        1 => vec![vec![(0.3, 0.75), (0.55, 0.95), (0.55, 0.05)]],
        2 => {
            let mut s = ring(0.5, 0.7, 0.3, 0.25, PI * 0.9, -PI * 1.15, 8);
            s.extend([(0.2, 0.05), (0.85, 0.05)]);
            vec![s]
        }
        3 => {
            let mut s = ring(0.5, 0.72, 0.28, 0.22, PI * 0.8, -PI * 1.3, 8);
            s.extend(ring(0.5, 0.28, 0.3, 0.25, PI * 0.5, -PI * 1.3, 8));
            vec![s]
        }
        4 => vec![
            vec![(0.6, 0.95), (0.15, 0.35), (0.85, 0.35)],
            vec![(0.65, 0.6), (0.65, 0.05)],
        ],
        5 => {
            let mut s = vec![(0.25, 0.95), (0.25, 0.55)];
            s.extend(ring(0.48, 0.32, 0.3, 0.25, PI * 0.75, -PI * 1.6, 10));
            vec![s, vec![(0.25, 0.95), (0.8, 0.95)]]
        }
        6 => {
            let mut s = vec![(0.7, 0.95), (0.35, 0.6)];
            s.extend(ring(0.5, 0.3, 0.28, 0.25, PI, 2.0 * PI, 12));
            vec![s]
        }
        7 => vec![vec![(0.15, 0.95), (0.85, 0.95), (0.4, 0.05)]],
        8 => {
            let mut s = ring(0.5, 0.73, 0.22, 0.22, -PI / 2.0, 2.0 * PI, 10);
            s.extend(ring(0.5, 0.27, 0.28, 0.24, PI / 2.0, -2.0 * PI, 10));
            vec![s]
        }
        9 => {
            let mut s = ring(0.5, 0.7, 0.25, 0.22, 0.0, 2.0 * PI, 12);
            s.extend([(0.75, 0.4), (0.6, 0.05)]);
            vec![s]
        }
        _ => unreachable!("digit out of range"),
    }
}

fn arc_length(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt())
        .sum()
}

/// `k` points spaced evenly by arc length along the concatenated strokes.
fn resample(strokes: &[Vec<(f64, f64)>], k: usize) -> Vec<(f64, f64)> {
    let path: Vec<(f64, f64)> = strokes.iter().flatten().copied().collect();
    let total = arc_length(&path);
    let mut out = Vec::with_capacity(k);
    let mut seg = 0;
    let mut walked = 0.0;
    for i in 0..k {
        let target = total * i as f64 / (k - 1) as f64;
        loop {
            let (a, b) = (path[seg], path[seg + 1]);
            let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
            if walked + len >= target || seg + 2 == path.len() {
                let u = if len > 0.0 { ((target - walked) / len).clamp(0.0, 1.0) } else { 0.0 };
                out.push((a.0 + u * (b.0 - a.0), a.1 + u * (b.1 - a.1)));
                break;
            }
            walked += len;
            seg += 1;
        }
    }
    out
}

/// Per-writer distortion: an affine map about the centre plus a smooth
/// displacement field.
#[derive(Debug, Clone)]
struct WriterStyle {
    affine: [[f64; 2]; 2],
    shift: (f64, f64),
    wave: [(f64, f64, f64); 3],
    extra_stroke: [bool; PEN_DIGITS],
}

impl WriterStyle {
    fn draw(amplitude: f64, rng: &mut RngStream) -> Self {
        let angle = rng.normal(0.0, 0.15 * amplitude);
        let slant = rng.normal(0.0, 0.25 * amplitude);
        let sx = 1.0 + rng.normal(0.0, 0.12 * amplitude);
        let sy = 1.0 + rng.normal(0.0, 0.12 * amplitude);
        let (c, s) = (angle.cos(), angle.sin());
        let affine = [[sx * c, sx * (slant * c - s)], [sy * s, sy * (slant * s + c)]];
        let shift = (rng.normal(0.0, 0.05 * amplitude), rng.normal(0.0, 0.05 * amplitude));
        let mut wave = [(0.0, 0.0, 0.0); 3];
        for (k, w) in wave.iter_mut().enumerate() {
            let scale = 0.05 * amplitude / (k + 1) as f64;
            *w = (rng.normal(0.0, scale), rng.normal(0.0, scale), rng.uniform(0.0, std::f64::consts::TAU));
        }
        let mut extra_stroke = [false; PEN_DIGITS];
        for e in extra_stroke.iter_mut() {
            *e = amplitude > 0.0 && rng.bernoulli(0.2);
        }
        Self {
            affine,
            shift,
            wave,
            extra_stroke,
        }
    }

    fn apply(&self, p: (f64, f64), along: f64) -> (f64, f64) {
        let (x, y) = (p.0 - 0.5, p.1 - 0.5);
        let mut qx = self.affine[0][0] * x + self.affine[0][1] * y + 0.5 + self.shift.0;
        let mut qy = self.affine[1][0] * x + self.affine[1][1] * y + 0.5 + self.shift.1;
        for (k, &(ax, ay, phase)) in self.wave.iter().enumerate() {
            let arg = std::f64::consts::PI * (k + 1) as f64 * along + phase;
            qx += ax * arg.sin();
            qy += ay * arg.cos();
        }
        (qx, qy)
    }
}

/// Draws the full corpus: `writers * 10 * samples_per_digit` samples in
/// writer-major order. Writer styles come from `derive_seed(seed, writer)`,
/// so adding samples never changes an existing writer.
pub fn pen_digits(cfg: &PenDigitsConfig, seed: u64) -> Result<AttributeDataset> {
    if cfg.writers == 0 || cfg.samples_per_digit == 0 {
        return Err(invalid("pen_digits", "writers and samples_per_digit must be positive"));
    }
    if !(cfg.style_amplitude >= 0.0) || !(cfg.jitter >= 0.0) {
        return Err(invalid("pen_digits", "amplitudes must be nonnegative"));
    }
    let templates: Vec<Vec<Vec<(f64, f64)>>> = (0..PEN_DIGITS).map(digit_template).collect();
    let n = cfg.writers * PEN_DIGITS * cfg.samples_per_digit;
    let mut features = Vec::with_capacity(n * PEN_FEATURES);
    let mut labels = Vec::with_capacity(n);
    let mut sensitive = Vec::with_capacity(n);
    for writer in 0..cfg.writers {
        let mut style_rng = RngStream::new(derive_seed(seed, writer as u64), 0);
        let style = WriterStyle::draw(cfg.style_amplitude, &mut style_rng);
        let mut rng = RngStream::new(derive_seed(seed, writer as u64), 1);
        for (digit, template) in templates.iter().enumerate() {
            let base = resample(template, PEN_POINTS);
            for _ in 0..cfg.samples_per_digit {
                let wobble = rng.normal(0.0, 0.03);
                let (c, s) = (wobble.cos(), wobble.sin());
                let pts: Vec<(f64, f64)> = base
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| {
                        let (x, y) = style.apply(p, i as f64 / (PEN_POINTS - 1) as f64);
                        let (x, y) = (x - 0.5, y - 0.5);
                        (
                            c * x - s * y + 0.5 + rng.normal(0.0, cfg.jitter),
                            s * x + c * y + 0.5 + rng.normal(0.0, cfg.jitter),
                        )
                    })
                    .collect();
                features.extend(pts.iter().map(|p| p.0));
                features.extend(pts.iter().map(|p| p.1));
                let strokes = template.len() + usize::from(style.extra_stroke[digit]);
                features.push(strokes as f64 / 3.0);
                features.push((arc_length(&pts) / 6.0).min(1.0));
                labels.push(digit);
                sensitive.push(writer);
            }
        }
    }
    let public = Dataset::new(PEN_FEATURES, PEN_DIGITS, features, labels)?;
    AttributeDataset::new(public, sensitive, cfg.writers)
}
