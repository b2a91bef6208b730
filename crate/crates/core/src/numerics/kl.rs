use crate::error::{check_probability, Result};

/// `a * ln(a / b)` with `0 * ln 0 = 0`.
fn xlogy_ratio(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else if b == 0.0 {
        f64::INFINITY
    } else {
        a * (a / b).ln()
    }
}

/// KL divergence in nats between Bernoulli(p) and Bernoulli(q).
///
/// Infinite when `q` is 0 or 1 and `p` puts mass where `q` has none.
pub fn binary_kl(p: f64, q: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    Ok(xlogy_ratio(p, q) + xlogy_ratio(1.0 - p, 1.0 - q))
}

/// Binary entropy in nats.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_probability("p", p)?;
    let h = |x: f64| if x == 0.0 { 0.0 } else { -x * x.ln() };
    Ok(h(p) + h(1.0 - p))
}
