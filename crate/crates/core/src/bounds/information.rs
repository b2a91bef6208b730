//! Mutual-information caps on attacker success and on the generalization gap.

use crate::error::{check_probability, invalid, Result};
use crate::numerics::{binary_kl, golden_section, Mode, DEFAULT_TOL};

/// Largest success probability `p >= max_prior` compatible with
/// `d_KL(p || max_prior) <= mi_nats`.
///
/// The root is located by golden-section minimization of
/// `(d_KL(p || max_prior) - mi)^2` over `[max_prior, 1]`. The sub-prior
/// branch is never searched.
pub fn thm5_success_upper_bound(mi_nats: f64, max_prior: f64) -> Result<f64> {
    if !(mi_nats >= 0.0) {
        return Err(invalid("mi_nats", format!("must be nonnegative, got {mi_nats}")));
    }
    check_probability("max_prior", max_prior)?;
    if max_prior == 0.0 || max_prior == 1.0 {
        return Err(invalid("max_prior", "must lie strictly inside (0, 1)"));
    }
    if mi_nats == 0.0 {
        return Ok(max_prior);
    }
    if binary_kl(1.0, max_prior)? <= mi_nats {
        return Ok(1.0);
    }
    let best = golden_section(
        |p| {
            let k = binary_kl(p, max_prior).unwrap_or(f64::INFINITY);
            (k - mi_nats).powi(2)
        },
        max_prior,
        1.0,
        DEFAULT_TOL,
        Mode::Min,
    )?;
    Ok(best.x.clamp(max_prior, 1.0))
}

/// Fenchel-Legendre dual of the sub-Gaussian log-MGF envelope
/// `lambda^2 sigma^2 / 2`, i.e. `eps^2 / (2 sigma^2)`.
pub fn psi_star_subgaussian(eps: f64, sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(invalid("sigma2", format!("must be positive, got {sigma2}")));
    }
    if !(eps >= 0.0) {
        return Err(invalid("eps", format!("must be nonnegative, got {eps}")));
    }
    Ok(eps * eps / (2.0 * sigma2))
}

/// `min{1, (I(Z; theta) + 1) / (n K(eps))}`: tail probability of the
/// generalization gap exceeding `eps`.
pub fn thm5_gap_tail_bound(mi_z_theta_nats: f64, n: usize, k_eps: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n", "must be positive"));
    }
    if !(k_eps > 0.0) {
        return Err(invalid("k_eps", format!("must be positive, got {k_eps}")));
    }
    if !(mi_z_theta_nats >= 0.0) {
        return Err(invalid("mi_z_theta_nats", format!("must be nonnegative, got {mi_z_theta_nats}")));
    }
    Ok(((mi_z_theta_nats + 1.0) / (n as f64 * k_eps)).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent inverse: bisection on the monotone branch.
    fn bisect_inverse(mi: f64, q: f64) -> f64 {
        let (mut lo, mut hi) = (q, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if binary_kl(mid, q).unwrap() <= mi {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn examples() {
        assert_eq!(thm5_success_upper_bound(0.0, 0.5).unwrap(), 0.5);
        let p = thm5_success_upper_bound(0.10023, 0.5).unwrap();
        assert!((p - 0.720).abs() < 1e-3);
        assert!((p - bisect_inverse(0.10023, 0.5)).abs() < 1e-8);
        assert_eq!(thm5_success_upper_bound(10.0, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn input_validation() {
        assert!(thm5_success_upper_bound(-1.0, 0.5).is_err());
        assert!(thm5_success_upper_bound(0.1, 1.0).is_err());
        assert!(thm5_success_upper_bound(0.1, 0.0).is_err());
    }

    #[test]
    fn psi_star() {
        assert_eq!(psi_star_subgaussian(0.0, 3.0).unwrap(), 0.0);
        assert_eq!(psi_star_subgaussian(1.0, 1.0).unwrap(), 0.5);
        assert_eq!(psi_star_subgaussian(2.0, 1.0).unwrap(), 2.0);
        assert!(psi_star_subgaussian(1.0, 0.0).is_err());
        // sup over a grid of lambda of (lambda eps - lambda^2 s^2 / 2)
        let (eps, s2) = (0.7, 1.3);
        let sup = (0..100_000)
            .map(|k| k as f64 * 1e-4)
            .map(|l| l * eps - l * l * s2 / 2.0)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((sup - psi_star_subgaussian(eps, s2).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn gap_tail() {
        assert!((thm5_gap_tail_bound(1.0, 100, 0.5).unwrap() - 0.04).abs() < 1e-15);
        assert_eq!(thm5_gap_tail_bound(0.0, 1, 1.0).unwrap(), 1.0);
        assert!(thm5_gap_tail_bound(1.0, 0, 1.0).is_err());
        assert!(thm5_gap_tail_bound(1.0, 10, 0.0).is_err());
        let mut prev = 1.0;
        for n in [10, 100, 1000, 10_000, 100_000] {
            let b = thm5_gap_tail_bound(3.0, n, 0.2).unwrap();
            assert!(b <= prev);
            prev = b;
        }
        assert!(prev < 1e-3);
    }

    proptest! {
        #[test]
        fn matches_bisection(mi in 1e-4f64..0.6, q in 0.5f64..0.95) {
            let p = thm5_success_upper_bound(mi, q).unwrap();
            let oracle = if binary_kl(1.0, q).unwrap() <= mi { 1.0 } else { bisect_inverse(mi, q) };
            prop_assert!((p - oracle).abs() < 1e-7, "{} vs {}", p, oracle);
        }

        #[test]
        fn nondecreasing_in_mi(a in 0.0f64..2.0, b in 0.0f64..2.0, q in 0.5f64..0.95) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let pl = thm5_success_upper_bound(lo, q).unwrap();
            let ph = thm5_success_upper_bound(hi, q).unwrap();
            // golden-section resolution
            prop_assert!(ph >= pl - 2e-9);
        }
    }
}
