use leakage_core::bounds::{bayes_success_finite, exhaustive_strategy_success, region_error_sum, strategy_success, tv_tradeoff_finite, FiniteJoint};
use leakage_core::numerics::RngStream;

fn random_joint(rng: &mut RngStream) -> FiniteJoint {
    let (a, b, c) = (1 + rng.index(3), 1 + rng.index(3), 1 + rng.index(3));
    let w = (0..a * b * c).map(|_| rng.uniform(0.0, 1.0)).collect();
    FiniteJoint::from_weights(a, b, c, w).unwrap()
}

#[test]
fn bayes_rule_is_the_best_deterministic_strategy() {
    let mut rng = RngStream::new(11, 0);
    for _ in 0..300 {
        let j = random_joint(&mut rng);
        let bayes = bayes_success_finite(&j);
        let best = exhaustive_strategy_success(&j).unwrap();
        assert!((bayes - best).abs() <= 1e-12, "{bayes} vs {best}");
    }
}

#[test]
fn randomised_strategies_do_not_beat_bayes() {
    // a randomised strategy is a mixture of deterministic ones, so its
    // success is an average of deterministic successes
    let mut rng = RngStream::new(12, 0);
    for _ in 0..200 {
        let j = random_joint(&mut rng);
        let (a, b, c) = j.dims();
        let bayes = bayes_success_finite(&j);
        let mut mixed = 0.0;
        let mut weight = 0.0;
        for _ in 0..5 {
            let s: Vec<usize> = (0..a * b).map(|_| rng.index(c)).collect();
            let w = rng.uniform(0.0, 1.0);
            mixed += w * strategy_success(&j, &s).unwrap();
            weight += w;
        }
        assert!(mixed / weight <= bayes + 1e-12);
    }
}

fn random_pair(rng: &mut RngStream, k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut draw = || {
        let w: Vec<f64> = (0..k).map(|_| rng.uniform(0.0, 1.0)).collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect::<Vec<_>>()
    };
    (draw(), draw())
}

#[test]
fn likelihood_region_attains_one_minus_tv() {
    let mut rng = RngStream::new(13, 0);
    for _ in 0..500 {
        let k = 1 + rng.index(40);
        let (p1, p0) = random_pair(&mut rng, k);
        let (tv, err) = tv_tradeoff_finite(&p1, &p0).unwrap();
        assert!((err - (1.0 - tv)).abs() <= 1e-12);
    }
}

#[test]
fn no_region_beats_the_likelihood_region() {
    let mut rng = RngStream::new(14, 0);
    for _ in 0..40 {
        let k = 1 + rng.index(10);
        let (p1, p0) = random_pair(&mut rng, k);
        let (_, best) = tv_tradeoff_finite(&p1, &p0).unwrap();
        for mask in 0u32..(1 << k) {
            let region: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
            assert!(region_error_sum(&p1, &p0, &region).unwrap() >= best - 1e-12);
        }
    }
}
