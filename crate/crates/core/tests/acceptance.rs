//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use leakage_core::attacks::{counterexample_game, run_attr_sweep, run_mia_sweep, thm2_lb_for_gap, AttrSweepConfig, CounterexampleConfig, MiaSweepConfig, SweepPoint};
use leakage_core::bounds::{bayes_success_finite, c_factor, exhaustive_strategy_success, region_error_sum, thm5_success_upper_bound, tv_tradeoff_finite, FiniteJoint, TailFamily};
use leakage_core::nn::Mlp;
use leakage_core::numerics::{derive_seed, map_indexed, mean_and_stderr, Execution, RngStream};
use leakage_core::regress::{estimate_success_rate, gap_closed_form, mi_conditional, residual_variances, run_trial, sample_risk_pair, success_bounds, RegressionDesign};
use leakage_core::Result;
use nalgebra::{DMatrix, DVector};

const SEED: u64 = 20_240_601;

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn gaussian_sandwich() -> Outcome {
    let grid = [50, 100, 200, 500, 1000, 2000, 5000, 10_000];
    let mut ok = true;
    let mut notes = Vec::new();
    let mut first = f64::NAN;
    let mut last = (f64::NAN, f64::NAN);
    for (g, &n) in grid.iter().enumerate() {
        let design = RegressionDesign::random(20, n, 1.0, &mut RngStream::new(derive_seed(SEED, g as u64), u64::MAX))?;
        let (rate, se) = estimate_success_rate(&design, 10_000, derive_seed(SEED, 100 + g as u64))?;
        let report = success_bounds(&design, 0.5)?;
        let (lb, ub) = (report.lower().unwrap(), report.ub_thm5.unwrap());
        if !(lb - 3.0 * se <= rate && rate <= ub + 3.0 * se) {
            ok = false;
        }
        notes.push(format!("n={n}: {lb:.4} <= {rate:.4} <= {ub:.4}"));
        if n == 50 {
            first = rate;
        }
        last = (rate, se);
    }
    ok &= first > 0.55;
    ok &= (last.0 - 0.5).abs() <= 3.0 * last.1;
    Ok((ok, notes.join("; ")))
}

fn closed_form_gap() -> Outcome {
    let design = RegressionDesign::random(20, 100, 1.0, &mut RngStream::new(SEED, u64::MAX))?;
    let gaps = map_indexed(Execution::default(), 10_000, |i| sample_risk_pair(&design, &mut RngStream::new(SEED ^ 0x5a5a, i)).map(|r| r.gap))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let (mean, se) = mean_and_stderr(&gaps);
    let target = gap_closed_form(&design);
    Ok(((mean - target).abs() <= 5.0 * se, format!("mean gap {mean:.5} (se {se:.5}), closed form {target}")))
}

/// Sample variance and its standard error from the fourth central moment.
fn variance_with_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let m2 = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = v.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    (m2 * n / (n - 1.0), ((m4 - m2 * m2) / n).sqrt())
}

fn variance_identities() -> Outcome {
    let design = RegressionDesign::random(20, 100, 1.0, &mut RngStream::new(SEED, u64::MAX))?;
    let records = map_indexed(Execution::default(), 100_000, |i| run_trial(&design, &mut RngStream::new(SEED ^ 0xc3c3, i)).map(|r| (r.t, r.loss_r)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let pick = |t: bool| records.iter().filter(|r| r.0 == t).map(|r| r.1).collect::<Vec<_>>();
    let (v0, se0) = variance_with_se(&pick(false));
    let (v1, se1) = variance_with_se(&pick(true));
    let (e0, e1) = residual_variances(&design);
    let ok = (v0 - e0).abs() <= 3.0 * se0 && (v1 - e1).abs() <= 3.0 * se1;
    Ok((ok, format!("Var[R|T=0] = {v0:.4} +- {se0:.4} (want {e0}), Var[R|T=1] = {v1:.4} +- {se1:.4} (want {e1})")))
}

fn bayes_exactness() -> Outcome {
    let mut rng = RngStream::new(SEED, 4);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (a, b, c) = (1 + rng.index(3), 1 + rng.index(3), 1 + rng.index(3));
        let w = (0..a * b * c).map(|_| rng.uniform(0.0, 1.0)).collect();
        let j = FiniteJoint::from_weights(a, b, c, w)?;
        worst = worst.max((bayes_success_finite(&j) - exhaustive_strategy_success(&j)?).abs());
    }
    Ok((worst <= 1e-12, format!("max |bayes - exhaustive| = {worst:e} over 1000 instances")))
}

fn tv_identity() -> Outcome {
    let mut rng = RngStream::new(SEED, 5);
    let mut worst = 0.0f64;
    let mut beaten = 0;
    for _ in 0..1000 {
        let k = 1 + rng.index(12);
        let mut draw = || {
            let w: Vec<f64> = (0..k).map(|_| rng.uniform(0.0, 1.0)).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| x / s).collect::<Vec<_>>()
        };
        let (p1, p0) = (draw(), draw());
        let (tv, err) = tv_tradeoff_finite(&p1, &p0)?;
        worst = worst.max((err - (1.0 - tv)).abs());
        for mask in 0u32..(1 << k) {
            let region: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
            if region_error_sum(&p1, &p0, &region)? < err - 1e-12 {
                beaten += 1;
            }
        }
    }
    Ok((worst <= 1e-12 && beaten == 0, format!("max |err - (1 - TV)| = {worst:e}, regions beating it: {beaten}")))
}

fn counterexample() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (k, d) in [0.01, 0.1, 0.5].into_iter().enumerate() {
        let cfg = CounterexampleConfig::new(d, d / 2.0, 1.0)?;
        let out = counterexample_game(&cfg, 100_000, derive_seed(SEED, 600 + k as u64))?;
        ok &= out.attack_success == 1.0 && (out.empirical_gap - d).abs() <= 3.0 * out.gap_stderr;
        notes.push(format!("D={d}: success {}, gap {:.5} +- {:.5}", out.attack_success, out.empirical_gap, out.gap_stderr));
    }
    Ok((ok, notes.join("; ")))
}

fn gradient_oracle() -> Outcome {
    let mut rng = RngStream::new(SEED, 7);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let mut dims = vec![1 + rng.index(4)];
        for _ in 0..rng.index(3) {
            dims.push(1 + rng.index(5));
        }
        dims.push(2 + rng.index(3));
        let mut m = Mlp::new(&dims, rng.next_u64())?;
        for p in m.params_mut() {
            *p += rng.normal(0.0, 0.3);
        }
        let x: Vec<f64> = (0..dims[0]).map(|_| rng.normal(0.0, 1.0)).collect();
        let y = rng.index(*dims.last().unwrap());
        let (_, grad) = m.backprop(&x, y)?;
        for k in 0..m.param_count() {
            let mut up = m.clone();
            up.params_mut()[k] += h;
            let mut down = m.clone();
            down.params_mut()[k] -= h;
            let fd = (up.mse_loss(&x, y)? - down.mse_loss(&x, y)?) / (2.0 * h);
            // relative error, with an absolute floor for vanishing coordinates
            worst = worst.max((grad[k] - fd).abs() / grad[k].abs().max(fd.abs()).max(1e-4));
        }
    }
    Ok((worst < 1e-5, format!("max relative error {worst:e} over 100 models")))
}

fn point<'a>(rows: &'a [SweepPoint], n: usize, strategy: &str) -> &'a SweepPoint {
    rows.iter().find(|r| r.n == n && r.strategy == strategy).expect("grid point present")
}

fn mia_trend() -> Outcome {
    let cfg = MiaSweepConfig {
        seed: SEED,
        ..MiaSweepConfig::default()
    };
    let rows = run_mia_sweep(&cfg, Execution::default())?;
    let small = point(&rows, 50, "likelihood");
    let large = point(&rows, 4000, "likelihood");
    let mut ok = small.success_rate > 0.5 + 3.0 * small.stderr && (large.success_rate - 0.5).abs() <= 5.0 * large.stderr;
    let mut notes = Vec::new();
    for &n in &cfg.n_grid {
        let p = point(&rows, n, "likelihood");
        let lb = p.lb.unwrap();
        ok &= lb <= p.success_rate + 3.0 * p.stderr;
        notes.push(format!("n={n}: sr {:.4} +- {:.4}, lb {lb:.4}", p.success_rate, p.stderr));
    }
    Ok((ok, notes.join("; ")))
}

fn attribute_inference() -> Outcome {
    let cfg = AttrSweepConfig {
        n_grid: vec![100, 1000, 4000, 8000],
        seed: SEED,
        ..AttrSweepConfig::default()
    };
    let rows = run_attr_sweep(&cfg, Execution::default())?;
    let prior = 1.0 / cfg.pen.writers as f64;
    let best = |n: usize| {
        rows.iter()
            .filter(|r| r.n == n)
            .max_by(|a, b| a.success_rate.total_cmp(&b.success_rate))
            .unwrap()
    };
    let (lo, hi) = (cfg.n_grid[0], *cfg.n_grid.last().unwrap());
    let (b_lo, b_hi) = (best(lo), best(hi));
    let mut ok = b_lo.success_rate >= 5.0 * prior && b_hi.success_rate + 3.0 * b_hi.stderr >= 1.5 * prior;
    let mut notes = vec![
        format!("n={lo}: best {} {:.4}", b_lo.strategy, b_lo.success_rate),
        format!("n={hi}: best {} {:.4}", b_hi.strategy, b_hi.success_rate),
    ];
    for &n in &cfg.n_grid {
        let (g, l) = (point(&rows, n, "gradient"), point(&rows, n, "loss"));
        ok &= g.success_rate >= l.success_rate - 3.0 * l.stderr;
        notes.push(format!("n={n}: gradient {:.4} vs loss {:.4}", g.success_rate, l.success_rate));
    }
    notes.push(format!("prior {prior:.4}"));
    Ok((ok, notes.join("; ")))
}

fn bound_regressions() -> Outcome {
    let mut checks = vec![
        ("bounded-loss bound at gap 0.4", thm2_lb_for_gap(0.4, 0.5)?, 0.55, 1e-12),
        ("C exponential", c_factor(TailFamily::Exponential, 1.0, 0.5), 0.73576, 1e-5),
        ("C sub-gaussian", c_factor(TailFamily::SubGaussian, 1.3, 1.69), 1.21306, 1e-5),
        ("KL inversion", thm5_success_upper_bound(0.10023, 0.5)?, 0.720, 1e-3),
    ];
    let two = RegressionDesign::new(DMatrix::from_row_slice(1, 2, &[1.0, 1.0]), DVector::zeros(1), 1.0)?;
    checks.push(("MI", mi_conditional(&two, 0.5)?, 0.17329, 1e-5));
    let lab = RegressionDesign::random(20, 100, 1.0, &mut RngStream::new(SEED, u64::MAX))?;
    let (v0, v1) = residual_variances(&lab);
    checks.push(("gap", gap_closed_form(&lab), 0.4, 1e-12));
    checks.push(("Var[R|T=0]", v0, 1.2, 1e-12));
    checks.push(("Var[R|T=1]", v1, 0.8, 1e-12));
    let mut ok = true;
    let notes: Vec<String> = checks
        .into_iter()
        .map(|(name, got, want, tol)| {
            ok &= (got - want).abs() <= tol;
            format!("{name} {got:.6}")
        })
        .collect();
    Ok((ok, notes.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("gaussian lab success sandwich", gaussian_sandwich),
        ("closed-form generalization gap", closed_form_gap),
        ("residual variance identities", variance_identities),
        ("bayes attacker exactness", bayes_exactness),
        ("total variation tradeoff", tv_identity),
        ("small gap, perfect attack", counterexample),
        ("backprop vs finite differences", gradient_oracle),
        ("membership inference trend", mia_trend),
        ("attribute inference", attribute_inference),
        ("bound regressions", bound_regressions),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "{} criterion {:>2} {name} ({:.1}s): {detail}",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
