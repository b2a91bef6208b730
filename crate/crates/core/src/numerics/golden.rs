use crate::error::{invalid, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 200;

/// 1/phi
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
    /// False when the iteration cap was hit before the bracket shrank to `tol`.
    pub converged: bool,
}

/// Golden-section search on `[lo, hi]` with the default iteration cap.
pub fn golden_section<F>(f: F, lo: f64, hi: f64, tol: f64, mode: Mode) -> Result<Extremum>
where
    F: FnMut(f64) -> f64,
{
    golden_section_with(f, lo, hi, tol, mode, DEFAULT_MAX_ITER)
}

/// Golden-section search for the extremum of a unimodal `f` on `[lo, hi]`.
///
/// Each iteration shrinks the bracket by 1/phi and reuses one interior
/// evaluation. Stops once the bracket is no wider than `tol` and returns
/// its midpoint, so the returned `x` is within `tol` of the optimum.
pub fn golden_section_with<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    mode: Mode,
    max_iter: usize,
) -> Result<Extremum>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid("lo/hi", format!("need finite lo < hi, got [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("must be positive, got {tol}")));
    }
    let sign = match mode {
        Mode::Min => 1.0,
        Mode::Max => -1.0,
    };
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_nan() {
            Err(Error::NanObjective(x))
        } else {
            Ok(sign * v)
        }
    };

    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    let mut iterations = 0;
    while b - a > tol && iterations < max_iter {
        iterations += 1;
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
    }
    let converged = b - a <= tol;
    let x = 0.5 * (a + b);
    let value = sign * eval(x)?;
    Ok(Extremum {
        x,
        value,
        iterations,
        converged,
    })
}
