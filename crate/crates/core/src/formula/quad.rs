use crate::error::{Error, Result};

/// Integral with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson quadrature of `f` on `[a, b]` with absolute tolerance
/// `tol`; the error estimate is the sum of local Richardson estimates.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut error = 0.0;
    let value = recurse(f, a, b, fa, fm, fb, whole, tol.max(f64::MIN_POSITIVE), MAX_DEPTH, &mut error)?;
    Ok(QuadResult { value, error })
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    error: &mut f64,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if !diff.is_finite() {
        return Err(Error::NonConvergent(format!("non-finite integrand on [{a}, {b}]")));
    }
    if diff.abs() <= 15.0 * tol {
        *error += diff.abs() / 15.0;
        return Ok(left + right + diff / 15.0);
    }
    if depth == 0 {
        return Err(Error::NonConvergent(format!("adaptive Simpson reached its depth limit on [{a}, {b}]")));
    }
    let l = recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, error)?;
    let r = recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, error)?;
    Ok(l + r)
}
