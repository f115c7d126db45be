use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{real_pow, ComplexSum};
use crate::oracle::enumerate::next_level_weighted;
use crate::spray::{FractalString, SelfSimilarSystem, StringSource};

/// `|1 - phi(s)|` below this counts as a pole.
pub const POLE_TOL: f64 = 1e-13;
/// Required distance of `Re s` to the right of the abscissa for series
/// evaluation.
pub const SERIES_MARGIN: f64 = 1e-3;
/// Largest number of distinct scale values kept per level.
pub(crate) const LEVEL_LIMIT: usize = 1_000_000;

/// `zeta_L(s) = 1 / (1 - sum r_n^s)`, the meromorphic continuation.
pub fn zeta_eval(system: &SelfSimilarSystem, s: Complex64) -> Result<Complex64> {
    let den = Complex64::new(1.0, 0.0) - system.phi(s);
    if den.norm() < POLE_TOL {
        return Err(Error::AtPole { s });
    }
    Ok(den.inv())
}

/// Partial sum of `sum_j l_j^s` with a certified bound on the omitted part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub remainder_bound: f64,
}

/// `sum_j l_j^s` by direct summation, with remainder at most
/// `rel_tol * |value|`.
pub fn zeta_series_eval(string: &FractalString, s: Complex64, rel_tol: f64) -> Result<Complex64> {
    let v = zeta_series_bounded(string, s, rel_tol)?;
    if v.remainder_bound > rel_tol * v.value.norm() {
        return Err(Error::NonConvergent(format!(
            "series remainder {:.3e} exceeds {:.3e} of |value| {:.3e}",
            v.remainder_bound,
            rel_tol,
            v.value.norm()
        )));
    }
    Ok(v.value)
}

/// As [`zeta_series_eval`] but returning the remainder bound instead of
/// failing when it is too large.
pub fn zeta_series_bounded(string: &FractalString, s: Complex64, rel_tol: f64) -> Result<SeriesValue> {
    match string.source() {
        StringSource::Explicit => {
            let mut acc = ComplexSum::new();
            for &(l, c) in string.scales().entries() {
                acc.add(real_pow(l, s) * c as f64);
            }
            Ok(SeriesValue { value: acc.value(), remainder_bound: 0.0 })
        }
        StringSource::SelfSimilar(sys) => self_similar_series(sys, s, rel_tol),
        StringSource::Apollonian { zeta_at_two, .. } => {
            if s.re < 2.0 {
                return Err(Error::TailUnavailable);
            }
            let entries = string.scales().entries();
            let mut acc = ComplexSum::new();
            let mut squares = 0.0;
            for &(l, c) in entries {
                acc.add(real_pow(l, s) * c as f64);
                squares += l * l * c as f64;
            }
            // every omitted scale lies below the smallest enumerated one
            let l_min = entries.last().map(|e| e.0).unwrap_or(1.0);
            let missing = (zeta_at_two - squares).max(0.0);
            Ok(SeriesValue { value: acc.value(), remainder_bound: l_min.powf(s.re - 2.0) * missing })
        }
    }
}

fn self_similar_series(sys: &SelfSimilarSystem, s: Complex64, rel_tol: f64) -> Result<SeriesValue> {
    let d = sys.dimension();
    if s.re <= d + SERIES_MARGIN {
        return Err(Error::AbscissaViolation { re: s.re, abscissa: d, margin: SERIES_MARGIN });
    }
    let q = sys.phi_real(s.re);
    let mut level: Vec<(f64, f64)> = vec![(1.0, 1.0)];
    let mut acc = ComplexSum::new();
    let mut qm = 1.0; // q^m
    loop {
        for &(l, c) in &level {
            acc.add(real_pow(l, s) * c);
        }
        qm *= q;
        let tail = qm / (1.0 - q);
        let value = acc.value();
        if tail <= rel_tol * value.norm() || qm == 0.0 {
            return Ok(SeriesValue { value, remainder_bound: tail });
        }
        level = next_level_weighted(&level, sys.ratios());
        if level.len() > LEVEL_LIMIT {
            return Err(Error::Explosion { limit: LEVEL_LIMIT });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn closed_forms() {
        let carpet = SelfSimilarSystem::new(vec![1.0 / 3.0; 4], 2).unwrap();
        assert!((zeta_eval(&carpet, c(2.0)).unwrap() - c(1.8)).norm() < 1e-15);
        let gasket = SelfSimilarSystem::new(vec![0.5; 3], 2).unwrap();
        assert!((zeta_eval(&gasket, c(2.0)).unwrap() - c(4.0)).norm() < 1e-14);
        let d = carpet.dimension();
        assert!(matches!(zeta_eval(&carpet, c(d)), Err(Error::AtPole { .. })));
    }

    #[test]
    fn gasket_series_matches_closed_form() {
        let gasket = SelfSimilarSystem::new(vec![0.5; 3], 2).unwrap();
        let string = FractalString::self_similar(gasket, 1e-3).unwrap();
        let v = zeta_series_bounded(&string, c(2.0), 1e-8).unwrap();
        assert!((v.value - c(4.0)).norm() <= 4e-8 + v.remainder_bound);
        assert!(v.remainder_bound <= 4e-8 * 1.000001);
    }

    #[test]
    fn geometric_explicit_string() {
        let scales: Vec<f64> = (0..60).map(|j| 0.5f64.powi(j)).collect();
        let string = FractalString::explicit(scales).unwrap();
        let v = zeta_series_eval(&string, c(2.0), 1e-12).unwrap();
        assert!((v.re - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn abscissa_guard() {
        let sys = SelfSimilarSystem::new(vec![0.5, 1.0 / 3.0], 1).unwrap();
        let d = sys.dimension();
        let string = FractalString::self_similar(sys, 0.1).unwrap();
        assert!(matches!(zeta_series_eval(&string, c(d), 1e-8), Err(Error::AbscissaViolation { .. })));
    }

    #[test]
    fn nonlattice_series_off_axis() {
        let sys = SelfSimilarSystem::new(vec![0.5, 1.0 / 3.0], 1).unwrap();
        let string = FractalString::self_similar(sys.clone(), 0.1).unwrap();
        let s = Complex64::new(1.5, 7.0);
        let series = zeta_series_eval(&string, s, 1e-10).unwrap();
        let closed = zeta_eval(&sys, s).unwrap();
        assert!((series - closed).norm() <= 2e-10 * closed.norm());
    }
}
