use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest panel count tried by [`contour_residue`].
pub const MAX_CONTOUR_PANELS: usize = 1 << 16;
/// Relative change between panel doublings accepted as converged.
pub const CONTOUR_TOL: f64 = 1e-9;

/// `(1/2 pi i) \oint f(s) ds` over the circle `|s - center| = radius`, by the
/// trapezoid rule with panel doubling until successive values agree.
///
/// When `known_poles` is given, every listed pole other than `center` must
/// lie outside the circle.
pub fn contour_residue<F>(
    f: F,
    center: Complex64,
    radius: f64,
    panels: usize,
    known_poles: Option<&[Complex64]>,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    if let Some(poles) = known_poles {
        let tiny = radius * 1e-6;
        if let Some(p) =
            poles.iter().find(|p| (**p - center).norm() > tiny && (**p - center).norm() <= radius * (1.0 + 1e-9))
        {
            return Err(Error::InvalidArgument(format!("another pole {p} lies within the contour around {center}")));
        }
    }
    let mut n = panels.max(8);
    // sample sum of f(s) (s - center) at the nodes; doubling reuses it
    let node = |j: usize, n: usize| -> Complex64 {
        let theta = 2.0 * PI * j as f64 / n as f64;
        let w = Complex64::from_polar(radius, theta);
        f(center + w) * w
    };
    let mut sum: Complex64 = (0..n).map(|j| node(j, n)).sum();
    let mut value = sum / n as f64;
    while n < MAX_CONTOUR_PANELS {
        let odd: Complex64 = (0..n).map(|j| node(2 * j + 1, 2 * n)).sum();
        sum += odd;
        n *= 2;
        let next = sum / n as f64;
        if !next.is_finite() {
            return Err(Error::NonConvergent(format!("non-finite integrand on the contour around {center}")));
        }
        if (next - value).norm() < CONTOUR_TOL * next.norm().max(1.0) {
            return Ok(next);
        }
        value = next;
    }
    Err(Error::NonConvergent(format!(
        "contour integral around {center} did not settle within {MAX_CONTOUR_PANELS} panels"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_pole() {
        let a = Complex64::new(0.3, -0.2);
        let r = contour_residue(|s| (s - a).inv(), a, 0.5, 16, None).unwrap();
        assert!((r - 1.0).norm() < 1e-12);
    }

    #[test]
    fn analytic_integrand_has_no_residue() {
        let r = contour_residue(|s| s.exp(), Complex64::new(1.0, 1.0), 0.7, 16, None).unwrap();
        assert!(r.norm() < 1e-12);
    }

    #[test]
    fn rejects_a_second_pole_inside() {
        let poles = [Complex64::new(0.0, 0.0), Complex64::new(0.1, 0.0)];
        assert!(contour_residue(|s| s.inv(), poles[0], 0.5, 16, Some(&poles)).is_err());
        assert!(contour_residue(|s| s.inv(), poles[0], 0.05, 16, Some(&poles)).is_ok());
    }
}
