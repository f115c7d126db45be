use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::spray::FractalString;

/// Tolerance on the Descartes form of the seed quadruple.
pub const SEED_FORM_TOL: f64 = 1e-9;
/// Cap on the number of generated circles.
pub const MAX_CIRCLES: usize = 20_000_000;

/// `F(a) = 2 sum a_i^2 - (sum a_i)^2`, zero for mutually tangent circles.
pub fn descartes_form(a: &[f64; 4]) -> f64 {
    let sum: f64 = a.iter().sum();
    let sq: f64 = a.iter().map(|x| x * x).sum();
    2.0 * sq - sum * sum
}

/// Replaces `a_i` by the other root of the Descartes relation,
/// `2 sum_{j != i} a_j - a_i`.
pub fn apollonian_swap(a: &[f64; 4], i: usize) -> [f64; 4] {
    let others: f64 = (0..4).filter(|&j| j != i).map(|j| a[j]).sum();
    let mut out = *a;
    out[i] = 2.0 * others - a[i];
    out
}

/// Circles of an Apollonian packing down to a minimum radius.
#[derive(Debug, Clone, PartialEq)]
pub struct ApollonianPacking {
    seed: [f64; 4],
    min_radius: f64,
    /// Radii of the interior circles, nonincreasing.
    radii: Vec<f64>,
    /// `|F|` of the quadruple each circle was produced in, aligned with `radii`.
    forms: Vec<f64>,
    quadruples: usize,
    max_form: f64,
    enclosing_radius: f64,
}

impl ApollonianPacking {
    /// The seed circles are always kept.
    ///
    /// Breadth-first walk of the Apollonian group: the seed swaps each of its
    /// four entries, every later quadruple swaps the three entries other than
    /// the one just produced, so each circle appears exactly once. A branch
    /// stops once its new circle is smaller than `min_radius`, since
    /// curvatures only grow down the tree.
    pub fn generate(seed: [f64; 4], min_radius: f64) -> Result<Self> {
        if !(min_radius > 0.0) {
            return Err(Error::InvalidArgument(format!("min_radius must be positive, got {min_radius}")));
        }
        if seed.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidArgument("seed curvatures must be finite".into()));
        }
        let scale = seed.iter().map(|a| a * a).sum::<f64>().max(1.0);
        let residual = descartes_form(&seed).abs();
        if residual > SEED_FORM_TOL * scale {
            return Err(Error::InvalidSeed { residual });
        }
        let enclosing: Vec<usize> = (0..4).filter(|&i| seed[i] <= 0.0).collect();
        if enclosing.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "seed needs exactly one nonpositive curvature, found {}",
                enclosing.len()
            )));
        }
        let outer = seed[enclosing[0]];
        if outer == 0.0 {
            return Err(Error::InvalidArgument("a straight-line boundary encloses no finite area".into()));
        }
        let max_curvature = 1.0 / min_radius;
        let mut circles: Vec<(f64, f64)> = seed.iter().filter(|&&a| a > 0.0).map(|a| (1.0 / a, residual)).collect();
        let mut max_form = residual;
        let mut quadruples = 1usize;
        let mut queue: VecDeque<([f64; 4], usize)> = VecDeque::new();
        for i in 0..4 {
            queue.push_back((seed, i));
        }
        while let Some((parent, i)) = queue.pop_front() {
            let child = apollonian_swap(&parent, i);
            let a = child[i];
            if a > max_curvature {
                continue;
            }
            quadruples += 1;
            let form = descartes_form(&child).abs();
            max_form = max_form.max(form);
            circles.push((1.0 / a, form));
            if circles.len() > MAX_CIRCLES {
                return Err(Error::Explosion { limit: MAX_CIRCLES });
            }
            for j in (0..4).filter(|&j| j != i) {
                queue.push_back((child, j));
            }
        }
        circles.sort_by(|a, b| b.0.total_cmp(&a.0));
        let (radii, forms) = circles.into_iter().unzip();
        Ok(ApollonianPacking { seed, min_radius, radii, forms, quadruples, max_form, enclosing_radius: -1.0 / outer })
    }

    pub fn seed(&self) -> [f64; 4] {
        self.seed
    }

    pub fn min_radius(&self) -> f64 {
        self.min_radius
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// `|F|` per circle, aligned with [`Self::radii`]; seed circles carry the seed's.
    pub fn form_residuals(&self) -> &[f64] {
        &self.forms
    }

    /// Number of quadruples visited (including the seed).
    pub fn quadruple_count(&self) -> usize {
        self.quadruples
    }

    /// Largest `|F|` over every visited quadruple.
    pub fn max_form_residual(&self) -> f64 {
        self.max_form
    }

    pub fn enclosing_radius(&self) -> f64 {
        self.enclosing_radius
    }

    pub fn largest_radius(&self) -> Option<f64> {
        self.radii.first().copied()
    }

    /// `sum pi r^2` over the generated disks.
    pub fn disk_area(&self) -> f64 {
        let mut acc = crate::numeric::CompensatedSum::new();
        for r in self.radii.iter().rev() {
            acc.add(std::f64::consts::PI * r * r);
        }
        acc.value()
    }

    /// The string of radii divided by the largest one. Its value at `s = 2`
    /// comes from the enclosing disk, whose area the interior disks exhaust.
    pub fn string(&self) -> Result<FractalString> {
        let r_max = self.largest_radius().ok_or_else(|| Error::InvalidString("no circle reaches min_radius".into()))?;
        let normalized: Vec<f64> = self.radii.iter().map(|r| r / r_max).collect();
        let zeta_at_two = (self.enclosing_radius / r_max).powi(2);
        FractalString::apollonian(self.seed, self.min_radius, normalized, zeta_at_two, self.min_radius / r_max)
    }
}

/// Normalized radii of the packing generated from `seed` down to `min_radius`.
pub fn apollonian_string(seed: [f64; 4], min_radius: f64) -> Result<FractalString> {
    ApollonianPacking::generate(seed, min_radius)?.string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed() -> [f64; 4] {
        [1.0, 1.0, 1.0, 3.0 - 2.0 * 3f64.sqrt()]
    }

    #[test]
    fn first_swap() {
        let a = apollonian_swap(&seed(), 0);
        assert!((a[0] - (9.0 - 4.0 * 3f64.sqrt())).abs() < 1e-14);
        assert!(descartes_form(&a).abs() < 1e-12);
    }

    #[test]
    fn invariant_along_the_tree() {
        let p = ApollonianPacking::generate(seed(), 1e-3).unwrap();
        assert!(p.max_form_residual() <= 1e-6);
        assert!(p.radii().windows(2).all(|w| w[0] >= w[1]));
        assert!(*p.radii().last().unwrap() >= 1e-3);
        assert!(p.quadruple_count() > 100);
        let r = p.enclosing_radius();
        assert!((r - 1.0 / (2.0 * 3f64.sqrt() - 3.0)).abs() < 1e-12);
    }

    #[test]
    fn area_increases_toward_enclosing_disk() {
        let full = std::f64::consts::PI * ApollonianPacking::generate(seed(), 1.0).unwrap().enclosing_radius().powi(2);
        let mut last = 0.0;
        for m in [1e-1, 1e-2, 1e-3] {
            let a = ApollonianPacking::generate(seed(), m).unwrap().disk_area();
            assert!(a > last && a < full);
            last = a;
        }
        assert!(full - last < 0.02 * full);
    }

    #[test]
    fn large_cutoff_keeps_only_the_largest() {
        let s = apollonian_string(seed(), 1.0).unwrap();
        assert_eq!(s.scales().entries(), &[(1.0, 3)]);
        let s = apollonian_string(seed(), 1.5).unwrap();
        assert_eq!(s.scales().entries(), &[(1.0, 3)]);
    }

    #[test]
    fn bad_seed() {
        assert!(matches!(ApollonianPacking::generate([1.0, 1.0, 1.0, -0.4], 0.1), Err(Error::InvalidSeed { .. })));
    }
}
