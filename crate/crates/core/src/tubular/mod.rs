//! The tubular zeta function `zeta_T(eps, s)` of a fractal spray, its
//! head/tail split, the generator zeta function and their residues.

pub mod contour;

pub use contour::contour_residue;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{real_pow, ComplexSum};
use crate::oracle::enumerate::next_level_weighted;
use crate::scaling::series::{SeriesValue, LEVEL_LIMIT, SERIES_MARGIN};
use crate::scaling::zeta_eval;
use crate::spray::{FractalSpray, SteinerLikeRep, StringSource};

/// Distance to an integer in `{0, ..., d}` below which evaluation is refused.
pub const INTEGER_GUARD: f64 = 1e-10;

/// A pole of the tail zeta function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pole {
    /// Scaling dimension `omega` with the residue of `zeta_L` there.
    Scaling {
        omega: Complex64,
        residue: Complex64,
    },
    Integer(usize),
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_integer(s: Complex64, d: usize) -> Result<()> {
    for k in 0..=d {
        if (s - c(k as f64)).norm() < INTEGER_GUARD {
            return Err(Error::IntegerSingularity { s, k });
        }
    }
    Ok(())
}

/// `M_s(G) = sum_{k<d} g^{s-k} (d-k) kappa_k(G) / (s-k)`.
pub fn tail_moment(rep: &SteinerLikeRep, s: Complex64) -> Complex64 {
    let d = rep.ambient_dim;
    let g = rep.inradius;
    (0..d).map(|k| real_pow(g, s - k as f64) * ((d - k) as f64 * rep.kappa_const[k]) / (s - k as f64)).sum()
}

/// `zeta_G[head](eps, s) = eps^{d-s} sum_k g^{s-k} f_k(eps) / (s-k)`.
pub fn zeta_g_head(rep: &SteinerLikeRep, eps: f64, s: Complex64) -> Result<Complex64> {
    let d = rep.ambient_dim;
    check_integer(s, d)?;
    if eps >= rep.inradius {
        return Ok(c(0.0));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=d {
        let f = rep.kappa_deviation(k, eps)?;
        if f != 0.0 {
            acc += real_pow(rep.inradius, s - k as f64) * f / (s - k as f64);
        }
    }
    Ok(real_pow(eps, d as f64 - s) * acc)
}

/// `zeta_G[tail](eps, s) = eps^{d-s} M_s(G) / (d-s)`.
pub fn zeta_g_tail(rep: &SteinerLikeRep, eps: f64, s: Complex64) -> Result<Complex64> {
    let d = rep.ambient_dim;
    check_integer(s, d)?;
    Ok(real_pow(eps, d as f64 - s) * tail_moment(rep, s) / (d as f64 - s))
}

pub fn zeta_g(rep: &SteinerLikeRep, eps: f64, s: Complex64) -> Result<Complex64> {
    Ok(zeta_g_head(rep, eps, s)? + zeta_g_tail(rep, eps, s)?)
}

/// Single-tile definition:
/// `eps^{d-s} (sum_k g^{s-k} kappa_k(eps)/(s-k) - g^{s-d} lambda/(s-d))`.
pub fn zeta_g_direct(rep: &SteinerLikeRep, eps: f64, s: Complex64) -> Result<Complex64> {
    let d = rep.ambient_dim;
    check_integer(s, d)?;
    Ok(real_pow(eps, d as f64 - s) * tile_bracket(rep, eps, s)?)
}

/// The bracket of the definition for a tile of unit scale at `x = eps/l`.
fn tile_bracket(rep: &SteinerLikeRep, x: f64, s: Complex64) -> Result<Complex64> {
    let d = rep.ambient_dim;
    let g = rep.inradius;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=d {
        acc += real_pow(g, s - k as f64) * rep.kappa_at(k, x)? / (s - k as f64);
    }
    Ok(acc - real_pow(g, s - d as f64) * rep.volume / (s - d as f64))
}

/// `res_{s=k} zeta_G[head](eps, s) = eps^{d-k} f_k(eps)`.
pub fn generator_residue_head(rep: &SteinerLikeRep, eps: f64, k: usize) -> Result<f64> {
    Ok(eps.powi((rep.ambient_dim - k) as i32) * rep.kappa_deviation(k, eps)?)
}

/// `res_{s=k} zeta_G[tail](eps, s)`: `eps^{d-k} kappa_k(G)` for `k < d` and
/// `kappa_d(G) - lambda(G)` for `k = d`.
pub fn generator_residue_tail(rep: &SteinerLikeRep, eps: f64, k: usize) -> f64 {
    let d = rep.ambient_dim;
    if k == d {
        rep.kappa_const[d] - rep.volume
    } else {
        eps.powi((d - k) as i32) * rep.kappa_const[k]
    }
}

/// Evaluation context for the tubular zeta function of one spray.
#[derive(Debug, Clone)]
pub struct TubularZetaContext {
    spray: FractalSpray,
}

impl TubularZetaContext {
    pub fn new(spray: FractalSpray) -> Self {
        TubularZetaContext { spray }
    }

    pub fn spray(&self) -> &FractalSpray {
        &self.spray
    }

    pub fn dim(&self) -> usize {
        self.spray.ambient_dim()
    }

    /// `zeta_L(s)`: closed form for self-similar and finite strings; the
    /// Apollonian string only at `s = 2`.
    pub fn zeta_l(&self, s: Complex64) -> Result<Complex64> {
        let string = self.spray.string();
        match string.source() {
            StringSource::SelfSimilar(sys) => zeta_eval(sys, s),
            _ => string.zeta_closed(s).ok_or(Error::TailUnavailable),
        }
    }

    /// `zeta_L(k)` at an integer, rejecting a scaling pole sitting there.
    fn zeta_l_at_integer(&self, k: usize) -> Result<f64> {
        match self.zeta_l(c(k as f64)) {
            Ok(v) => Ok(v.re),
            Err(Error::AtPole { .. }) => Err(Error::ScalingIntegerCollision { omega: c(k as f64), k }),
            Err(e) => Err(e),
        }
    }

    pub fn zeta_tail(&self, eps: f64, s: Complex64) -> Result<Complex64> {
        check_integer(s, self.dim())?;
        let zl = self.zeta_l(s)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for rep in self.spray.generators() {
            acc += zeta_g_tail(rep, eps, s)?;
        }
        Ok(acc * zl)
    }

    pub fn zeta_head(&self, eps: f64, s: Complex64) -> Result<Complex64> {
        let d = self.dim();
        check_integer(s, d)?;
        let mut total = ComplexSum::new();
        for rep in self.spray.generators() {
            let unsat = self.spray.string().unsaturated(rep.inradius, eps)?;
            for k in 0..=d {
                let mut inner = ComplexSum::new();
                for &(l, cnt) in &unsat {
                    let f = rep.kappa_deviation(k, eps / l)?;
                    if f != 0.0 {
                        inner.add(real_pow(l, s) * (f * cnt as f64));
                    }
                }
                total.add(real_pow(rep.inradius, s - k as f64) / (s - k as f64) * inner.value());
            }
        }
        Ok(real_pow(eps, d as f64 - s) * total.value())
    }

    pub fn zeta_t(&self, eps: f64, s: Complex64) -> Result<Complex64> {
        Ok(self.zeta_head(eps, s)? + self.zeta_tail(eps, s)?)
    }

    /// The defining Dirichlet series of `zeta_T`, summed tile by tile over
    /// the self-similar word levels with a certified geometric remainder.
    /// Requires `Re s > D + margin`.
    pub fn zeta_t_series(&self, eps: f64, s: Complex64, rel_tol: f64) -> Result<SeriesValue> {
        let d = self.dim();
        check_integer(s, d)?;
        let string = self.spray.string();
        let sys = match string.source() {
            StringSource::SelfSimilar(sys) => sys,
            StringSource::Explicit => {
                let mut acc = ComplexSum::new();
                for rep in self.spray.generators() {
                    for &(l, cnt) in string.scales().entries() {
                        acc.add(real_pow(l, s) * tile_bracket(rep, eps / l, s)? * cnt as f64);
                    }
                }
                return Ok(SeriesValue { value: real_pow(eps, d as f64 - s) * acc.value(), remainder_bound: 0.0 });
            }
            StringSource::Apollonian { .. } => return Err(Error::TailUnavailable),
        };
        let dim = sys.dimension();
        if s.re <= dim + SERIES_MARGIN {
            return Err(Error::AbscissaViolation { re: s.re, abscissa: dim, margin: SERIES_MARGIN });
        }
        let q = sys.phi_real(s.re);
        let saturated: f64 = self
            .spray
            .generators()
            .iter()
            .map(|rep| tile_bracket(rep, rep.inradius, s).map(|b| b.norm()))
            .sum::<Result<f64>>()?;
        let g_max = self.spray.max_inradius();
        let mut level: Vec<(f64, f64)> = vec![(1.0, 1.0)];
        let mut acc = ComplexSum::new();
        let mut qm = 1.0;
        let eps_s = real_pow(eps, d as f64 - s);
        loop {
            for &(l, cnt) in &level {
                for rep in self.spray.generators() {
                    acc.add(real_pow(l, s) * tile_bracket(rep, eps / l, s)? * cnt);
                }
            }
            qm *= q;
            // once every tile of the next level is saturated the remaining
            // levels contribute |bracket| * q^m each
            let next_max = level[0].0 * sys.ratios()[0];
            if next_max * g_max <= eps {
                let tail = eps_s.norm() * saturated * qm / (1.0 - q);
                let value = eps_s * acc.value();
                if tail <= rel_tol * value.norm() || qm == 0.0 {
                    return Ok(SeriesValue { value, remainder_bound: tail });
                }
            }
            level = next_level_weighted(&level, sys.ratios());
            if level.len() > LEVEL_LIMIT {
                return Err(Error::Explosion { limit: LEVEL_LIMIT });
            }
        }
    }

    /// `e_k(eps) = sum_{j <= J(eps)} l_j^k f_k(eps / l_j)`, summed over
    /// generators.
    pub fn e_k(&self, k: usize, eps: f64) -> Result<f64> {
        let mut total = crate::numeric::CompensatedSum::new();
        for rep in self.spray.generators() {
            for (l, cnt) in self.spray.string().unsaturated(rep.inradius, eps)? {
                let f = rep.kappa_deviation(k, eps / l)?;
                if f != 0.0 {
                    total.add(l.powi(k as i32) * f * cnt as f64);
                }
            }
        }
        Ok(total.value())
    }

    /// `res_{s=k} zeta_T[head](eps, s) = eps^{d-k} e_k(eps)`.
    pub fn residue_head_at_k(&self, eps: f64, k: usize) -> Result<f64> {
        if k > self.dim() {
            return Err(Error::InvalidArgument(format!("k = {k} exceeds d = {}", self.dim())));
        }
        Ok(eps.powi((self.dim() - k) as i32) * self.e_k(k, eps)?)
    }

    /// Residue of `zeta_T[tail](eps, .)` at a scaling or integer pole.
    pub fn residue_tail_at(&self, eps: f64, pole: Pole) -> Result<Complex64> {
        let d = self.dim();
        match pole {
            Pole::Scaling { omega, residue } => {
                for k in 0..=d {
                    if (omega - c(k as f64)).norm() < INTEGER_GUARD {
                        return Err(Error::ScalingIntegerCollision { omega, k });
                    }
                }
                let moment: Complex64 = self.spray.generators().iter().map(|r| tail_moment(r, omega)).sum();
                Ok(real_pow(eps, d as f64 - omega) / (d as f64 - omega) * residue * moment)
            }
            Pole::Integer(k) => {
                if k > d {
                    return Err(Error::InvalidArgument(format!("k = {k} exceeds d = {d}")));
                }
                let zl = self.zeta_l_at_integer(k)?;
                let sum: f64 = self.spray.generators().iter().map(|rep| generator_residue_tail(rep, eps, k)).sum();
                Ok(c(zl * sum))
            }
        }
    }

    /// `M_s` summed over generators.
    pub fn tail_moment(&self, s: Complex64) -> Complex64 {
        self.spray.generators().iter().map(|r| tail_moment(r, s)).sum()
    }

    /// `sum_G lambda(G)`.
    pub fn generator_volume(&self) -> f64 {
        self.spray.generators().iter().map(|r| r.volume).sum()
    }

    /// `sum_G kappa_k(G)`.
    pub fn kappa_const(&self, k: usize) -> f64 {
        self.spray.generators().iter().map(|r| r.kappa_const[k]).sum()
    }

    /// `zeta_L(k)` at an integer that is not a scaling pole.
    pub fn zeta_l_integer(&self, k: usize) -> Result<f64> {
        self.zeta_l_at_integer(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{builtin, BuiltinName};
    use crate::spray::{FractalString, SelfSimilarSystem};

    fn cantor_carpet() -> TubularZetaContext {
        let sys = SelfSimilarSystem::new(vec![1.0 / 3.0; 4], 2).unwrap();
        let string = FractalString::self_similar(sys, 1e-4).unwrap();
        let rep = builtin(BuiltinName::CantorCarpetGen, 1.0).unwrap();
        TubularZetaContext::new(FractalSpray::new(string, rep).unwrap())
    }

    #[test]
    fn k_equals_d_tail_residue() {
        let ctx = cantor_carpet();
        let r = ctx.residue_tail_at(0.01, Pole::Integer(2)).unwrap();
        assert!((r.re + 0.2).abs() < 1e-14, "{r}");
    }

    #[test]
    fn head_residue_on_the_first_piece() {
        let ctx = cantor_carpet();
        let g = 2f64.sqrt() / 6.0;
        for eps in [g / 3.0 + 1e-9, 0.12, g / 2f64.sqrt()] {
            let r = ctx.residue_head_at_k(eps, 2).unwrap();
            assert!((r + 4.0 / 9.0).abs() < 1e-14, "{eps}: {r}");
        }
    }

    #[test]
    fn integer_guard() {
        let ctx = cantor_carpet();
        assert!(matches!(ctx.zeta_t(0.1, c(1.0 + 1e-12)), Err(Error::IntegerSingularity { k: 1, .. })));
    }

    #[test]
    fn head_vanishes_above_g() {
        let ctx = cantor_carpet();
        let s = Complex64::new(3.0, 0.5);
        assert_eq!(ctx.zeta_head(1.0, s).unwrap(), c(0.0));
    }

    #[test]
    fn big_eps_closed_form() {
        let ctx = cantor_carpet();
        let g = 2f64.sqrt() / 6.0;
        let eps = 2.0 * g;
        let s = Complex64::new(2.7, 1.3);
        let rep = ctx.spray().generator();
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..2 {
            sum += real_pow(g, s - k as f64) * rep.kappa_const[k] * (2 - k) as f64 / ((s - k as f64) * (2.0 - s));
        }
        let expect = real_pow(eps, 2.0 - s) * ctx.zeta_l(s).unwrap() * sum;
        let got = ctx.zeta_t(eps, s).unwrap();
        assert!((got - expect).norm() <= 1e-13 * expect.norm());
    }
}
