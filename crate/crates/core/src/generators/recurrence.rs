//! Tube volumes defined by a scaling recurrence
//! `V(eps) = m * V(eps / c) + q(eps)` for `eps` in `[g/c, g)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::generators::expr::Expr;
use crate::spray::{CoefficientFn, SteinerLikeRep};

/// Forcing term of the U-shaped Sierpinski-carpet modification.
pub const USHAPE_FORCING: &str = "17/9 - eps/9 + (pi - 38/9)*eps^2";

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceRep {
    inradius: f64,
    contraction: f64,
    multiplier: f64,
    /// `q(eps)`, evaluated at the larger argument of each step.
    forcing: Expr,
    /// `V` on the base interval `[g/c, g)`.
    base: Option<Expr>,
    volume: f64,
}

impl RecurrenceRep {
    pub fn new(
        inradius: f64,
        contraction: f64,
        multiplier: f64,
        forcing: Expr,
        base: Option<Expr>,
        volume: f64,
    ) -> Result<Self> {
        if !(inradius > 0.0 && inradius.is_finite()) {
            return Err(Error::InvalidRep(format!("inradius must be positive, got {inradius}")));
        }
        if !(contraction > 1.0 && multiplier > 0.0) {
            return Err(Error::InvalidRep("contraction must exceed 1 and multiplier must be positive".into()));
        }
        Ok(RecurrenceRep { inradius, contraction, multiplier, forcing, base, volume })
    }

    /// The U-shaped example: contraction 3, multiplier 9, fixed forcing term.
    pub fn ushape(inradius: f64, base: Option<&str>, volume: f64) -> Result<Self> {
        let forcing = Expr::parse(USHAPE_FORCING, inradius)?;
        let base = base.map(|b| Expr::parse(b, inradius)).transpose()?;
        Self::new(inradius, 3.0, 9.0, forcing, base, volume)
    }

    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub fn contraction(&self) -> f64 {
        self.contraction
    }

    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn forcing(&self, eps: f64) -> f64 {
        self.forcing.eval(eps)
    }

    pub fn value_at_inradius(&self) -> Result<f64> {
        Ok(self.volume)
    }

    /// Number of inverse steps needed to reach the base interval from `eps`.
    pub fn depth(&self, eps: f64) -> usize {
        let lo = self.inradius / self.contraction;
        let mut y = eps;
        let mut m = 0;
        while y < lo {
            y *= self.contraction;
            m += 1;
        }
        m
    }

    /// `V(G, eps)` by unrolling the recurrence from the base interval.
    pub fn tube(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
        }
        if eps >= self.inradius {
            return Ok(self.volume);
        }
        let base = self.base.as_ref().ok_or(Error::NoBase)?;
        let m = self.depth(eps);
        let mut args = Vec::with_capacity(m + 1);
        let mut y = eps;
        args.push(y);
        for _ in 0..m {
            y *= self.contraction;
            args.push(y);
        }
        let mut v = base.eval(y);
        // walk back down: V(x) = (V(c x) - q(c x)) / m
        for i in (0..m).rev() {
            v = (v - self.forcing.eval(args[i + 1])) / self.multiplier;
        }
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteSample { eps })
        }
    }

    /// Measure of the part of the generator at depth below `m`,
    /// `lambda(G) / multiplier^m`.
    pub fn solid_term(&self, m: u32) -> f64 {
        self.volume / self.multiplier.powi(m as i32)
    }

    /// Wraps the recurrence as a trivial representation with all volume in
    /// the top coefficient.
    pub fn into_rep(self, name: impl Into<String>) -> Result<SteinerLikeRep> {
        let g = self.inradius;
        let volume = self.volume;
        let zero = || CoefficientFn::Piecewise(crate::generators::expr::Piecewise::constant(0.0, g));
        SteinerLikeRep::new(name, 2, g, vec![zero(), zero(), CoefficientFn::Recurrence(Arc::new(self))], Some(volume))
    }
}

/// `V(G, eps)` for a recurrence-defined generator.
pub fn ushape_tube(rec: &RecurrenceRep, eps: f64) -> Result<f64> {
    rec.tube(eps)
}

/// Solid term `lambda(G) / 9^m` of the U-shaped example at depth `m`, in
/// closed form for the standard volume `1/324`.
pub fn ushape_solid_term(m: u32) -> f64 {
    0.25 / 9f64.powi(m as i32 + 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    const G: f64 = 1.0;
    const BASE: &str = "2*eps - eps^2";

    fn rec() -> RecurrenceRep {
        RecurrenceRep::ushape(G, Some(BASE), 1.0 / 324.0).unwrap()
    }

    #[test]
    fn base_interval_is_returned_verbatim() {
        let r = rec();
        let base = Expr::parse(BASE, G).unwrap();
        for eps in [G / 3.0, 0.5, 0.9] {
            assert_eq!(r.tube(eps).unwrap(), base.eval(eps));
        }
    }

    #[test]
    fn forward_recurrence_holds() {
        let r = rec();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let eps = rng.gen_range(G / 3f64.powi(6)..G / 3.0);
            let lhs = r.tube(3.0 * eps).unwrap();
            let rhs = 9.0 * r.tube(eps).unwrap() + r.forcing(3.0 * eps);
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "{eps}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn missing_base_is_an_error() {
        let r = RecurrenceRep::ushape(G, None, 1.0).unwrap();
        assert_eq!(r.tube(0.1), Err(Error::NoBase));
    }

    #[test]
    fn solid_term_matches_closed_form() {
        let r = rec();
        for m in 0..8 {
            let a = r.solid_term(m);
            let b = ushape_solid_term(m);
            assert!((a - b).abs() <= 1e-15 * b, "m={m}");
        }
    }

    #[test]
    fn depth_places_eps_in_base_interval() {
        let r = rec();
        for eps in [0.3, 0.1, 0.01, 1e-5] {
            let m = r.depth(eps);
            let y = eps * 3f64.powi(m as i32);
            assert!((G / 3.0..G).contains(&y), "{eps} -> {y}");
        }
    }
}
