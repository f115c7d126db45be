use std::sync::Arc;

use crate::error::{Error, Result};
use crate::generators::expr::Piecewise;
use crate::generators::RecurrenceRep;

/// One coefficient function `kappa_k(G, .)` on `(0, g]`.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientFn {
    Piecewise(Piecewise),
    /// Volume function given by a scaling recurrence; only meaningful as the
    /// top coefficient `kappa_d` of a trivial representation.
    Recurrence(Arc<RecurrenceRep>),
}

impl CoefficientFn {
    /// Value on `(0, g]`; `None` outside.
    pub fn eval(&self, x: f64) -> Option<Result<f64>> {
        match self {
            CoefficientFn::Piecewise(p) => p.eval(x).map(Ok),
            CoefficientFn::Recurrence(r) => {
                if x <= 0.0 || x > r.inradius() {
                    None
                } else if x == r.inradius() {
                    Some(r.value_at_inradius())
                } else {
                    Some(r.tube(x))
                }
            }
        }
    }

    fn is_structurally_constant(&self) -> bool {
        match self {
            CoefficientFn::Piecewise(p) => p.is_structurally_constant(),
            CoefficientFn::Recurrence(_) => false,
        }
    }
}

/// A Steiner-like representation `V(G, eps) = sum_k kappa_k(G, eps) eps^(d-k)`
/// of the inner tube volume of a generator on `(0, g]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinerLikeRep {
    pub name: String,
    pub ambient_dim: usize,
    pub inradius: f64,
    pub kappa: Vec<CoefficientFn>,
    /// Extension constants `kappa_k(G) := kappa_k(G, g)`.
    pub kappa_const: Vec<f64>,
    /// Lebesgue measure of the generator.
    pub volume: f64,
    pub monophase: bool,
}

impl SteinerLikeRep {
    /// Assembles a representation. `volume` is the known measure of the
    /// generator; when `None` it is taken from the representation at `eps = g`.
    pub fn new(
        name: impl Into<String>,
        ambient_dim: usize,
        inradius: f64,
        kappa: Vec<CoefficientFn>,
        volume: Option<f64>,
    ) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidRep("ambient dimension must be >= 1".into()));
        }
        if !(inradius > 0.0 && inradius.is_finite()) {
            return Err(Error::InvalidRep(format!("inradius must be positive, got {inradius}")));
        }
        if kappa.len() != ambient_dim + 1 {
            return Err(Error::InvalidRep(format!(
                "expected {} coefficient functions, got {}",
                ambient_dim + 1,
                kappa.len()
            )));
        }
        let mut kappa_const = Vec::with_capacity(kappa.len());
        for k in &kappa {
            let v = k.eval(inradius).ok_or_else(|| Error::InvalidRep("coefficient undefined at eps = g".into()))??;
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { eps: inradius });
            }
            kappa_const.push(v);
        }
        let from_rep: f64 =
            kappa_const.iter().enumerate().map(|(k, c)| c * inradius.powi((ambient_dim - k) as i32)).sum();
        let volume = volume.unwrap_or(from_rep);
        let mut rep =
            SteinerLikeRep { name: name.into(), ambient_dim, inradius, kappa, kappa_const, volume, monophase: false };
        rep.monophase = rep.detect_monophase();
        Ok(rep)
    }

    fn detect_monophase(&self) -> bool {
        let d = self.ambient_dim;
        if self.kappa_const[d] != 0.0 {
            return false;
        }
        if self.kappa.iter().all(|k| k.is_structurally_constant()) {
            // constant pieces may still differ from each other
            return (1..=64).all(|i| {
                let x = self.inradius * i as f64 / 64.0;
                (0..=d).all(|k| matches!(self.kappa_at(k, x), Ok(v) if v == self.kappa_const[k]))
            }) && self.breakpoint_values_constant();
        }
        false
    }

    fn breakpoint_values_constant(&self) -> bool {
        self.kappa.iter().enumerate().all(|(k, f)| match f {
            CoefficientFn::Piecewise(p) => {
                p.breakpoints().flat_map(|b| [b, b * (1.0 - 1e-9)]).all(|x| p.eval(x) == Some(self.kappa_const[k]))
            }
            CoefficientFn::Recurrence(_) => false,
        })
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim
    }

    /// `kappa_k(G, x)` with the constant extension for `x >= g`.
    pub fn kappa_at(&self, k: usize, x: f64) -> Result<f64> {
        if x >= self.inradius {
            return Ok(self.kappa_const[k]);
        }
        if !(x > 0.0) {
            return Err(Error::InvalidArgument(format!("coefficient argument {x} <= 0")));
        }
        let v = self.kappa[k].eval(x).ok_or_else(|| Error::InvalidRep(format!("kappa_{k} undefined at {x}")))??;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteSample { eps: x })
        }
    }

    /// `f_k(x) = kappa_k(G, x) - kappa_k(G)`; identically zero for `x >= g`.
    pub fn kappa_deviation(&self, k: usize, x: f64) -> Result<f64> {
        if x >= self.inradius {
            return Ok(0.0);
        }
        Ok(self.kappa_at(k, x)? - self.kappa_const[k])
    }

    /// Measure of the generator, `sum_k kappa_k(G) g^(d-k)` for a valid rep.
    pub fn generator_volume(&self) -> f64 {
        self.volume
    }

    /// `sum_k kappa_k(G) g^(d-k)` computed from the extension constants.
    pub fn volume_from_constants(&self) -> f64 {
        let d = self.ambient_dim;
        self.kappa_const.iter().enumerate().map(|(k, c)| c * self.inradius.powi((d - k) as i32)).sum()
    }

    /// Inner tube volume `V(G, eps)`; saturates at the full measure for
    /// `eps > g`.
    pub fn tube(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
        }
        if eps > self.inradius {
            return Ok(self.volume);
        }
        let d = self.ambient_dim;
        let mut acc = 0.0;
        for k in 0..=d {
            acc += self.kappa_at(k, eps)? * eps.powi((d - k) as i32);
        }
        Ok(acc)
    }

    /// Inner tube volume of the copy `scale * G`.
    pub fn tube_scaled(&self, scale: f64, eps: f64) -> Result<f64> {
        if !(scale > 0.0 && scale <= 1.0) {
            return Err(Error::InvalidArgument(format!("scale must lie in (0, 1], got {scale}")));
        }
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
        }
        let d = self.ambient_dim;
        if eps >= scale * self.inradius {
            return Ok(scale.powi(d as i32) * self.volume);
        }
        let x = eps / scale;
        let mut acc = 0.0;
        for k in 0..=d {
            acc += scale.powi(k as i32) * self.kappa_at(k, x)? * eps.powi((d - k) as i32);
        }
        Ok(acc)
    }
}

/// `lambda_d(G)`.
pub fn generator_volume(rep: &SteinerLikeRep) -> f64 {
    rep.generator_volume()
}

pub fn tube_of_generator(rep: &SteinerLikeRep, eps: f64) -> Result<f64> {
    rep.tube(eps)
}

pub fn tube_of_scaled_copy(rep: &SteinerLikeRep, scale: f64, eps: f64) -> Result<f64> {
    rep.tube_scaled(scale, eps)
}
