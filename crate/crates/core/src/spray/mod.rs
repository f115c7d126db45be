//! Domain types: fractal strings, self-similar systems, Steiner-like
//! generator representations and the sprays built from them.

pub mod rep;
pub mod string;
pub mod system;
pub mod validate;

pub use rep::{generator_volume, tube_of_generator, tube_of_scaled_copy, CoefficientFn, SteinerLikeRep};
pub use string::{cutoff_index, FractalString, ScaleMultiset, StringSource};
pub use system::SelfSimilarSystem;
pub use validate::{validate_rep, CheckResult, ValidationReport};

use crate::error::{Error, Result};

/// Scaled copies of one or more generators, one copy of each per string
/// entry. Multi-generator quantities are sums of single-generator ones.
#[derive(Debug, Clone, PartialEq)]
pub struct FractalSpray {
    string: FractalString,
    generators: Vec<SteinerLikeRep>,
}

impl FractalSpray {
    pub fn new(string: FractalString, generator: SteinerLikeRep) -> Result<Self> {
        Self::with_generators(string, vec![generator])
    }

    pub fn with_generators(string: FractalString, generators: Vec<SteinerLikeRep>) -> Result<Self> {
        let first =
            generators.first().ok_or_else(|| Error::InvalidArgument("a spray needs at least one generator".into()))?;
        let d = first.ambient_dim;
        if let Some(g) = generators.iter().find(|g| g.ambient_dim != d) {
            return Err(Error::DimensionMismatch { string: d, generator: g.ambient_dim });
        }
        if let Some(sd) = string.dim() {
            if sd != d {
                return Err(Error::DimensionMismatch { string: sd, generator: d });
            }
        }
        Ok(FractalSpray { string, generators })
    }

    pub fn string(&self) -> &FractalString {
        &self.string
    }

    pub fn generators(&self) -> &[SteinerLikeRep] {
        &self.generators
    }

    /// The single generator; panics on multi-generator sprays only through
    /// misuse, so callers that accept several use [`Self::generators`].
    pub fn generator(&self) -> &SteinerLikeRep {
        &self.generators[0]
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators[0].ambient_dim
    }

    pub fn system(&self) -> Option<&SelfSimilarSystem> {
        self.string.system()
    }

    /// Largest inradius over the generators: above it every tile is full.
    pub fn max_inradius(&self) -> f64 {
        self.generators.iter().map(|g| g.inradius).fold(0.0, f64::max)
    }

    pub fn is_monophase(&self) -> bool {
        self.generators.iter().all(|g| g.monophase)
    }

    /// The single-generator spray for generator `i`.
    pub fn channel(&self, i: usize) -> FractalSpray {
        FractalSpray { string: self.string.clone(), generators: vec![self.generators[i].clone()] }
    }
}
