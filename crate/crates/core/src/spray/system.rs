use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::real_pow;
use crate::scaling::moran::moran_root;

/// Scaling ratios of a self-similar system in `R^d`, stored in descending
/// order, together with its Moran (similarity) dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfSimilarSystem {
    ratios: Vec<f64>,
    ambient_dim: usize,
    dimension: f64,
}

impl SelfSimilarSystem {
    /// Validates the ratios (sorting them into descending order) and
    /// requires the nontriviality condition `0 < D < d`.
    pub fn new(mut ratios: Vec<f64>, ambient_dim: usize) -> Result<Self> {
        if ratios.len() < 2 {
            return Err(Error::InvalidSystem(format!("need at least two maps, got {}", ratios.len())));
        }
        if ambient_dim == 0 {
            return Err(Error::InvalidSystem("ambient dimension must be >= 1".into()));
        }
        if let Some(bad) = ratios.iter().find(|r| !(r.is_finite() && **r > 0.0 && **r < 1.0)) {
            return Err(Error::InvalidSystem(format!("scaling ratio {bad} outside (0, 1)")));
        }
        ratios.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let dimension = moran_root(&ratios);
        if !(dimension < ambient_dim as f64 - 1e-12) {
            return Err(Error::InvalidSystem(format!(
                "Moran dimension {dimension} is not below the ambient dimension {ambient_dim}"
            )));
        }
        Ok(SelfSimilarSystem { ratios, ambient_dim, dimension })
    }

    /// Ratios `r_1 >= r_2 >= ... >= r_N`.
    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// The Moran dimension `D`.
    pub fn dimension(&self) -> f64 {
        self.dimension
    }

    /// `phi(s) = sum_n r_n^s`.
    pub fn phi(&self, s: Complex64) -> Complex64 {
        self.ratios.iter().map(|&r| real_pow(r, s)).sum()
    }

    /// `phi'(s) = sum_n r_n^s log r_n`.
    pub fn phi_prime(&self, s: Complex64) -> Complex64 {
        self.ratios.iter().map(|&r| real_pow(r, s) * r.ln()).sum()
    }

    pub fn phi_real(&self, x: f64) -> f64 {
        self.ratios.iter().map(|r| r.powf(x)).sum()
    }
}
