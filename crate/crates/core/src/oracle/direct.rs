use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::spray::{FractalSpray, SelfSimilarSystem, SteinerLikeRep};

/// Inner tube volume split at the cutoff index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectSplit {
    /// `sum_k eps^{d-k} sum_{j <= J} l_j^k f_k(eps / l_j)`.
    pub head: f64,
    /// `sum_k kappa_k(G) (eps^{d-k} sum_{j <= J} l_j^k + g^{d-k} sum_{j > J} l_j^d)`.
    pub tail: f64,
    /// Number of unsaturated tiles.
    pub unsaturated: u128,
}

impl DirectSplit {
    pub fn total(&self) -> f64 {
        self.head + self.tail
    }
}

fn zeta_at_dim(spray: &FractalSpray) -> Result<f64> {
    let d = spray.ambient_dim() as f64;
    spray.string().zeta_closed(Complex64::new(d, 0.0)).map(|z| z.re).ok_or(Error::TailUnavailable)
}

/// `V(T, eps)`: unsaturated tiles summed one scale class at a time, plus
/// `lambda(G) (zeta_L(d) - sum_{j <= J} l_j^d)` for the full ones.
pub fn direct_tube(spray: &FractalSpray, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let zeta_d = zeta_at_dim(spray)?;
    let d = spray.ambient_dim() as i32;
    let mut total = CompensatedSum::new();
    for rep in spray.generators() {
        let unsat = spray.string().unsaturated(rep.inradius, eps)?;
        let mut partial = CompensatedSum::new();
        let mut covered = CompensatedSum::new();
        for &(l, cnt) in &unsat {
            partial.add(rep.tube_scaled(l, eps)? * cnt as f64);
            covered.add(l.powi(d) * cnt as f64);
        }
        total.add(partial.value());
        total.add(rep.volume * (zeta_d - covered.value()));
    }
    Ok(total.value())
}

/// The head/tail split of [`direct_tube`], each part summed directly.
pub fn direct_tube_split(spray: &FractalSpray, eps: f64) -> Result<DirectSplit> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let zeta_d = zeta_at_dim(spray)?;
    let d = spray.ambient_dim();
    let mut head = CompensatedSum::new();
    let mut tail = CompensatedSum::new();
    let mut unsaturated = 0u128;
    for rep in spray.generators() {
        let unsat = spray.string().unsaturated(rep.inradius, eps)?;
        let mut covered = CompensatedSum::new();
        for &(l, cnt) in &unsat {
            unsaturated += cnt;
            covered.add(l.powi(d as i32) * cnt as f64);
            for k in 0..=d {
                let w = eps.powi((d - k) as i32) * l.powi(k as i32) * cnt as f64;
                head.add(w * rep.kappa_deviation(k, eps / l)?);
                tail.add(w * rep.kappa_const[k]);
            }
        }
        let full = zeta_d - covered.value();
        for k in 0..=d {
            tail.add(rep.kappa_const[k] * rep.inradius.powi((d - k) as i32) * full);
        }
    }
    Ok(DirectSplit { head: head.value(), tail: tail.value(), unsaturated })
}

/// Word-by-word summation without scale compression: every word of length
/// at most `depth` is a separate tile; deeper tiles must all be saturated.
pub fn direct_tube_naive(system: &SelfSimilarSystem, rep: &SteinerLikeRep, eps: f64, depth: usize) -> Result<f64> {
    let ratios = system.ratios();
    let d = rep.ambient_dim as i32;
    if ratios[0].powi(depth as i32 + 1) * rep.inradius > eps {
        return Err(Error::InvalidArgument(format!("tiles below depth {depth} are not all saturated at eps = {eps}")));
    }
    let mut words = vec![1.0f64];
    let mut sum = 0.0;
    let mut covered = 0.0;
    for level in 0..=depth {
        for &l in &words {
            sum += rep.tube_scaled(l, eps)?;
            covered += l.powi(d);
        }
        if level < depth {
            words = words.iter().flat_map(|&l| ratios.iter().map(move |&r| l * r)).collect();
        }
    }
    let zeta_d = 1.0 / (1.0 - system.phi_real(d as f64));
    Ok(sum + rep.volume * (zeta_d - covered))
}
