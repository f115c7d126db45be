use std::f64::consts::PI;

use crate::spray::SelfSimilarSystem;

/// Tolerance for accepting a rational reconstruction of a log-ratio.
pub const CLASSIFY_TOL: f64 = 1e-12;
/// Largest denominator accepted in a rational reconstruction.
pub const CLASSIFY_MAX_DEN: u64 = 64;

/// Ratios `r_n = r^{k_n}` for a common base `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeStructure {
    pub base: f64,
    /// Exponents aligned with the system's (descending) ratios.
    pub exponents: Vec<u32>,
    /// Oscillatory period `2 pi / log(1/r)`.
    pub period: f64,
}

impl LatticeStructure {
    pub fn degree(&self) -> u32 {
        self.exponents.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Lattice {
    Lattice(LatticeStructure),
    Nonlattice,
}

impl Lattice {
    pub fn structure(&self) -> Option<&LatticeStructure> {
        match self {
            Lattice::Lattice(s) => Some(s),
            Lattice::Nonlattice => None,
        }
    }

    pub fn is_lattice(&self) -> bool {
        matches!(self, Lattice::Lattice(_))
    }
}

/// Best rational approximation `p/q` of `x` with `q <= max_den` satisfying
/// `|x - p/q| <= tol * max(1, |x|)`, by continued fractions.
pub fn rational_approx(x: f64, tol: f64, max_den: u64) -> Option<(u64, u64)> {
    if !(x.is_finite() && x >= 0.0) {
        return None;
    }
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut rem = x;
    let thresh = tol * x.abs().max(1.0);
    for _ in 0..64 {
        let a = rem.floor();
        if a > 1e15 {
            break;
        }
        let a = a as u64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            return None;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= thresh {
            return Some((h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rem - a as f64;
        if frac <= 0.0 {
            return None;
        }
        rem = 1.0 / frac;
    }
    None
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Lattice/nonlattice classification with the default tolerances.
pub fn lattice_classify(system: &SelfSimilarSystem) -> Lattice {
    lattice_classify_with(system, CLASSIFY_TOL, CLASSIFY_MAX_DEN)
}

/// Classifies by rational reconstruction of `log r_n / log r_1`; the base is
/// chosen maximal so that the exponents have gcd 1.
pub fn lattice_classify_with(system: &SelfSimilarSystem, tol: f64, max_den: u64) -> Lattice {
    let logs: Vec<f64> = system.ratios().iter().map(|r| r.ln()).collect();
    let l1 = logs[0];
    let mut fracs = Vec::with_capacity(logs.len());
    for &l in &logs {
        match rational_approx(l / l1, tol, max_den) {
            Some(pq) => fracs.push(pq),
            None => return Lattice::Nonlattice,
        }
    }
    let lcm = fracs.iter().fold(1u64, |acc, &(_, q)| acc / gcd(acc, q) * q);
    let scaled: Vec<u64> = fracs.iter().map(|&(p, q)| p * (lcm / q)).collect();
    let g = scaled.iter().fold(0u64, |acc, &a| gcd(acc, a));
    if g == 0 || scaled.iter().any(|&a| a / g > u32::MAX as u64) {
        return Lattice::Nonlattice;
    }
    let exponents: Vec<u32> = scaled.iter().map(|&a| (a / g) as u32).collect();
    // least-squares base over all ratios
    let num: f64 = exponents.iter().zip(&logs).map(|(&k, &l)| k as f64 * l).sum();
    let den: f64 = exponents.iter().map(|&k| (k as f64).powi(2)).sum();
    let log_base = num / den;
    let consistent =
        exponents.iter().zip(&logs).all(|(&k, &l)| (k as f64 * log_base - l).abs() <= 100.0 * tol * l.abs().max(1.0));
    if !consistent {
        return Lattice::Nonlattice;
    }
    Lattice::Lattice(LatticeStructure { base: log_base.exp(), exponents, period: 2.0 * PI / -log_base })
}
