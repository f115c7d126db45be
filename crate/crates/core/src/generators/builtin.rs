use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::generators::expr::{Expr, Piecewise};
use crate::spray::{validate_rep, CoefficientFn, SteinerLikeRep};

/// Samples used when validating a representation at construction.
pub const CONSTRUCTION_SAMPLES: usize = 200;

/// One piece of a custom representation: coefficient expressions valid up to
/// (and including) `upto`, starting just above the previous piece's bound.
#[derive(Debug, Clone, PartialEq)]
pub struct PieceSpec {
    pub upto: String,
    pub kappa: Vec<String>,
}

impl PieceSpec {
    pub fn new(upto: &str, kappa: &[&str]) -> Self {
        PieceSpec { upto: upto.to_string(), kappa: kappa.iter().map(|s| s.to_string()).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinName {
    Interval,
    Square,
    EquilateralTriangle,
    Disk,
    SierpinskiGasketGen,
    SierpinskiCarpetGen,
    CantorCarpetGen,
}

impl BuiltinName {
    pub const ALL: [BuiltinName; 7] = [
        BuiltinName::Interval,
        BuiltinName::Square,
        BuiltinName::EquilateralTriangle,
        BuiltinName::Disk,
        BuiltinName::SierpinskiGasketGen,
        BuiltinName::SierpinskiCarpetGen,
        BuiltinName::CantorCarpetGen,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BuiltinName::Interval => "interval",
            BuiltinName::Square => "square",
            BuiltinName::EquilateralTriangle => "equilateral_triangle",
            BuiltinName::Disk => "disk",
            BuiltinName::SierpinskiGasketGen => "sierpinski_gasket_gen",
            BuiltinName::SierpinskiCarpetGen => "sierpinski_carpet_gen",
            BuiltinName::CantorCarpetGen => "cantor_carpet_gen",
        }
    }

    /// Meaning of the `size` argument.
    pub fn size_meaning(self) -> &'static str {
        match self {
            BuiltinName::Interval => "length",
            BuiltinName::Square | BuiltinName::EquilateralTriangle => "side length",
            BuiltinName::Disk => "radius",
            BuiltinName::SierpinskiGasketGen | BuiltinName::SierpinskiCarpetGen | BuiltinName::CantorCarpetGen => {
                "side length of the initial figure"
            }
        }
    }
}

impl fmt::Display for BuiltinName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BuiltinName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BuiltinName::ALL.into_iter().find(|b| b.as_str() == s).ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

struct Recipe {
    d: usize,
    g: f64,
    pieces: Vec<PieceSpec>,
    volume: f64,
}

fn triangle(side: f64) -> Recipe {
    Recipe {
        d: 2,
        g: side / (2.0 * 3f64.sqrt()),
        pieces: vec![PieceSpec::new("g", &["-3*sqrt(3)", "6*sqrt(3)*g", "0"])],
        volume: 3f64.sqrt() / 4.0 * side * side,
    }
}

fn square(side: f64) -> Recipe {
    Recipe { d: 2, g: side / 2.0, pieces: vec![PieceSpec::new("g", &["-4", "8*g", "0"])], volume: side * side }
}

fn recipe(name: BuiltinName, size: f64) -> Recipe {
    match name {
        BuiltinName::Interval => {
            Recipe { d: 1, g: size / 2.0, pieces: vec![PieceSpec::new("g", &["2", "0"])], volume: size }
        }
        BuiltinName::Square => square(size),
        BuiltinName::EquilateralTriangle => triangle(size),
        BuiltinName::Disk => Recipe {
            d: 2,
            g: size,
            pieces: vec![PieceSpec::new("g", &["-pi", "2*pi*g", "0"])],
            volume: PI * size * size,
        },
        BuiltinName::SierpinskiGasketGen => triangle(size / 2.0),
        BuiltinName::SierpinskiCarpetGen => square(size / 3.0),
        BuiltinName::CantorCarpetGen => Recipe {
            d: 2,
            g: size * 2f64.sqrt() / 6.0,
            pieces: vec![
                PieceSpec::new("g/sqrt(2)", &["pi - 8", "12*sqrt(2)*g", "0"]),
                PieceSpec::new("g", &["pi - 4*arccos(g/(eps*sqrt(2)))", "2*g/eps*sqrt(2*eps^2 - g^2)", "8*g^2"]),
            ],
            // the cross: unit square minus four corner squares of side 1/3
            volume: 5.0 / 9.0 * size * size,
        },
    }
}

/// A built-in generator representation, validated.
pub fn builtin(name: BuiltinName, size: f64) -> Result<SteinerLikeRep> {
    if !(size > 0.0 && size.is_finite()) {
        return Err(Error::InvalidArgument(format!("size must be positive, got {size}")));
    }
    let r = recipe(name, size);
    build(name.as_str(), r.d, r.g, &r.pieces, Some(r.volume))
}

/// The textual pieces a builtin is assembled from.
pub fn builtin_pieces(name: BuiltinName, size: f64) -> (usize, f64, Vec<PieceSpec>) {
    let r = recipe(name, size);
    (r.d, r.g, r.pieces)
}

/// A user-supplied representation: `d + 1` coefficient expressions per
/// piece, pieces ordered by their upper bound, the last one ending at `g`.
pub fn custom_rep(d: usize, g: f64, pieces: &[PieceSpec]) -> Result<SteinerLikeRep> {
    build("custom", d, g, pieces, None)
}

/// As [`custom_rep`] with a known measure of the generator, so that the
/// volume identity is checked against it.
pub fn custom_rep_with_volume(d: usize, g: f64, pieces: &[PieceSpec], volume: f64) -> Result<SteinerLikeRep> {
    build("custom", d, g, pieces, Some(volume))
}

/// Parses and assembles a representation without running validation, so
/// that a failing candidate can still be inspected with `validate_rep`.
pub fn assemble_rep(name: &str, d: usize, g: f64, pieces: &[PieceSpec], volume: Option<f64>) -> Result<SteinerLikeRep> {
    if d == 0 {
        return Err(Error::InvalidRep("ambient dimension must be >= 1".into()));
    }
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::InvalidRep(format!("inradius must be positive, got {g}")));
    }
    if pieces.is_empty() {
        return Err(Error::Grammar("no pieces given".into()));
    }
    let mut per_k: Vec<Vec<(f64, Expr)>> = vec![Vec::with_capacity(pieces.len()); d + 1];
    for (i, p) in pieces.iter().enumerate() {
        if p.kappa.len() != d + 1 {
            return Err(Error::Grammar(format!(
                "piece {i} has {} coefficient expressions, expected {}",
                p.kappa.len(),
                d + 1
            )));
        }
        let ub_expr = Expr::parse(&p.upto, g)?;
        if !ub_expr.is_constant() {
            return Err(Error::Grammar(format!("piece bound `{}` depends on eps", p.upto)));
        }
        let mut ub = ub_expr.eval(0.0);
        if i + 1 == pieces.len() && (ub - g).abs() <= 1e-12 * g {
            ub = g;
        }
        for (k, src) in p.kappa.iter().enumerate() {
            per_k[k].push((ub, Expr::parse(src, g)?));
        }
    }
    let kappa =
        per_k.into_iter().map(|ps| Piecewise::new(ps, g).map(CoefficientFn::Piecewise)).collect::<Result<Vec<_>>>()?;
    SteinerLikeRep::new(name, d, g, kappa, volume)
}

fn build(name: &str, d: usize, g: f64, pieces: &[PieceSpec], volume: Option<f64>) -> Result<SteinerLikeRep> {
    let rep = assemble_rep(name, d, g, pieces, volume)?;
    let report = validate_rep(&rep, CONSTRUCTION_SAMPLES)?;
    if let Some(bad) = report.failures().next() {
        return Err(Error::ValidationFailure(format!(
            "{}: {} (worst {:.3e}{})",
            name,
            bad.name,
            bad.worst_value,
            bad.worst_eps.map(|e| format!(" at eps={e:.6e}")).unwrap_or_default()
        )));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn every_builtin_validates() {
        for name in BuiltinName::ALL {
            let rep = builtin(name, 1.0).unwrap();
            let rel = (rep.volume_from_constants() - rep.volume).abs() / rep.volume;
            assert!(rel <= 1e-12, "{name}: {rel}");
        }
    }

    #[test]
    fn cantor_carpet_constants() {
        let rep = builtin(BuiltinName::CantorCarpetGen, 1.0).unwrap();
        assert_relative_eq!(rep.inradius, 2f64.sqrt() / 6.0, epsilon = 1e-16);
        assert_eq!(rep.kappa_const[0], 0.0);
        assert_relative_eq!(rep.kappa_const[1], 2f64.sqrt() / 3.0, max_relative = 1e-15);
        assert_relative_eq!(rep.kappa_const[2], 4.0 / 9.0, max_relative = 1e-15);
        assert!(!rep.monophase);
        let v = rep.tube(1.0 / 6.0).unwrap();
        assert_relative_eq!(v, (PI + 16.0) / 36.0, max_relative = 1e-14);
    }

    #[test]
    fn monophase_flags() {
        for name in BuiltinName::ALL {
            let rep = builtin(name, 1.0).unwrap();
            assert_eq!(rep.monophase, name != BuiltinName::CantorCarpetGen, "{name}");
        }
    }

    #[test]
    fn disk_is_an_annulus() {
        let rep = builtin(BuiltinName::Disk, 1.0).unwrap();
        for eps in [0.1, 0.5, 0.9] {
            let annulus = PI - PI * (1.0 - eps) * (1.0 - eps);
            assert_relative_eq!(rep.tube(eps).unwrap(), annulus, max_relative = 1e-14);
        }
    }

    #[test]
    fn unit_square_at_a_tenth() {
        let rep = builtin(BuiltinName::Square, 1.0).unwrap();
        assert_relative_eq!(rep.tube(0.1).unwrap(), 0.36, max_relative = 1e-14);
        assert_eq!(rep.generator_volume(), 1.0);
    }

    #[test]
    fn custom_reentry_matches_builtin_exactly() {
        let (d, g, pieces) = builtin_pieces(BuiltinName::CantorCarpetGen, 1.0);
        let custom = custom_rep(d, g, &pieces).unwrap();
        let built = builtin(BuiltinName::CantorCarpetGen, 1.0).unwrap();
        assert_eq!(custom.kappa, built.kappa);
        assert_eq!(custom.kappa_const, built.kappa_const);
        for i in 1..=50 {
            let eps = g * i as f64 / 50.0;
            assert_eq!(custom.tube(eps).unwrap(), built.tube(eps).unwrap());
        }
    }

    #[test]
    fn uncovered_pieces_are_a_grammar_error() {
        let pieces = [PieceSpec::new("g/2", &["-4", "8*g", "0"])];
        assert!(matches!(custom_rep(2, 0.5, &pieces), Err(Error::Grammar(_))));
    }

    #[test]
    fn perturbed_volume_fails_validation() {
        let pieces = [PieceSpec::new("g", &["-4", "8*g + 1", "0"])];
        let err = custom_rep_with_volume(2, 0.5, &pieces, 1.0).unwrap_err();
        assert!(matches!(err, Error::ValidationFailure(ref m) if m.contains("volume_identity")), "{err:?}");
    }

    #[test]
    fn unknown_name() {
        assert!(matches!("koch".parse::<BuiltinName>(), Err(Error::UnknownName(_))));
    }
}
