//! Inner tube formulas for fractal sprays and self-similar tilings.
//!
//! The inner parallel volume `V(T, ε)` of a fractal spray is expressed as a
//! sum of residues of its tubular zeta function `ζ_T(ε, s)` over the complex
//! dimensions of the spray. This crate evaluates those residue sums and checks
//! each one against an exact summation over the tiles themselves.
//!
//! Layout:
//!
//! * [`spray`]: domain types (strings, self-similar systems, Steiner-like
//!   generator representations) and elementary tube evaluations.
//! * [`scaling`]: scaling zeta function, Moran dimension, lattice detection,
//!   complex dimensions and their residues.
//! * [`tubular`]: the tubular zeta function, its head/tail split and residues.
//! * [`formula`]: assembled tube formulas, exact and with screen error term.
//! * [`oracle`]: ground truth by direct tile summation, polygon grids and
//!   Apollonian packings.
//! * [`generators`]: built-in generators, the coefficient expression grammar
//!   and the U-shaped recurrence engine.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod formula;
pub mod generators;
pub mod numeric;
pub mod oracle;
pub mod scaling;
pub mod spray;
pub mod tubular;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use formula::{Screen, TruncationSpec, TubeFormula, TubeValue};
pub use generators::{builtin, custom_rep, BuiltinName, Expr, PieceSpec, RecurrenceRep};
pub use oracle::{apollonian_string, direct_tube, enumerate_scales, ApollonianPacking, Polygon};
pub use scaling::{
    complex_dimensions, lattice_classify, moran_dimension, residue_at, zeta_eval, zeta_series_eval,
    ComplexDimensionSet, Lattice, LatticeStructure, Window,
};
pub use spray::{
    cutoff_index, FractalSpray, FractalString, ScaleMultiset, SelfSimilarSystem, SteinerLikeRep, StringSource,
};
pub use tubular::{contour_residue, TubularZetaContext};
