//! Scaling zeta function of a fractal string: evaluation, Moran dimension,
//! lattice classification, complex dimensions and residues.

pub mod lattice;
pub mod moran;
pub mod roots;
pub mod series;

pub use lattice::{lattice_classify, lattice_classify_with, Lattice, LatticeStructure};
pub use moran::moran_dimension;
pub use roots::{
    complex_dimensions, lattice_lines, residue_at, residue_lattice, strip_lower_bound, ComplexDimensionSet,
    LatticeLine, ScalingDim, Window,
};
pub use series::{zeta_eval, zeta_series_bounded, zeta_series_eval, SeriesValue};
