//! Ground truth: direct tile summation, a grid oracle for polygons and
//! Apollonian packings.

pub mod apollonian;
pub mod direct;
pub mod enumerate;
pub mod polygon;

pub use apollonian::{apollonian_string, apollonian_swap, descartes_form, ApollonianPacking};
pub use direct::{direct_tube, direct_tube_naive, direct_tube_split, DirectSplit};
pub use enumerate::{enumerate_scales, enumerate_scales_bounded};
pub use polygon::{polygon_inner_volume, Polygon};
