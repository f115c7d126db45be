//! Built-in generators, the coefficient expression grammar, and the
//! recurrence engine for generators without a closed form.

pub mod builtin;
pub mod expr;
pub mod recurrence;

pub use builtin::{assemble_rep, builtin, builtin_pieces, custom_rep, custom_rep_with_volume, BuiltinName, PieceSpec};
pub use expr::{Expr, Piecewise};
pub use recurrence::{ushape_solid_term, ushape_tube, RecurrenceRep};
