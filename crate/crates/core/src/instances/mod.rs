//! Instance families: staircases, one-dimensional hard inputs, direction
//! fields and the grid path reduction.

pub mod field;
pub mod gp;
pub mod io;
pub mod oned;
pub mod schedule;
pub mod staircase;

pub use field::{gen_sink_field, pad_brouwer, verify_zero, Direction, DirectionField};
pub use oned::{gen_1d_hard, OneDHardInstance, OneDKind};
pub use schedule::{ell_schedule, poly_params, PolyParams};
pub use staircase::{gen_const_staircase, gen_poly_staircase, EndSign, StaircaseInstance, StaircaseKind};
