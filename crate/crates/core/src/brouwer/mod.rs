//! Discrete Brouwer fixed points on direction fields.

pub mod bad_cube;
pub mod solver;

pub use bad_cube::{boundary_bad_parity, boundary_unit_cubes, is_bad_cube, BadCubes, UnitCube};
pub use solver::{const_rounds_brouwer, one_d_brouwer, shared_face_split};
