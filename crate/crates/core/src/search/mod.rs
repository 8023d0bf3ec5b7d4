//! Upper-bound algorithms and baselines for local search.

pub mod baselines;
pub mod const_rounds;
pub mod poly_rounds;
pub mod report;

pub use baselines::{log_rounds_dnc, warm_start};
pub use const_rounds::{const_rounds_ls, one_d_ls, ConstRunReport};
pub use poly_rounds::{poly_rounds_ls, PolyPlan, PolyRunReport};
pub use report::{HaltReason, RunReport};
