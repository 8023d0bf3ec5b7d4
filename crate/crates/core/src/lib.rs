//! Query-complexity laboratory for round-limited local search and discrete
//! Brouwer fixed points on `[n]^d` grids.
//!
//! Algorithms talk to instances only through an [`oracle::OracleSession`],
//! which batches queries into rounds and counts every charged point.

pub mod bench;
pub mod brouwer;
pub mod error;
pub mod grid;
pub mod instances;
pub mod lb;
pub mod oracle;
pub mod registry;
pub mod rng;
pub mod search;

pub use error::{Error, Result};
pub use grid::{Cube, Grid, GridPoint};
