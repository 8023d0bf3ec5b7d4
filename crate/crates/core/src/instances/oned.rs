//! One-dimensional hard families: a single solution at position `i`.

use crate::error::{domain, Result};
use crate::grid::{Grid, GridPoint};
use crate::oracle::Oracle;

use super::field::DirectionField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OneDKind {
    LocalSearch,
    Brouwer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneDHardInstance {
    grid: Grid,
    n: u64,
    i: i64,
    kind: OneDKind,
}

pub fn gen_1d_hard(n: u64, i: i64, kind: OneDKind) -> Result<OneDHardInstance> {
    if i < 1 || i as u64 > n {
        return domain(format!("solution position {i} outside 1..={n}"));
    }
    Ok(OneDHardInstance { grid: Grid::new(1, n)?, n, i, kind })
}

impl OneDHardInstance {
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn i(&self) -> i64 {
        self.i
    }
    pub fn kind(&self) -> OneDKind {
        self.kind
    }
    pub fn solution(&self) -> GridPoint {
        GridPoint::new(vec![self.i])
    }

    /// Local search: `n − j + 1` left of `i`, `j` right of it, `0` at `i`.
    /// Brouwer: `+1`, `0`, `−1` in the same three regions.
    pub fn value(&self, j: i64) -> i64 {
        use std::cmp::Ordering::*;
        match (self.kind, j.cmp(&self.i)) {
            (_, Equal) => 0,
            (OneDKind::LocalSearch, Less) => self.n as i64 - j + 1,
            (OneDKind::LocalSearch, Greater) => j,
            (OneDKind::Brouwer, Less) => 1,
            (OneDKind::Brouwer, Greater) => -1,
        }
    }

    /// The Brouwer field with the same solution.
    pub fn field(&self) -> DirectionField {
        DirectionField::one_d_hard(self.n, self.i).expect("grid already validated")
    }
}

impl Oracle for OneDHardInstance {
    type Answer = i64;
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn answer(&self, p: &GridPoint) -> i64 {
        self.value(p[0])
    }
}
