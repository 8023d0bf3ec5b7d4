//! Divide-and-conquer local search in a fixed number of rounds.
//!
//! Each round tiles the current cube with sub-cubes, queries every sub-cube
//! boundary, and keeps the sub-cube holding the smallest boundary value.
//! Steepest descent from that point can never cross the kept boundary, so
//! the last round's minimum over the whole cube is a local minimum.

use crate::error::{Error, Result};
use crate::grid::{Cube, GridPoint};
use crate::instances::schedule::ell_schedule;
use crate::oracle::{argmin_lex, OracleSession, ValueFunction};

use super::report::{HaltReason, RunReport};

/// Report of a constant-round run, with the chain of kept cubes.
#[derive(Clone, Debug)]
pub struct ConstRunReport {
    pub run: RunReport,
    /// `C_0` (the grid) followed by every kept sub-cube.
    pub chain: Vec<Cube>,
}

/// Block count per axis so that blocks have side close to `target`.
fn blocks_for(cube: &Cube, target: u64) -> Vec<u64> {
    cube.extent().iter().map(|&e| (e / target.max(1)).max(1)).collect()
}

pub fn const_rounds_ls<O: ValueFunction + ?Sized>(
    session: &mut OracleSession<'_, O>,
    k: usize,
) -> Result<ConstRunReport> {
    if k == 0 {
        return Err(Error::Parameter("round count k must be at least 1".into()));
    }
    if let Some(left) = session.rounds_remaining() {
        if left < k {
            return Err(Error::RoundLimitExceeded { limit: session.limits().round_limit.unwrap_or(0) });
        }
    }
    let grid = *session.grid();
    let targets = ell_schedule(grid.side(), grid.d(), k)?;
    let mut cube = grid.full_cube();
    let mut chain = vec![cube.clone()];

    for &target in targets.iter().skip(1) {
        let subs = cube.split_balanced(&blocks_for(&cube, target));
        let batch: Vec<GridPoint> = subs.iter().flat_map(|c| c.boundary()).collect();
        let values = session.submit_round(&batch)?;
        let (best, _) = argmin_lex(batch.iter().zip(values.iter().copied())).expect("non-empty batch");
        let best = best.clone();
        cube = subs.into_iter().find(|c| c.contains(&best)).expect("sub-cubes cover the cube");
        chain.push(cube.clone());
        if cube.is_single_point() {
            return Ok(finish(session, best, chain));
        }
    }

    let batch: Vec<GridPoint> = cube.points().collect();
    let values = session.submit_round(&batch)?;
    let (best, _) = argmin_lex(batch.iter().zip(values.iter().copied())).expect("non-empty cube");
    let best = best.clone();
    Ok(finish(session, best, chain))
}

fn finish<O: ValueFunction + ?Sized>(
    session: &OracleSession<'_, O>,
    solution: GridPoint,
    chain: Vec<Cube>,
) -> ConstRunReport {
    let success = session.verify_local_min(&solution);
    ConstRunReport {
        run: RunReport {
            solution,
            rounds_used: session.rounds_used(),
            queries_used: session.queries_used(),
            halted_by: HaltReason::Normal,
            success,
        },
        chain,
    }
}

/// The interval version: each round queries both endpoints of about
/// `n^{1/k}` disjoint pieces.
pub fn one_d_ls<O: ValueFunction + ?Sized>(
    session: &mut OracleSession<'_, O>,
    k: usize,
) -> Result<ConstRunReport> {
    if session.grid().d() != 1 {
        return Err(Error::Parameter("the interval algorithm needs d = 1".into()));
    }
    const_rounds_ls(session, k)
}
