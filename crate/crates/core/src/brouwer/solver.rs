//! Constant-round Brouwer solvers.
//!
//! Sub-cubes share their faces, so a bad face interior to the current cube
//! is counted by both neighbours and the parities of the pieces add up to
//! the parity of the whole. Some piece is odd and therefore holds a zero.

use crate::error::{Error, Result};
use crate::grid::{Cube, GridPoint};
use crate::instances::schedule::ell_schedule;
use crate::instances::Direction;
use crate::oracle::{Oracle, OracleSession};
use crate::search::{ConstRunReport, HaltReason, RunReport};

use super::bad_cube::BadCubes;

fn check_rounds<O: Oracle + ?Sized>(session: &OracleSession<'_, O>, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Parameter("round count k must be at least 1".into()));
    }
    match session.rounds_remaining() {
        Some(left) if left < k => {
            Err(Error::RoundLimitExceeded { limit: session.limits().round_limit.unwrap_or(0) })
        }
        _ => Ok(()),
    }
}

/// Splits the edges of every axis into `blocks[a]` near-equal runs. Pieces
/// overlap on their shared faces.
pub fn shared_face_split(cube: &Cube, blocks: &[u64]) -> Vec<Cube> {
    let edges: Vec<u64> = cube.extent().iter().map(|&e| e.saturating_sub(1).max(1)).collect();
    let edge_cube = Cube::new(cube.low().clone(), edges).expect("positive extents");
    edge_cube
        .split_balanced(blocks)
        .into_iter()
        .map(|c| {
            let ext = c
                .extent()
                .iter()
                .zip(cube.extent())
                .map(|(&e, &outer)| (e + 1).min(outer))
                .collect();
            Cube::new(c.low().clone(), ext).expect("positive extents")
        })
        .collect()
}

fn blocks_for(cube: &Cube, target: u64) -> Vec<u64> {
    cube.extent().iter().map(|&e| (e.saturating_sub(1) / target.max(1)).max(1)).collect()
}

fn finish<O: Oracle<Answer = Direction> + ?Sized>(
    session: &OracleSession<'_, O>,
    solution: GridPoint,
    chain: Vec<Cube>,
) -> ConstRunReport {
    let success = session.audit(&solution).is_zero();
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

fn scan_for_zero<O: Oracle<Answer = Direction> + ?Sized>(
    session: &mut OracleSession<'_, O>,
    cube: &Cube,
) -> Result<GridPoint> {
    let batch: Vec<GridPoint> = cube.points().collect();
    let answers = session.submit_round(&batch)?;
    batch
        .into_iter()
        .zip(answers)
        .find(|(_, a)| a.is_zero())
        .map(|(p, _)| p)
        .ok_or_else(|| Error::Domain("no zero inside the final cube".into()))
}

/// Runs on a padded field, whose outer boundary holds exactly one bad face.
pub fn const_rounds_brouwer<O: Oracle<Answer = Direction> + ?Sized>(
    session: &mut OracleSession<'_, O>,
    k: usize,
) -> Result<ConstRunReport> {
    check_rounds(session, k)?;
    let grid = *session.grid();
    let edges = grid.side().saturating_sub(1).max(1);
    let targets = ell_schedule(edges, grid.d(), k)?;
    let mut cube = grid.full_cube();
    let mut chain = vec![cube.clone()];

    for (round, &target) in targets.iter().enumerate().skip(1) {
        let subs = shared_face_split(&cube, &blocks_for(&cube, target));
        let batch: Vec<GridPoint> = subs.iter().flat_map(|c| c.boundary()).collect();
        session.submit_round(&batch)?;
        let known = &*session;
        let mut bad = BadCubes::new(|p: &GridPoint| *known.known(p).expect("shell points are queried"));
        let odd = subs.into_iter().find(|c| bad.boundary_bad_count(c) % 2 == 1);
        cube = odd.ok_or(Error::NoOddSubcube { round })?;
        chain.push(cube.clone());
    }

    let solution = scan_for_zero(session, &cube)?;
    Ok(finish(session, solution, chain))
}

/// Interval version: pieces share endpoints, and the kept piece points
/// inward at both ends.
pub fn one_d_brouwer<O: Oracle<Answer = Direction> + ?Sized>(
    session: &mut OracleSession<'_, O>,
    k: usize,
) -> Result<ConstRunReport> {
    if session.grid().d() != 1 {
        return Err(Error::Parameter("the interval algorithm needs d = 1".into()));
    }
    check_rounds(session, k)?;
    let grid = *session.grid();
    let edges = grid.side().saturating_sub(1).max(1);
    let targets = ell_schedule(edges, 1, k)?;
    let mut cube = grid.full_cube();
    let mut chain = vec![cube.clone()];

    for (round, &target) in targets.iter().enumerate().skip(1) {
        let subs = shared_face_split(&cube, &blocks_for(&cube, target));
        let mut batch: Vec<GridPoint> = subs.iter().map(|c| c.low().clone()).collect();
        batch.push(cube.high());
        let answers = session.submit_round(&batch)?;
        if let Some(i) = answers.iter().position(|a| a.is_zero()) {
            let p = batch[i].clone();
            return Ok(finish(session, p, chain));
        }
        let sign = |p: &GridPoint| session.known(p).map(|a| a.signum());
        let inward = |c: &Cube| sign(c.low()) == Some(1) && sign(&c.high()) == Some(-1);
        cube = subs.iter().find(|c| inward(c)).cloned().ok_or(Error::NoOddSubcube { round })?;
        chain.push(cube.clone());
    }

    let solution = scan_for_zero(session, &cube)?;
    Ok(finish(session, solution, chain))
}
