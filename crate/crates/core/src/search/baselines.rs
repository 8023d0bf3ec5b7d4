//! Reference algorithms: sampled-start steepest descent and a logarithmic
//! number of divide-and-conquer rounds.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::{Cube, GridPoint};
use crate::oracle::{argmin_lex, OracleSession, ValueFunction};

use super::report::{HaltReason, RunReport};

/// Default sample count `⌈√(N·2d)⌉` for a grid of `N` points.
pub fn default_warm_start_samples(points: u64, d: usize) -> u64 {
    ((points as f64 * 2.0 * d as f64).sqrt()).ceil() as u64
}

fn report<O: ValueFunction + ?Sized>(
    session: &OracleSession<'_, O>,
    solution: GridPoint,
    halted_by: HaltReason,
) -> RunReport {
    let success = halted_by != HaltReason::RoundLimit && session.verify_local_min(&solution);
    RunReport {
        solution,
        rounds_used: session.rounds_used(),
        queries_used: session.queries_used(),
        halted_by,
        success,
    }
}

/// One steepest-descent step per round from the best of `t` uniform samples.
pub fn warm_start<O: ValueFunction + ?Sized, R: Rng + ?Sized>(
    session: &mut OracleSession<'_, O>,
    t: u64,
    rng: &mut R,
) -> Result<RunReport> {
    if t == 0 {
        return Err(Error::Parameter("warm start needs at least one sample".into()));
    }
    let grid = *session.grid();
    let t = t.min(grid.size());
    let mut batch: Vec<GridPoint> =
        sample(rng, grid.size() as usize, t as usize).into_iter().map(|i| grid.point_at(i as u64)).collect();
    batch.sort();
    let values = session.submit_round(&batch)?;
    let (mut cur, mut cur_v) = {
        let (p, v) = argmin_lex(batch.iter().zip(values)).expect("t >= 1");
        (p.clone(), v)
    };
    loop {
        let nb = grid.neighbors_unchecked(&cur);
        let vals = match session.submit_round(&nb) {
            Ok(v) => v,
            Err(Error::RoundLimitExceeded { .. }) => return Ok(report(session, cur, HaltReason::RoundLimit)),
            Err(e) => return Err(e),
        };
        match argmin_lex(nb.iter().zip(vals)) {
            Some((p, v)) if v < cur_v => {
                cur = p.clone();
                cur_v = v;
            }
            _ => return Ok(report(session, cur, HaltReason::SteepestDescentFixpoint)),
        }
    }
}

/// Halves the current box every round, keeping the half that holds the
/// smallest value seen inside the box, and stops early once the incumbent's
/// neighbours certify it.
pub fn log_rounds_dnc<O: ValueFunction + ?Sized>(session: &mut OracleSession<'_, O>) -> Result<RunReport> {
    let grid = *session.grid();
    let mut boxed: Cube = grid.full_cube();
    let mut incumbent: Option<GridPoint> = None;
    loop {
        if boxed.is_single_point() {
            let p = boxed.low().clone();
            return Ok(report(session, p, HaltReason::Normal));
        }
        let halves = boxed.halves();
        let mut batch: Vec<GridPoint> = halves.iter().flat_map(|c| c.boundary()).collect();
        if let Some(x) = &incumbent {
            batch.extend(grid.neighbors_unchecked(x));
        }
        match session.submit_round(&batch) {
            Ok(_) => {}
            Err(Error::RoundLimitExceeded { .. }) => {
                let best = incumbent.unwrap_or_else(|| boxed.low().clone());
                return Ok(report(session, best, HaltReason::RoundLimit));
            }
            Err(e) => return Err(e),
        }
        let (best, _) = session.min_known_where(|p| boxed.contains(p)).expect("box boundary was queried");
        if certified(session, &best) {
            return Ok(report(session, best, HaltReason::SteepestDescentFixpoint));
        }
        boxed = halves.into_iter().find(|c| c.contains(&best)).expect("halves cover the box");
        incumbent = Some(best);
    }
}

/// Every neighbour of `p` is known and none is smaller.
fn certified<O: ValueFunction + ?Sized>(session: &OracleSession<'_, O>, p: &GridPoint) -> bool {
    let v = *session.known(p).expect("incumbent is known");
    session
        .grid()
        .neighbors_unchecked(p)
        .iter()
        .all(|q| session.known(q).is_some_and(|&w| w >= v))
}
