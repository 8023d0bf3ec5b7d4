//! Probability scores and the per-point cost of blocked windows.

use std::collections::HashSet;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::grid::{folded_segment, Cube, Grid, GridPoint};

/// Largest grid enumerated by [`verify_cost_lemma`].
pub const COST_LIMIT: u64 = 10_000_000;

/// The full corner window `{x + o : o ∈ [0, ℓ−1]^d}`, unclipped.
pub fn corner_window(x: &GridPoint, ell: u64) -> Cube {
    Cube::new(x.clone(), vec![ell; x.dim()]).expect("positive side")
}

/// Fraction of `y ∈ W(x)` whose folded segment from `x` avoids `queried`.
pub fn probability_score(x: &GridPoint, queried: &HashSet<GridPoint>, ell: u64) -> Ratio<u64> {
    let w = corner_window(x, ell);
    let free = w
        .points()
        .filter(|y| {
            let fs = folded_segment(x, y);
            !queried.iter().any(|q| fs.contains(q))
        })
        .count() as u64;
    Ratio::new(free, w.volume())
}

/// `B(x, y) = {z ∈ W(x) : y ∈ FS(x, z)}`.
pub fn blocked_set(x: &GridPoint, y: &GridPoint, ell: u64) -> Vec<GridPoint> {
    corner_window(x, ell).points().filter(|z| folded_segment(x, z).contains(y)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostCheck {
    pub total: Ratio<u64>,
    pub bound: u64,
    pub pass: bool,
}

/// `Σ_x |B(x, y)| / ℓ^d` over grid points `x` with `y ∈ W(x)`, against the
/// bound `d·ℓ`.
pub fn verify_cost_lemma(y: &GridPoint, ell: u64, m: u64, d: usize) -> Result<CostCheck> {
    let grid = Grid::new(d, m)?;
    if grid.size() > COST_LIMIT {
        return Err(Error::ScaleGuard { what: "cost enumeration", needed: grid.size() as u128, limit: COST_LIMIT as u128 });
    }
    if ell == 0 {
        return Err(Error::Parameter("window side must be positive".into()));
    }
    grid.check(y)?;
    let lows: Vec<i64> = y.coords().iter().map(|&c| (c - ell as i64 + 1).max(grid.lo())).collect();
    let owners = Cube::from_bounds(&lows, y.coords())?;
    let blocked: u64 = owners.points().map(|x| blocked_set(&x, y, ell).len() as u64).sum();
    let total = Ratio::new(blocked, ell.pow(d as u32));
    let bound = d as u64 * ell;
    Ok(CostCheck { total, bound, pass: total <= Ratio::from_integer(bound) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> GridPoint {
        GridPoint::new(c.to_vec())
    }

    #[test]
    fn score_examples() {
        let x = pt(&[2, 2]);
        assert_eq!(probability_score(&x, &HashSet::new(), 3), Ratio::from_integer(1));
        let one: HashSet<GridPoint> = [pt(&[3, 2])].into_iter().collect();
        assert_eq!(probability_score(&x, &one, 2), Ratio::new(1, 2));
        let mut more = one.clone();
        more.insert(pt(&[2, 3]));
        assert!(probability_score(&x, &more, 2) <= probability_score(&x, &one, 2));
    }

    #[test]
    fn score_matches_direct_enumeration() {
        let x = pt(&[1, 1, 1]);
        let q: HashSet<GridPoint> = [pt(&[2, 1, 1]), pt(&[3, 3, 2]), pt(&[1, 2, 3])].into_iter().collect();
        let ell = 3u64;
        let w = corner_window(&x, ell);
        let blocked = w.points().filter(|y| folded_segment(&x, y).points().iter().any(|p| q.contains(p))).count();
        assert_eq!(probability_score(&x, &q, ell), Ratio::new(27 - blocked as u64, 27));
    }

    #[test]
    fn cost_d1_suffix_intervals() {
        // owners y-2, y-1, y block 1, 2, 0 targets
        let c = verify_cost_lemma(&pt(&[5]), 3, 10, 1).unwrap();
        assert_eq!(c.total, Ratio::from_integer(1));
        assert!(c.pass);
        assert_eq!(blocked_set(&pt(&[3]), &pt(&[5]), 3), vec![pt(&[5])]);
    }

    #[test]
    fn cost_d2_interior() {
        let c = verify_cost_lemma(&pt(&[3, 3]), 2, 6, 2).unwrap();
        assert!(c.pass);
        assert_eq!(c.bound, 4);
        // owners (2,2),(3,2),(2,3),(3,3) block 1, 1, 2, 0 targets
        assert_eq!(c.total, Ratio::new(4, 4));
    }

    #[test]
    fn origin_corner_costs_nothing() {
        assert_eq!(verify_cost_lemma(&pt(&[1, 1]), 3, 6, 2).unwrap().total, Ratio::from_integer(0));
    }
}
