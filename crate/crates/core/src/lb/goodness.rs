//! Good staircases against a fixed deterministic algorithm.
//!
//! The algorithm plays rounds against the staircase value function and is
//! handed `x_j` after round `j` for every `j` below the staircase length. A
//! staircase is good when, for every `0 < j < length`, rounds `1..=j` never
//! touch a folded segment after `x_j`.

use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{folded_segment, Cube, Grid, GridPoint};
use crate::instances::staircase::const_staircase_from_indices;
use crate::instances::{EndSign, StaircaseInstance};

/// Largest staircase count enumerated by [`enumerate_goodness`].
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Side `m` grid and window schedule shared by every staircase of a toy run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Toy {
    pub grid: Grid,
    pub ells: Vec<u64>,
}

impl Toy {
    /// Grid of side `Σ ℓ_j`.
    pub fn new(d: usize, ells: Vec<u64>) -> Result<Self> {
        if ells.is_empty() || ells.contains(&0) {
            return Err(Error::Parameter("window sides must be positive".into()));
        }
        let grid = Grid::new(d, ells.iter().sum())?;
        Ok(Toy { grid, ells })
    }

    pub fn d(&self) -> usize {
        self.grid.d()
    }

    /// `L^{(t)} = Π_{j<t} ℓ_j^d`.
    pub fn count(&self, length: usize) -> Option<u64> {
        self.ells[..length].iter().try_fold(1u64, |acc, &l| acc.checked_mul(l.checked_pow(self.d() as u32)?))
    }

    /// Window indices of staircase number `idx` of the given length, first
    /// step most significant.
    pub fn indices(&self, length: usize, mut idx: u64) -> Vec<u64> {
        let mut out = vec![0; length];
        for j in (0..length).rev() {
            let radix = self.ells[j].pow(self.d() as u32);
            out[j] = idx % radix;
            idx /= radix;
        }
        out
    }

    pub fn staircase(&self, indices: &[u64]) -> StaircaseInstance {
        const_staircase_from_indices(self.grid, &self.ells, indices, EndSign::Minus)
            .expect("windows of a toy schedule fit its grid")
    }

    /// `W_j(x)`, the corner window of side `ℓ_j`, clipped to the grid.
    pub fn window(&self, x: &GridPoint, j: usize) -> Cube {
        let high: Vec<i64> = x.coords().iter().map(|&c| (c + self.ells[j] as i64 - 1).min(self.grid.hi())).collect();
        Cube::from_bounds(x.coords(), &high).expect("window corner is in the grid")
    }
}

/// One played round as the algorithm sees it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundView {
    pub batch: Vec<GridPoint>,
    pub answers: Vec<i64>,
    /// The connecting point revealed after this round, if any.
    pub granted: Option<GridPoint>,
}

/// A deterministic round-batch strategy with a per-round query budget.
pub trait AlgorithmUnderTest: Sync {
    fn name(&self) -> &'static str;
    fn budget(&self) -> Option<u64>;
    fn next_batch(&self, toy: &Toy, history: &[RoundView]) -> Vec<GridPoint>;
}

/// Queries nothing.
pub struct ZeroQuery;

impl AlgorithmUnderTest for ZeroQuery {
    fn name(&self) -> &'static str {
        "zero_query"
    }
    fn budget(&self) -> Option<u64> {
        Some(0)
    }
    fn next_batch(&self, _: &Toy, _: &[RoundView]) -> Vec<GridPoint> {
        Vec::new()
    }
}

/// Queries the whole grid in round 1 and nothing afterwards.
pub struct FullGridRound1;

impl AlgorithmUnderTest for FullGridRound1 {
    fn name(&self) -> &'static str {
        "full_grid_round1"
    }
    fn budget(&self) -> Option<u64> {
        None
    }
    fn next_batch(&self, toy: &Toy, history: &[RoundView]) -> Vec<GridPoint> {
        if history.is_empty() {
            toy.grid.points().collect()
        } else {
            Vec::new()
        }
    }
}

/// Divide and conquer inside the window of the latest revealed point: tile
/// it with blocks of the next window side and query an evenly spaced
/// subsample of the block boundaries, capped at `budget`. With no new point
/// revealed, it keeps the block holding the smallest answer.
pub struct UniformBoundaryDnc {
    pub budget: u64,
}

impl UniformBoundaryDnc {
    fn region(&self, toy: &Toy, history: &[RoundView]) -> (Cube, usize) {
        let grants: Vec<&GridPoint> = history.iter().filter_map(|r| r.granted.as_ref()).collect();
        let j = grants.len();
        match (history.last(), grants.last()) {
            (Some(last), Some(g)) if last.granted.is_some() && j < toy.ells.len() => (toy.window(g, j), j),
            (Some(last), _) => {
                let (prev, pj) = self.region(toy, &history[..history.len() - 1]);
                let best = last
                    .batch
                    .iter()
                    .zip(&last.answers)
                    .min_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(b.0)))
                    .map(|(p, _)| p.clone());
                let side = toy.ells.get(pj + 1).copied().unwrap_or(1);
                let kept = best.and_then(|b| prev.partition(side).ok()?.into_iter().find(|c| c.contains(&b)));
                (kept.unwrap_or(prev), pj + 1)
            }
            (None, _) => (toy.grid.full_cube(), 0),
        }
    }
}

impl AlgorithmUnderTest for UniformBoundaryDnc {
    fn name(&self) -> &'static str {
        "uniform_boundary_dnc"
    }
    fn budget(&self) -> Option<u64> {
        Some(self.budget)
    }
    fn next_batch(&self, toy: &Toy, history: &[RoundView]) -> Vec<GridPoint> {
        let (region, j) = self.region(toy, history);
        let side = toy.ells.get(j + 1).copied().unwrap_or(1);
        let mut shell: Vec<GridPoint> = match region.partition(side) {
            Ok(blocks) => blocks.iter().flat_map(|c| c.boundary()).collect(),
            Err(_) => Vec::new(),
        };
        shell.sort();
        shell.dedup();
        let len = shell.len() as u64;
        if len <= self.budget {
            return shell;
        }
        (0..self.budget).map(|i| shell[(i * len / self.budget) as usize].clone()).collect()
    }
}

/// Plays `length` rounds of `alg` against the staircase, revealing `x_j`
/// after round `j < length`.
pub fn simulate(alg: &dyn AlgorithmUnderTest, toy: &Toy, s: &StaircaseInstance) -> Result<Vec<RoundView>> {
    let x = s.connecting_points();
    let length = x.len() - 1;
    let mut history: Vec<RoundView> = Vec::with_capacity(length);
    for round in 1..=length {
        let batch = alg.next_batch(toy, &history);
        if let Some(b) = alg.budget() {
            if batch.len() as u64 > b {
                return Err(Error::QueryBudgetExceeded { budget: b, spent: 0, requested: batch.len() as u64 });
            }
        }
        for p in &batch {
            toy.grid.check(p)?;
        }
        let answers = batch.iter().map(|p| s.value_at(p)).collect();
        let granted = (round < length).then(|| x[round].clone());
        history.push(RoundView { batch, answers, granted });
    }
    Ok(history)
}

/// Goodness of a played transcript.
pub fn is_good_transcript(s: &StaircaseInstance, history: &[RoundView]) -> bool {
    let x = s.connecting_points();
    let length = x.len() - 1;
    let mut queried: HashSet<&GridPoint> = HashSet::new();
    for j in 1..length {
        queried.extend(history[j - 1].batch.iter());
        let hit = (j..length).any(|r| folded_segment(&x[r], &x[r + 1]).points().iter().any(|p| queried.contains(p)));
        if hit {
            return false;
        }
    }
    true
}

pub fn classify_good(alg: &dyn AlgorithmUnderTest, toy: &Toy, s: &StaircaseInstance) -> Result<bool> {
    Ok(is_good_transcript(s, &simulate(alg, toy, s)?))
}

/// Goodness of every staircase of one length, by tuple index.
pub fn classify_all(alg: &dyn AlgorithmUnderTest, toy: &Toy, length: usize) -> Result<Vec<bool>> {
    let total = guarded_count(toy, length)?;
    (0..total)
        .into_par_iter()
        .map(|idx| classify_good(alg, toy, &toy.staircase(&toy.indices(length, idx))))
        .collect()
}

fn guarded_count(toy: &Toy, length: usize) -> Result<u64> {
    match toy.count(length) {
        Some(c) if c <= ENUMERATION_LIMIT => Ok(c),
        c => Err(Error::ScaleGuard {
            what: "staircase enumeration",
            needed: c.map_or(u128::MAX, u128::from),
            limit: ENUMERATION_LIMIT as u128,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GoodnessRow {
    pub length: usize,
    pub total: u64,
    pub good: u64,
}

impl GoodnessRow {
    pub fn fraction(&self) -> f64 {
        self.good as f64 / self.total as f64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessReport {
    pub algorithm: &'static str,
    pub rows: Vec<GoodnessRow>,
}

impl GoodnessReport {
    /// CSV with header `length,total,good,fraction`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("length,total,good,fraction\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{:.6}", r.length, r.total, r.good, r.fraction());
        }
        s
    }
}

/// `|G^{(i)}|` and `R^{(i)}` for every length `1..=k`.
pub fn enumerate_goodness(alg: &dyn AlgorithmUnderTest, toy: &Toy) -> Result<GoodnessReport> {
    guarded_count(toy, toy.ells.len())?;
    let rows = (1..=toy.ells.len())
        .map(|length| {
            let flags = classify_all(alg, toy, length)?;
            Ok(GoodnessRow {
                length,
                total: flags.len() as u64,
                good: flags.iter().filter(|&&g| g).count() as u64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GoodnessReport { algorithm: alg.name(), rows })
}

/// Per-length slack of `R^{(i+2)} ≥ R^{(i+1)} − Q·d·ℓ_{i+1}/ℓ_i^d`, where
/// `Q` bounds the queries made through round `i+1`. Non-negative entries
/// mean the inequality holds.
pub fn counting_slack(report: &GoodnessReport, toy: &Toy, per_round: u64) -> Vec<f64> {
    let d = toy.d() as i32;
    (0..report.rows.len().saturating_sub(1))
        .map(|i| {
            let q = per_round as f64 * (i + 1) as f64;
            let loss = q * toy.d() as f64 * toy.ells[i + 1] as f64 / (toy.ells[i] as f64).powi(d);
            report.rows[i + 1].fraction() - (report.rows[i].fraction() - loss)
        })
        .collect()
}

/// `⌊m^{(d^{k+1}−d^k)/(d^k−1)} / (10dk)⌋`.
pub fn hard_budget(m: u64, d: usize, k: usize) -> u64 {
    let e = crate::instances::schedule::const_round_exponent(d, k);
    ((m as f64).powf(e) / (10 * d * k) as f64).floor() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy42() -> Toy {
        Toy::new(2, vec![4, 2]).unwrap()
    }

    #[test]
    fn toy_count() {
        let t = toy42();
        assert_eq!(t.count(2), Some(64));
        assert_eq!(t.grid.side(), 6);
        assert_eq!(t.indices(2, 17), vec![4, 1]);
    }

    #[test]
    fn zero_query_keeps_everything_good() {
        let r = enumerate_goodness(&ZeroQuery, &toy42()).unwrap();
        assert!(r.rows.iter().all(|row| row.good == row.total));
        assert_eq!(r.rows[1].total, 64);
        assert!(r.to_csv().starts_with("length,total,good,fraction\n1,16,16,1.000000\n"));
    }

    #[test]
    fn full_grid_round1_leaves_only_length_one_good() {
        let r = enumerate_goodness(&FullGridRound1, &toy42()).unwrap();
        assert_eq!(r.rows[0].good, 16);
        // a staircase whose second step stays put has an empty segment
        let empty_steps = 16;
        assert_eq!(r.rows[1].good, empty_steps);
        assert!(r.rows[1].fraction() < 1.0);
    }

    #[test]
    fn prefixes_of_good_staircases_are_good() {
        let toy = Toy::new(2, vec![5, 3, 2]).unwrap();
        let alg = UniformBoundaryDnc { budget: 6 };
        let by_len: Vec<Vec<bool>> = (1..=3).map(|l| classify_all(&alg, &toy, l).unwrap()).collect();
        for len in 2..=3 {
            let radix = toy.ells[len - 1].pow(2);
            for (idx, &g) in by_len[len - 1].iter().enumerate() {
                if g {
                    assert!(by_len[len - 2][idx / radix as usize]);
                }
            }
        }
        assert!(by_len[2].iter().any(|&g| !g));
    }

    #[test]
    fn budget_is_enforced() {
        let toy = toy42();
        let alg = UniformBoundaryDnc { budget: 3 };
        let h = simulate(&alg, &toy, &toy.staircase(&[5, 2])).unwrap();
        assert!(h.iter().all(|r| r.batch.len() <= 3));
        assert_eq!(h[0].granted, Some(toy.staircase(&[5, 2]).connecting_points()[1].clone()));
        assert_eq!(h[1].granted, None);
    }

    #[test]
    fn scale_guard() {
        let toy = Toy::new(3, vec![40, 20]).unwrap();
        assert!(matches!(enumerate_goodness(&ZeroQuery, &toy), Err(Error::ScaleGuard { .. })));
    }
}
