//! Staircase instances: chains of connecting points joined by folded
//! segments, with a value function whose unique local minimum hides at the
//! end of the chain.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;

use super::schedule::{ell_schedule, poly_params};
use crate::error::{Error, Result};
use crate::grid::{folded_segment, Grid, GridPoint, Windows};
use crate::oracle::Oracle;
use crate::rng::instance_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StaircaseKind {
    /// Corner windows on the side-`m` grid.
    ConstRound,
    /// Wrap-around random walk on `[n]^d`.
    PolyRound,
}

impl StaircaseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StaircaseKind::ConstRound => "const_round",
            StaircaseKind::PolyRound => "poly_round",
        }
    }
}

/// Sign of the end point's value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EndSign {
    /// End value is the negative path length: the end is the local minimum.
    Minus,
    /// End value is its L1 distance to the start: the point before it is.
    Plus,
}

impl fmt::Display for EndSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndSign::Minus => "-",
            EndSign::Plus => "+",
        })
    }
}

#[derive(Clone, Debug)]
pub struct StaircaseInstance {
    kind: StaircaseKind,
    grid: Grid,
    n: u64,
    param: f64,
    seed: u64,
    end_sign: EndSign,
    points: Vec<GridPoint>,
    path: Vec<GridPoint>,
    trace: HashMap<u64, u64>,
}

impl StaircaseInstance {
    /// Builds the trace from explicit connecting points. `n` and `param`
    /// (`k` or `α`) are carried for reporting and serialization only.
    pub fn from_points(
        kind: StaircaseKind,
        grid: Grid,
        n: u64,
        param: f64,
        seed: u64,
        points: Vec<GridPoint>,
        end_sign: EndSign,
    ) -> Result<Self> {
        let start = GridPoint::ones(grid.d());
        match points.first() {
            Some(p) if *p == start => {}
            _ => return Err(Error::Parameter("staircase must start at the all-ones corner".into())),
        }
        for p in &points {
            grid.check(p)?;
        }
        let mut path = vec![start];
        for w in points.windows(2) {
            path.extend(folded_segment(&w[0], &w[1]).points());
        }
        let mut trace = HashMap::with_capacity(path.len());
        for (i, p) in path.iter().enumerate() {
            // later positions overwrite earlier ones: largest index wins
            trace.insert(grid.index(p), i as u64);
        }
        Ok(StaircaseInstance { kind, grid, n, param, seed, end_sign, points, path, trace })
    }

    pub fn kind(&self) -> StaircaseKind {
        self.kind
    }
    pub fn d(&self) -> usize {
        self.grid.d()
    }
    /// The size parameter the instance was generated from.
    pub fn n(&self) -> u64 {
        self.n
    }
    /// `k` for constant-round staircases, `α` for random-walk ones.
    pub fn param(&self) -> f64 {
        self.param
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn end_sign(&self) -> EndSign {
        self.end_sign
    }
    pub fn connecting_points(&self) -> &[GridPoint] {
        &self.points
    }
    /// Every path position in order, starting at `1⃗`.
    pub fn path(&self) -> &[GridPoint] {
        &self.path
    }
    pub fn path_len(&self) -> u64 {
        (self.path.len() - 1) as u64
    }
    pub fn start(&self) -> &GridPoint {
        &self.path[0]
    }
    pub fn end(&self) -> &GridPoint {
        self.path.last().expect("path holds at least the start")
    }

    /// Largest path position of `p`, if it lies on the staircase.
    pub fn path_index(&self, p: &GridPoint) -> Option<u64> {
        if !self.grid.contains(p) {
            return None;
        }
        self.trace.get(&self.grid.index(p)).copied()
    }

    pub fn value_at(&self, p: &GridPoint) -> i64 {
        let t = self.path_len();
        match self.path_index(p) {
            Some(i) if i == t => match self.end_sign {
                EndSign::Minus => -(t as i64),
                EndSign::Plus => p.l1(self.start()) as i64,
            },
            Some(i) => -(i as i64),
            None => p.l1(self.start()) as i64,
        }
    }

    /// The unique local minimum implied by the construction.
    pub fn solution(&self) -> &GridPoint {
        let t = self.path.len() - 1;
        match self.end_sign {
            EndSign::Plus if t >= 1 => &self.path[t - 1],
            _ => &self.path[t],
        }
    }

    /// Copy with a different end sign; everything else is shared.
    pub fn with_end_sign(&self, end_sign: EndSign) -> Self {
        StaircaseInstance { end_sign, ..self.clone() }
    }
}

impl Oracle for StaircaseInstance {
    type Answer = i64;
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn answer(&self, p: &GridPoint) -> i64 {
        self.value_at(p)
    }
}

/// Decodes a window index into per-axis digits, axis 1 most significant.
pub fn window_digits(mut idx: u64, ell: u64, d: usize) -> Vec<u64> {
    let mut digits = vec![0; d];
    for a in (0..d).rev() {
        digits[a] = idx % ell;
        idx /= ell;
    }
    digits
}

/// The point of the corner window `W(x)` of side `ℓ` with the given index.
pub fn corner_window_point(x: &GridPoint, ell: u64, idx: u64) -> GridPoint {
    let digits = window_digits(idx, ell, x.dim());
    GridPoint::new(x.coords().iter().zip(digits).map(|(&c, o)| c + o as i64).collect())
}

/// Side `m = Σ ℓ_i` of the constant-round staircase grid.
pub fn const_grid_side(n: u64, d: usize, k: usize) -> Result<u64> {
    Ok(ell_schedule(n, d, k)?.iter().sum())
}

/// Constant-round staircase from explicit window indices, one per step.
pub fn const_staircase_from_indices(
    grid: Grid,
    ells: &[u64],
    indices: &[u64],
    end_sign: EndSign,
) -> Result<StaircaseInstance> {
    let d = grid.d();
    let mut points = vec![GridPoint::ones(d)];
    for (j, &idx) in indices.iter().enumerate() {
        let prev = points.last().expect("non-empty");
        points.push(corner_window_point(prev, ells[j], idx));
    }
    StaircaseInstance::from_points(
        StaircaseKind::ConstRound,
        grid,
        grid.side(),
        ells.len() as f64,
        0,
        points,
        end_sign,
    )
}

/// Length-`k` staircase on the side-`m` grid with `m = Σ_{i<k} ℓ_i`.
pub fn gen_const_staircase(n: u64, d: usize, k: usize, seed: u64) -> Result<StaircaseInstance> {
    let ells = ell_schedule(n, d, k)?;
    let m: u64 = ells.iter().sum();
    let grid = Grid::new(d, m)?;
    let mut rng = instance_rng(seed);
    let mut points = vec![GridPoint::ones(d)];
    for &ell in &ells {
        let count = ell
            .checked_pow(d as u32)
            .ok_or_else(|| Error::Parameter(format!("window of side {ell} overflows in dimension {d}")))?;
        let idx = rng.gen_range(0..count);
        let prev = points.last().expect("non-empty");
        points.push(corner_window_point(prev, ell, idx));
    }
    let end_sign = if rng.gen_bool(0.5) { EndSign::Minus } else { EndSign::Plus };
    StaircaseInstance::from_points(StaircaseKind::ConstRound, grid, n, k as f64, seed, points, end_sign)
}

/// The walk's move to `x_j`: uniform on the grid when `m | j`, otherwise
/// uniform on the wrap-around window of `prev`.
pub fn walk_step(grid: &Grid, win: &Windows, m: u64, j: u64, prev: &GridPoint, rng: &mut impl Rng) -> GridPoint {
    if j % m == 0 {
        return grid.point_at(rng.gen_range(0..grid.size()));
    }
    let count = win.ell().pow(grid.d() as u32);
    let digits = window_digits(rng.gen_range(0..count), win.ell(), grid.d());
    GridPoint::new(prev.coords().iter().zip(digits).map(|(&c, o)| win.wrap(c + 1 + o as i64)).collect())
}

/// Random-walk staircase of `K = 2⌊n^α⌋` steps; every `m`-th step is
/// resampled uniformly from `[n]^d`.
pub fn gen_poly_staircase(n: u64, d: usize, alpha: f64, seed: u64) -> Result<StaircaseInstance> {
    let p = poly_params(n, d, alpha)?;
    let grid = Grid::new(d, n)?;
    let win = Windows::new(n, p.ell)?;
    let mut rng = instance_rng(seed);
    let mut points = vec![GridPoint::ones(d)];
    for j in 1..=p.walk_len {
        let prev = points.last().expect("non-empty");
        let next = walk_step(&grid, &win, p.m, j, prev, &mut rng);
        points.push(next);
    }
    let end_sign = if rng.gen_bool(0.5) { EndSign::Minus } else { EndSign::Plus };
    StaircaseInstance::from_points(StaircaseKind::PolyRound, grid, n, alpha, seed, points, end_sign)
}
