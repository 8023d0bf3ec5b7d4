//! Grid geometry: points, axis-aligned cubes, folded segments and the
//! wrap-around windows used by the random-walk staircases.
//!
//! Coordinates are 1-based on the standard grid `[n]^d`. The padded grid of
//! the Brouwer solver uses `{0, .., n+1}^d`; both are a [`Grid`] with
//! different bounds.

use std::fmt;

use crate::error::{domain, Error, Result};

/// Largest side accepted on any axis.
pub const MAX_SIDE: u64 = 1 << 20;

/// A lattice point. Ordering is lexicographic on coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GridPoint(Vec<i64>);

impl GridPoint {
    pub fn new(coords: Vec<i64>) -> Self {
        GridPoint(coords)
    }

    /// The all-ones corner `1⃗`.
    pub fn ones(d: usize) -> Self {
        GridPoint(vec![1; d])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn l1(&self, other: &GridPoint) -> u64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.abs_diff(*b))
            .sum()
    }

    pub fn linf(&self, other: &GridPoint) -> u64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.abs_diff(*b))
            .max()
            .unwrap_or(0)
    }

    /// Copy with `delta` added on one axis.
    pub fn shifted(&self, axis: usize, delta: i64) -> GridPoint {
        let mut c = self.0.clone();
        c[axis] += delta;
        GridPoint(c)
    }

    /// Coordinates joined by `-`, as used in CSV output.
    pub fn dashed(&self) -> String {
        self.0
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

impl std::ops::Index<usize> for GridPoint {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl From<Vec<i64>> for GridPoint {
    fn from(v: Vec<i64>) -> Self {
        GridPoint(v)
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The box `{lo, .., hi}^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    d: usize,
    lo: i64,
    hi: i64,
}

impl Grid {
    /// `[n]^d` with 1-based coordinates.
    pub fn new(d: usize, n: u64) -> Result<Self> {
        Self::with_bounds(d, 1, n as i64)
    }

    /// `{0, .., n+1}^d`, the padded Brouwer domain.
    pub fn padded(d: usize, n: u64) -> Result<Self> {
        Self::with_bounds(d, 0, n as i64 + 1)
    }

    pub fn with_bounds(d: usize, lo: i64, hi: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parameter("dimension must be at least 1".into()));
        }
        if hi < lo {
            return Err(Error::Parameter(format!("empty grid bounds {lo}..{hi}")));
        }
        let side = (hi - lo + 1) as u64;
        if side > MAX_SIDE + 2 {
            return Err(Error::Parameter(format!("side {side} exceeds 2^20")));
        }
        let g = Grid { d, lo, hi };
        if g.checked_size().is_none() {
            return Err(Error::Parameter(format!(
                "grid of side {side} in dimension {d} does not fit a 64-bit count"
            )));
        }
        Ok(g)
    }

    pub fn d(&self) -> usize {
        self.d
    }
    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn hi(&self) -> i64 {
        self.hi
    }
    pub fn side(&self) -> u64 {
        (self.hi - self.lo + 1) as u64
    }

    fn checked_size(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for _ in 0..self.d {
            acc = acc.checked_mul(self.side())?;
        }
        Some(acc)
    }

    /// Number of points in the grid.
    pub fn size(&self) -> u64 {
        self.side().pow(self.d as u32)
    }

    pub fn contains(&self, p: &GridPoint) -> bool {
        p.dim() == self.d && p.0.iter().all(|&c| c >= self.lo && c <= self.hi)
    }

    pub fn check(&self, p: &GridPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            domain(format!("point {p} outside grid {}..{}^{}", self.lo, self.hi, self.d))
        }
    }

    /// Row-major linear index; axis 0 is most significant, so index order is
    /// lexicographic order.
    pub fn index(&self, p: &GridPoint) -> u64 {
        let side = self.side();
        p.0.iter()
            .fold(0u64, |acc, &c| acc * side + (c - self.lo) as u64)
    }

    pub fn point_at(&self, mut idx: u64) -> GridPoint {
        let side = self.side();
        let mut c = vec![0i64; self.d];
        for a in (0..self.d).rev() {
            c[a] = self.lo + (idx % side) as i64;
            idx /= side;
        }
        GridPoint(c)
    }

    /// All points at L1 distance 1 inside the grid.
    pub fn neighbors(&self, p: &GridPoint) -> Result<Vec<GridPoint>> {
        self.check(p)?;
        Ok(self.neighbors_unchecked(p))
    }

    pub(crate) fn neighbors_unchecked(&self, p: &GridPoint) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(2 * self.d);
        for a in 0..self.d {
            if p.0[a] > self.lo {
                out.push(p.shifted(a, -1));
            }
            if p.0[a] < self.hi {
                out.push(p.shifted(a, 1));
            }
        }
        out
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.size()).map(move |i| self.point_at(i))
    }

    pub fn full_cube(&self) -> Cube {
        Cube {
            low: GridPoint(vec![self.lo; self.d]),
            extent: vec![self.side(); self.d],
        }
    }
}

/// Axis-aligned box given by its low corner and per-axis side lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    low: GridPoint,
    extent: Vec<u64>,
}

impl Cube {
    pub fn new(low: GridPoint, extent: Vec<u64>) -> Result<Self> {
        if low.dim() != extent.len() {
            return domain("cube corner and extent differ in dimension");
        }
        if extent.iter().any(|&e| e == 0) {
            return domain("cube extents must be positive");
        }
        Ok(Cube { low, extent })
    }

    /// Inclusive bounds `[low_a, high_a]` on every axis.
    pub fn from_bounds(low: &[i64], high: &[i64]) -> Result<Self> {
        let extent = low
            .iter()
            .zip(high)
            .map(|(l, h)| (h - l + 1).max(0) as u64)
            .collect();
        Cube::new(GridPoint(low.to_vec()), extent)
    }

    /// `C(x, s)`: the cube of half-width `s` around `x`, clipped to the grid.
    pub fn centered(x: &GridPoint, s: u64, grid: &Grid) -> Cube {
        let s = s as i64;
        let low: Vec<i64> = x.0.iter().map(|&c| (c - s).max(grid.lo())).collect();
        let high: Vec<i64> = x.0.iter().map(|&c| (c + s).min(grid.hi())).collect();
        Cube::from_bounds(&low, &high).expect("clipped cube around a grid point is non-empty")
    }

    pub fn low(&self) -> &GridPoint {
        &self.low
    }
    pub fn extent(&self) -> &[u64] {
        &self.extent
    }
    pub fn d(&self) -> usize {
        self.extent.len()
    }
    pub fn high_coord(&self, axis: usize) -> i64 {
        self.low.0[axis] + self.extent[axis] as i64 - 1
    }
    pub fn high(&self) -> GridPoint {
        GridPoint((0..self.d()).map(|a| self.high_coord(a)).collect())
    }

    pub fn within(&self, grid: &Grid) -> bool {
        grid.d() == self.d() && grid.contains(&self.low) && grid.contains(&self.high())
    }

    pub fn contains(&self, p: &GridPoint) -> bool {
        p.dim() == self.d()
            && (0..self.d()).all(|a| p.0[a] >= self.low.0[a] && p.0[a] <= self.high_coord(a))
    }

    pub fn volume(&self) -> u64 {
        self.extent.iter().product()
    }

    pub fn is_single_point(&self) -> bool {
        self.extent.iter().all(|&e| e == 1)
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        let d = self.d();
        let vol = self.volume();
        (0..vol).map(move |mut idx| {
            let mut c = vec![0i64; d];
            for a in (0..d).rev() {
                let e = self.extent[a];
                c[a] = self.low.0[a] + (idx % e) as i64;
                idx /= e;
            }
            GridPoint(c)
        })
    }

    /// A point of the cube with fewer than `2d` neighbours inside it.
    pub fn is_boundary_point(&self, p: &GridPoint) -> bool {
        self.contains(p)
            && (0..self.d()).any(|a| p.0[a] == self.low.0[a] || p.0[a] == self.high_coord(a))
    }

    /// Boundary points in lexicographic order, enumerated without visiting
    /// the interior.
    pub fn boundary(&self) -> Vec<GridPoint> {
        let d = self.d();
        let mut out = Vec::with_capacity(self.boundary_count() as usize);
        let last = d - 1;
        let mut prefix: Vec<i64> = self.low.0[..last].to_vec();
        loop {
            let on_face = (0..last)
                .any(|a| prefix[a] == self.low.0[a] || prefix[a] == self.high_coord(a));
            let lo = self.low.0[last];
            let hi = self.high_coord(last);
            let mut emit = |c: i64| {
                let mut v = prefix.clone();
                v.push(c);
                out.push(GridPoint(v));
            };
            if on_face {
                for c in lo..=hi {
                    emit(c);
                }
            } else {
                emit(lo);
                if hi != lo {
                    emit(hi);
                }
            }
            // advance the odometer over axes 0..last
            let mut a = last;
            loop {
                if a == 0 {
                    return out;
                }
                a -= 1;
                if prefix[a] < self.high_coord(a) {
                    prefix[a] += 1;
                    break;
                }
                prefix[a] = self.low.0[a];
            }
        }
    }

    /// Closed-form size of [`Cube::boundary`].
    pub fn boundary_count(&self) -> u64 {
        let interior: u64 = self.extent.iter().map(|&e| e.saturating_sub(2)).product();
        self.volume() - interior
    }

    /// Tiles the cube with blocks of the given side; trailing blocks on each
    /// axis are smaller when `side` does not divide the extent.
    pub fn partition(&self, side: u64) -> Result<Vec<Cube>> {
        if side == 0 {
            return domain("partition side must be at least 1");
        }
        let cuts: Vec<Vec<(i64, u64)>> = (0..self.d())
            .map(|a| {
                let mut v = Vec::new();
                let mut start = 0u64;
                while start < self.extent[a] {
                    let len = side.min(self.extent[a] - start);
                    v.push((self.low.0[a] + start as i64, len));
                    start += len;
                }
                v
            })
            .collect();
        Ok(product_cubes(&cuts))
    }

    /// Splits axis `a` into `blocks[a]` near-equal pieces (larger pieces
    /// first). Block counts are clamped to the extent.
    pub fn split_balanced(&self, blocks: &[u64]) -> Vec<Cube> {
        let cuts: Vec<Vec<(i64, u64)>> = (0..self.d())
            .map(|a| {
                let e = self.extent[a];
                let b = blocks[a].clamp(1, e);
                let (q, r) = (e / b, e % b);
                let mut v = Vec::with_capacity(b as usize);
                let mut start = self.low.0[a];
                for j in 0..b {
                    let len = q + u64::from(j < r);
                    v.push((start, len));
                    start += len as i64;
                }
                v
            })
            .collect();
        product_cubes(&cuts)
    }

    /// Halves every axis of extent at least 2.
    pub fn halves(&self) -> Vec<Cube> {
        let blocks: Vec<u64> = self.extent.iter().map(|&e| e.min(2)).collect();
        self.split_balanced(&blocks)
    }
}

fn product_cubes(cuts: &[Vec<(i64, u64)>]) -> Vec<Cube> {
    let d = cuts.len();
    let total: usize = cuts.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; d];
    for _ in 0..total {
        let low = (0..d).map(|a| cuts[a][idx[a]].0).collect();
        let extent = (0..d).map(|a| cuts[a][idx[a]].1).collect();
        out.push(Cube { low: GridPoint(low), extent });
        for a in (0..d).rev() {
            idx[a] += 1;
            if idx[a] < cuts[a].len() {
                break;
            }
            idx[a] = 0;
        }
    }
    out
}

/// The axis-by-axis monotone lattice path from `origin` (excluded) to
/// `target`: first move along axis 1, then axis 2, and so on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedSegment {
    origin: GridPoint,
    target: GridPoint,
}

pub fn folded_segment(x: &GridPoint, y: &GridPoint) -> FoldedSegment {
    FoldedSegment::new(x.clone(), y.clone())
}

impl FoldedSegment {
    pub fn new(origin: GridPoint, target: GridPoint) -> Self {
        assert_eq!(origin.dim(), target.dim(), "folded segment endpoints differ in dimension");
        FoldedSegment { origin, target }
    }

    pub fn origin(&self) -> &GridPoint {
        &self.origin
    }
    pub fn target(&self) -> &GridPoint {
        &self.target
    }

    /// Number of points on the segment.
    pub fn len(&self) -> u64 {
        self.origin.l1(&self.target)
    }

    pub fn is_empty(&self) -> bool {
        self.origin == self.target
    }

    /// 1-based position of `p` along the path, or `None` when `p` is not on
    /// it. Runs in `O(d)` without materializing the path.
    pub fn position(&self, p: &GridPoint) -> Option<u64> {
        let (x, y) = (&self.origin.0, &self.target.0);
        let d = x.len();
        if p.dim() != d {
            return None;
        }
        // p in E_i needs p_j = y_j for j < i and p_j = x_j for j > i
        let i = (0..d).rev().find(|&j| p.0[j] != x[j])?;
        if (0..i).any(|j| p.0[j] != y[j]) {
            return None;
        }
        let (lo, hi) = (x[i].min(y[i]), x[i].max(y[i]));
        if p.0[i] < lo || p.0[i] > hi {
            return None;
        }
        let before: u64 = (0..i).map(|j| x[j].abs_diff(y[j])).sum();
        Some(before + p.0[i].abs_diff(x[i]))
    }

    pub fn contains(&self, p: &GridPoint) -> bool {
        self.position(p).is_some()
    }

    /// The path in traversal order.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(self.len() as usize);
        let mut cur = self.origin.0.clone();
        for a in 0..cur.len() {
            let step = (self.target.0[a] - cur[a]).signum();
            while cur[a] != self.target.0[a] {
                cur[a] += step;
                out.push(GridPoint(cur.clone()));
            }
        }
        out
    }
}

/// Wrap-around windows on the torus-indexed grid `[n]^d` with window side `ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Windows {
    n: i64,
    ell: i64,
}

/// The window family around one point, materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSets {
    /// `W¹(x_a)` for each axis, in walk order.
    pub per_axis: Vec<Vec<i64>>,
    pub window: Vec<GridPoint>,
    /// `W⁻¹_i(x)` for `i = 1..=d`.
    pub inverse: Vec<Vec<GridPoint>>,
    /// `W^b_i(x)` for `i = 1..=d`.
    pub backward: Vec<Vec<GridPoint>>,
    pub reach: Vec<GridPoint>,
}

impl Windows {
    pub fn new(n: u64, ell: u64) -> Result<Self> {
        if ell == 0 || ell >= n {
            return domain(format!("window side {ell} must satisfy 1 <= ell < n = {n}"));
        }
        Ok(Windows { n: n as i64, ell: ell as i64 })
    }

    pub fn n(&self) -> u64 {
        self.n as u64
    }
    pub fn ell(&self) -> u64 {
        self.ell as u64
    }

    /// Reduces any integer into `[1, n]`.
    pub fn wrap(&self, c: i64) -> i64 {
        (c - 1).rem_euclid(self.n) + 1
    }

    /// `W¹(x) = {x+1, .., x+ℓ}` with wrap-around.
    pub fn w1(&self, x: i64) -> Vec<i64> {
        (1..=self.ell).map(|o| self.wrap(x + o)).collect()
    }

    pub fn in_w1(&self, x: i64, y: i64) -> bool {
        let off = (y - x).rem_euclid(self.n);
        off >= 1 && off <= self.ell
    }

    pub fn in_window(&self, x: &GridPoint, y: &GridPoint) -> bool {
        (0..x.dim()).all(|a| self.in_w1(x[a], y[a]))
    }

    /// `y ∈ W⁻¹_i(x)`, with `i` 1-based.
    pub fn in_inverse(&self, i: usize, x: &GridPoint, y: &GridPoint) -> bool {
        (0..i).all(|j| self.in_w1(y[j], x[j])) && (i..x.dim()).all(|j| self.wrap(y[j]) == self.wrap(x[j]))
    }

    /// `y ∈ W^b_i(x)`, with `i` 1-based.
    pub fn in_backward(&self, i: usize, x: &GridPoint, y: &GridPoint) -> bool {
        let a = i - 1;
        let (xa, ya) = (self.wrap(x[a]), self.wrap(y[a]));
        (0..a).all(|j| self.in_w1(y[j], x[j]))
            && ya > (self.n - self.ell).max(xa)
            && ya <= self.n
            && (i..x.dim()).all(|j| self.wrap(y[j]) == self.wrap(x[j]))
    }

    pub fn in_reach(&self, x: &GridPoint, y: &GridPoint) -> bool {
        (1..=x.dim()).any(|i| self.in_inverse(i, x, y) || self.in_backward(i, x, y))
    }

    pub fn sets(&self, x: &GridPoint) -> Result<WindowSets> {
        let d = x.dim();
        let grid = Grid::new(d, self.n as u64)?;
        grid.check(x)?;
        let per_axis: Vec<Vec<i64>> = x.coords().iter().map(|&c| self.w1(c)).collect();
        let window = product_points(&per_axis);
        let mut inverse = Vec::with_capacity(d);
        let mut backward = Vec::with_capacity(d);
        let mut reach = Vec::new();
        for i in 1..=d {
            let mut inv = Vec::new();
            let mut back = Vec::new();
            for y in grid.points() {
                if self.in_inverse(i, x, &y) {
                    inv.push(y.clone());
                }
                if self.in_backward(i, x, &y) {
                    back.push(y);
                }
            }
            inverse.push(inv);
            backward.push(back);
        }
        for y in grid.points() {
            if self.in_reach(x, &y) {
                reach.push(y);
            }
        }
        Ok(WindowSets { per_axis, window, inverse, backward, reach })
    }
}

/// Materializes all window sets of `x`; exhaustive over `[n]^d`.
pub fn window_sets(x: &GridPoint, ell: u64, n: u64) -> Result<WindowSets> {
    Windows::new(n, ell)?.sets(x)
}

fn product_points(axes: &[Vec<i64>]) -> Vec<GridPoint> {
    let mut out = vec![Vec::with_capacity(axes.len())];
    for vals in axes {
        let mut next = Vec::with_capacity(out.len() * vals.len());
        for prefix in &out {
            for &v in vals {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(GridPoint).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn pt(c: &[i64]) -> GridPoint {
        GridPoint::new(c.to_vec())
    }

    fn set(v: Vec<GridPoint>) -> BTreeSet<GridPoint> {
        v.into_iter().collect()
    }

    #[test]
    fn neighbor_counts() {
        let g = Grid::new(2, 3).unwrap();
        assert_eq!(
            set(g.neighbors(&pt(&[2, 2])).unwrap()),
            set(vec![pt(&[1, 2]), pt(&[3, 2]), pt(&[2, 1]), pt(&[2, 3])])
        );
        assert_eq!(set(g.neighbors(&pt(&[1, 1])).unwrap()), set(vec![pt(&[2, 1]), pt(&[1, 2])]));
        let g3 = Grid::new(3, 5).unwrap();
        assert_eq!(g3.neighbors(&pt(&[1, 3, 5])).unwrap().len(), 4);
        assert!(matches!(g.neighbors(&pt(&[0, 1])), Err(Error::Domain(_))));
    }

    #[test]
    fn index_roundtrip_is_lexicographic() {
        let g = Grid::new(3, 4).unwrap();
        let pts: Vec<_> = g.points().collect();
        assert_eq!(pts.len(), 64);
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(g.index(p), i as u64);
        }
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let pg = Grid::padded(2, 3).unwrap();
        assert_eq!(pg.point_at(0), pt(&[0, 0]));
        assert_eq!(pg.size(), 25);
    }

    #[test]
    fn folded_segment_examples() {
        let fs = folded_segment(&pt(&[1, 1]), &pt(&[3, 2]));
        assert_eq!(fs.points(), vec![pt(&[2, 1]), pt(&[3, 1]), pt(&[3, 2])]);
        assert!(folded_segment(&pt(&[4, 4]), &pt(&[4, 4])).points().is_empty());
        let fs3 = folded_segment(&pt(&[1, 1, 1]), &pt(&[2, 2, 2]));
        assert_eq!(fs3.points(), vec![pt(&[2, 1, 1]), pt(&[2, 2, 1]), pt(&[2, 2, 2])]);
        assert_eq!(fs.position(&pt(&[1, 1])), None);
        assert_eq!(fs.position(&pt(&[3, 1])), Some(2));
        assert_eq!(fs.position(&pt(&[1, 2])), None);
    }

    #[test]
    fn boundary_examples() {
        let c = Cube::new(pt(&[1, 1]), vec![3, 3]).unwrap();
        assert_eq!(c.boundary().len(), 8);
        let c1 = Cube::new(pt(&[5, 5]), vec![1, 1]).unwrap();
        assert_eq!(c1.boundary(), vec![pt(&[5, 5])]);
        let c3 = Cube::new(pt(&[1, 1, 1]), vec![4, 4, 4]).unwrap();
        assert_eq!(c3.boundary().len(), 56);
        assert_eq!(c3.boundary_count(), 56);
    }

    #[test]
    fn boundary_matches_neighbour_definition() {
        for d in 1..=3usize {
            for side in 1..=6u64 {
                let g = Grid::with_bounds(d, 1, side as i64 + 2).unwrap();
                let c = Cube::new(GridPoint::new(vec![2; d]), vec![side; d]).unwrap();
                let brute: Vec<GridPoint> = c
                    .points()
                    .filter(|p| {
                        let inside = g
                            .neighbors(p)
                            .unwrap()
                            .into_iter()
                            .filter(|q| c.contains(q))
                            .count();
                        inside < 2 * d
                    })
                    .collect();
                assert_eq!(c.boundary(), brute, "d={d} side={side}");
                assert_eq!(c.boundary_count(), brute.len() as u64);
            }
        }
    }

    #[test]
    fn partition_examples() {
        let c = Cube::new(pt(&[1, 1]), vec![8, 8]).unwrap();
        assert_eq!(c.partition(4).unwrap().len(), 4);
        assert_eq!(c.partition(8).unwrap(), vec![c.clone()]);
        let c10 = Cube::new(pt(&[1, 1]), vec![10, 10]).unwrap();
        let parts = c10.partition(4).unwrap();
        assert_eq!(parts.len(), 9);
        assert_eq!(parts.last().unwrap().extent(), &[2, 2]);
        for p in c10.points() {
            assert_eq!(parts.iter().filter(|s| s.contains(&p)).count(), 1);
        }
        assert!(matches!(c.partition(0), Err(Error::Domain(_))));
    }

    #[test]
    fn halves_and_balanced_split() {
        let c = Cube::new(pt(&[1, 3]), vec![5, 1]).unwrap();
        let h = c.halves();
        assert_eq!(h.len(), 2);
        assert_eq!(h[0].extent(), &[3, 1]);
        assert_eq!(h[1].low(), &pt(&[4, 3]));
        let s = Cube::new(pt(&[1]), vec![10]).unwrap().split_balanced(&[3]);
        let ext: Vec<u64> = s.iter().map(|c| c.extent()[0]).collect();
        assert_eq!(ext, vec![4, 3, 3]);
    }

    #[test]
    fn centered_cube_is_clipped() {
        let g = Grid::new(2, 10).unwrap();
        let c = Cube::centered(&pt(&[2, 9]), 3, &g);
        assert_eq!(c.low(), &pt(&[1, 6]));
        assert_eq!(c.high(), pt(&[5, 10]));
    }

    #[test]
    fn window_examples() {
        let w = Windows::new(10, 3).unwrap();
        assert_eq!(w.w1(9), vec![10, 1, 2]);
        assert_eq!(w.w1(1), vec![2, 3, 4]);
        let s = window_sets(&pt(&[9, 9]), 3, 10).unwrap();
        assert_eq!(s.window.len(), 9);
        assert!(matches!(Windows::new(10, 10), Err(Error::Domain(_))));
    }

    #[test]
    fn window_sets_match_membership() {
        let w = Windows::new(7, 2).unwrap();
        let x = pt(&[3, 6]);
        let s = w.sets(&x).unwrap();
        for y in &s.window {
            assert!(w.in_window(&x, y));
        }
        // W^{-1}_d holds exactly the points whose window contains x
        let g = Grid::new(2, 7).unwrap();
        let pre: Vec<GridPoint> = g.points().filter(|y| w.in_window(y, &x)).collect();
        assert_eq!(s.inverse[1], pre);
        assert!(s.reach.len() >= s.inverse[1].len());
    }

    #[test]
    fn inverse_and_backward_overlap_only_at_the_seam() {
        let w = Windows::new(10, 3).unwrap();
        // y_1 = 9 wraps onto x_1 = 1 and also sits in the backward band
        assert!(w.in_inverse(1, &pt(&[1]), &pt(&[9])));
        assert!(w.in_backward(1, &pt(&[1]), &pt(&[9])));
        let g = Grid::new(2, 10).unwrap();
        for x in g.points().filter(|x| x.coords().iter().all(|&c| c > 3)) {
            let s = w.sets(&x).unwrap();
            for i in 0..2 {
                let inv: BTreeSet<_> = s.inverse[i].iter().collect();
                assert!(s.backward[i].iter().all(|y| !inv.contains(y)), "x={x}");
            }
        }
    }
}
