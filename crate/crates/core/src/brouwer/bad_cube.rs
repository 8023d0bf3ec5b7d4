//! Bad unit cubes and the boundary parity that certifies a zero inside a
//! cube.
//!
//! A 0-cube is bad when its value is `e^1`. An `i`-cube is bad when its
//! corner values are exactly `{e^1, .., e^{i+1}}` and an odd number of its
//! `(i−1)`-faces are bad.

use std::collections::{BTreeSet, HashMap};

use crate::grid::{Cube, GridPoint};
use crate::instances::Direction;

/// `base` plus every 0/1 offset on the axes in `dims`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitCube {
    pub base: GridPoint,
    pub dims: Vec<usize>,
}

impl UnitCube {
    pub fn new(base: GridPoint, mut dims: Vec<usize>) -> Self {
        dims.sort_unstable();
        dims.dedup();
        UnitCube { base, dims }
    }

    pub fn corners(&self) -> Vec<GridPoint> {
        let mut out = vec![self.base.clone()];
        for &a in &self.dims {
            let shifted: Vec<GridPoint> = out.iter().map(|p| p.shifted(a, 1)).collect();
            out.extend(shifted);
        }
        out
    }

    /// The `2·i` faces of dimension `i − 1`, in axis order, low side first.
    pub fn faces(&self) -> Vec<UnitCube> {
        let mut out = Vec::with_capacity(2 * self.dims.len());
        for &a in &self.dims {
            let rest: Vec<usize> = self.dims.iter().copied().filter(|&b| b != a).collect();
            out.push(UnitCube { base: self.base.clone(), dims: rest.clone() });
            out.push(UnitCube { base: self.base.shifted(a, 1), dims: rest });
        }
        out
    }

    fn has_required_values(&self, f: &mut impl FnMut(&GridPoint) -> Direction) -> bool {
        let i = self.dims.len();
        let vals: BTreeSet<Direction> = self.corners().iter().map(|p| f(p)).collect();
        vals.len() == i + 1 && (0..=i).all(|a| vals.contains(&Direction::Plus(a)))
    }
}

/// Memoized bad-cube test over a value lookup.
pub struct BadCubes<F: FnMut(&GridPoint) -> Direction> {
    lookup: F,
    memo: HashMap<UnitCube, bool>,
}

impl<F: FnMut(&GridPoint) -> Direction> BadCubes<F> {
    pub fn new(lookup: F) -> Self {
        BadCubes { lookup, memo: HashMap::new() }
    }

    pub fn is_bad(&mut self, c: &UnitCube) -> bool {
        if let Some(&b) = self.memo.get(c) {
            return b;
        }
        let bad = if c.dims.is_empty() {
            (self.lookup)(&c.base) == Direction::Plus(0)
        } else if !c.has_required_values(&mut self.lookup) {
            false
        } else {
            c.faces().iter().filter(|face| self.is_bad(face)).count() % 2 == 1
        };
        self.memo.insert(c.clone(), bad);
        bad
    }

    /// Bad `(d−1)`-unit cubes lying on the boundary faces of `cube`.
    pub fn boundary_bad_count(&mut self, cube: &Cube) -> u64 {
        boundary_unit_cubes(cube).iter().filter(|c| self.is_bad(c)).count() as u64
    }
}

pub fn is_bad_cube(c: &UnitCube, f: impl FnMut(&GridPoint) -> Direction) -> bool {
    BadCubes::new(f).is_bad(c)
}

/// `boundary_bad_count(C) mod 2`.
pub fn boundary_bad_parity(cube: &Cube, f: impl FnMut(&GridPoint) -> Direction) -> u64 {
    BadCubes::new(f).boundary_bad_count(cube) % 2
}

/// All `(d−1)`-unit cubes inside the boundary faces of `cube`. An axis of
/// extent 1 contributes a single face.
pub fn boundary_unit_cubes(cube: &Cube) -> Vec<UnitCube> {
    let d = cube.d();
    let low = cube.low().coords();
    let mut out = Vec::new();
    for a in 0..d {
        let dims: Vec<usize> = (0..d).filter(|&b| b != a).collect();
        if dims.iter().any(|&b| cube.extent()[b] < 2) {
            continue;
        }
        let sides: Vec<i64> = if cube.extent()[a] == 1 {
            vec![low[a]]
        } else {
            vec![low[a], cube.high_coord(a)]
        };
        // bases range over [low_b, high_b − 1] on every other axis
        let mut base_low = low.to_vec();
        let mut ext: Vec<u64> = cube.extent().iter().map(|&e| e - 1).collect();
        ext[a] = 1;
        for s in sides {
            base_low[a] = s;
            let bases = Cube::new(GridPoint::new(base_low.clone()), ext.clone()).expect("positive extents");
            out.extend(bases.points().map(|b| UnitCube { base: b, dims: dims.clone() }));
        }
    }
    out
}
