//! Direction fields `x ↦ {0, ±e^i}` for the discrete Brouwer problem.

use std::fmt;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridPoint};
use crate::oracle::Oracle;

/// Largest grid checked exhaustively by [`DirectionField::validate`].
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// `0`, `+e^i` or `−e^i`, with 0-based axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Zero,
    Plus(usize),
    Minus(usize),
}

impl Direction {
    pub fn is_zero(self) -> bool {
        self == Direction::Zero
    }

    pub fn to_vec(self, d: usize) -> Vec<i64> {
        let mut v = vec![0; d];
        match self {
            Direction::Zero => {}
            Direction::Plus(a) => v[a] = 1,
            Direction::Minus(a) => v[a] = -1,
        }
        v
    }

    /// `‖a − b‖_∞`.
    pub fn linf(self, other: Direction) -> u8 {
        match (self, other) {
            (a, b) if a == b => 0,
            (Direction::Plus(i), Direction::Minus(j)) | (Direction::Minus(i), Direction::Plus(j))
                if i == j =>
            {
                2
            }
            _ => 1,
        }
    }

    pub fn apply(self, p: &GridPoint) -> GridPoint {
        match self {
            Direction::Zero => p.clone(),
            Direction::Plus(a) => p.shifted(a, 1),
            Direction::Minus(a) => p.shifted(a, -1),
        }
    }

    /// `+1`, `0` or `−1` along axis 0; the 1D encoding.
    pub fn signum(self) -> i64 {
        match self {
            Direction::Zero => 0,
            Direction::Plus(_) => 1,
            Direction::Minus(_) => -1,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Zero => write!(f, "0"),
            Direction::Plus(a) => write!(f, "+e{}", a + 1),
            Direction::Minus(a) => write!(f, "-e{}", a + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FieldKind {
    /// Moves along the first differing axis toward `target`.
    Sink { target: GridPoint },
    /// Inner field on `[n]^d`, pointing inward on the padding layer.
    Padded { inner: Box<DirectionField> },
    /// `+1` left of `i`, `−1` right of it.
    OneDHard { i: i64 },
    /// Explicit values in grid index order.
    Table(Vec<Direction>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectionField {
    grid: Grid,
    kind: FieldKind,
}

impl DirectionField {
    pub fn from_table(grid: Grid, values: Vec<Direction>) -> Result<Self> {
        if values.len() as u64 != grid.size() {
            return Err(Error::Parameter(format!(
                "table holds {} values for {} points",
                values.len(),
                grid.size()
            )));
        }
        Ok(DirectionField { grid, kind: FieldKind::Table(values) })
    }

    pub(crate) fn one_d_hard(n: u64, i: i64) -> Result<Self> {
        Ok(DirectionField { grid: Grid::new(1, n)?, kind: FieldKind::OneDHard { i } })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }
    pub fn d(&self) -> usize {
        self.grid.d()
    }

    /// The known zero, when the construction fixes one.
    pub fn planted_zero(&self) -> Option<GridPoint> {
        match &self.kind {
            FieldKind::Sink { target } => Some(target.clone()),
            FieldKind::Padded { inner } => inner.planted_zero(),
            FieldKind::OneDHard { i } => Some(GridPoint::new(vec![*i])),
            FieldKind::Table(_) => None,
        }
    }

    pub fn eval(&self, x: &GridPoint) -> Direction {
        match &self.kind {
            FieldKind::Sink { target } => {
                for a in 0..x.dim() {
                    if x[a] < target[a] {
                        return Direction::Plus(a);
                    }
                    if x[a] > target[a] {
                        return Direction::Minus(a);
                    }
                }
                Direction::Zero
            }
            FieldKind::Padded { inner } => {
                let hi = self.grid.hi();
                match (0..x.dim()).rev().find(|&a| x[a] == 0 || x[a] == hi) {
                    Some(a) if x[a] == 0 => Direction::Plus(a),
                    Some(a) => Direction::Minus(a),
                    None => inner.eval(x),
                }
            }
            FieldKind::OneDHard { i } => match x[0].cmp(i) {
                std::cmp::Ordering::Less => Direction::Plus(0),
                std::cmp::Ordering::Equal => Direction::Zero,
                std::cmp::Ordering::Greater => Direction::Minus(0),
            },
            FieldKind::Table(v) => v[self.grid.index(x) as usize],
        }
    }

    /// Exhaustive check of boundedness and direction preservation.
    pub fn validate(&self) -> Result<()> {
        if self.grid.size() > EXHAUSTIVE_LIMIT {
            return Err(Error::ScaleGuard {
                what: "field validation",
                needed: self.grid.size() as u128,
                limit: EXHAUSTIVE_LIMIT as u128,
            });
        }
        if let Some(p) = self.unbounded_point() {
            return Err(Error::Domain(format!("field leaves the grid at {p}")));
        }
        if let Some((p, q)) = self.preservation_violation() {
            return Err(Error::Domain(format!("field is not direction-preserving at {p}, {q}")));
        }
        Ok(())
    }

    pub fn unbounded_point(&self) -> Option<GridPoint> {
        self.grid.points().find(|p| !self.grid.contains(&self.eval(p).apply(p)))
    }

    /// A pair at L∞ distance 1 whose directions are opposite, if any.
    pub fn preservation_violation(&self) -> Option<(GridPoint, GridPoint)> {
        let d = self.d();
        let offsets: Vec<Vec<i64>> = (0..3u64.pow(d as u32))
            .map(|mut c| {
                (0..d)
                    .map(|_| {
                        let v = (c % 3) as i64 - 1;
                        c /= 3;
                        v
                    })
                    .collect()
            })
            .filter(|o: &Vec<i64>| o.iter().any(|&v| v != 0))
            .collect();
        for p in self.grid.points() {
            let fp = self.eval(&p);
            for o in &offsets {
                let q = GridPoint::new(p.coords().iter().zip(o).map(|(a, b)| a + b).collect());
                if q > p && self.grid.contains(&q) && fp.linf(self.eval(&q)) > 1 {
                    return Some((p, q));
                }
            }
        }
        None
    }

    /// All zeros, by exhaustive scan.
    pub fn zeros(&self) -> Vec<GridPoint> {
        self.grid.points().filter(|p| self.eval(p).is_zero()).collect()
    }
}

impl Oracle for DirectionField {
    type Answer = Direction;
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn answer(&self, p: &GridPoint) -> Direction {
        self.eval(p)
    }
}

/// Field with a unique zero at `target`.
pub fn gen_sink_field(n: u64, d: usize, target: GridPoint) -> Result<DirectionField> {
    let grid = Grid::new(d, n)?;
    grid.check(&target)?;
    Ok(DirectionField { grid, kind: FieldKind::Sink { target } })
}

/// Extends a field on `[n]^d` to `{0, .., n+1}^d`.
pub fn pad_brouwer(f: DirectionField) -> Result<DirectionField> {
    let inner = f.grid;
    if inner.lo() != 1 {
        return Err(Error::Parameter("padding expects a field on [n]^d".into()));
    }
    let grid = Grid::padded(inner.d(), inner.side())?;
    Ok(DirectionField { grid, kind: FieldKind::Padded { inner: Box::new(f) } })
}

pub fn verify_zero(f: &DirectionField, x: &GridPoint) -> bool {
    f.grid.contains(x) && f.eval(x).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> GridPoint {
        GridPoint::new(c.to_vec())
    }

    #[test]
    fn sink_examples() {
        let f = gen_sink_field(3, 2, pt(&[2, 2])).unwrap();
        assert_eq!(f.eval(&pt(&[2, 2])), Direction::Zero);
        assert_eq!(f.eval(&pt(&[1, 2])), Direction::Plus(0));
        assert_eq!(f.eval(&pt(&[3, 1])), Direction::Minus(0));
        assert_eq!(f.eval(&pt(&[2, 3])), Direction::Minus(1));
        assert!(verify_zero(&f, &pt(&[2, 2])));
        assert!(!verify_zero(&f, &pt(&[3, 2])));
    }

    #[test]
    fn padding_examples() {
        let f = gen_sink_field(4, 2, pt(&[1, 1])).unwrap();
        let p = pad_brouwer(f.clone()).unwrap();
        assert_eq!(p.eval(&pt(&[0, 3])), Direction::Plus(0));
        assert_eq!(p.eval(&pt(&[2, 5])), Direction::Minus(1));
        assert_eq!(p.eval(&pt(&[0, 5])), Direction::Minus(1));
        assert_eq!(p.eval(&pt(&[3, 2])), f.eval(&pt(&[3, 2])));
        assert_eq!(p.zeros(), f.zeros());
    }

    #[test]
    fn sink_and_padded_fields_validate() {
        for d in 1..=3usize {
            let n = [9u64, 6, 4][d - 1];
            let g = Grid::new(d, n).unwrap();
            for t in g.points().step_by(3) {
                let f = gen_sink_field(n, d, t.clone()).unwrap();
                f.validate().unwrap();
                assert_eq!(f.zeros(), vec![t.clone()]);
                let p = pad_brouwer(f).unwrap();
                p.validate().unwrap();
                assert_eq!(p.zeros(), vec![t]);
            }
        }
    }

    #[test]
    fn validator_rejects_bad_tables() {
        let g = Grid::new(1, 3).unwrap();
        let out = DirectionField::from_table(g, vec![Direction::Minus(0), Direction::Zero, Direction::Minus(0)]);
        assert!(out.unwrap().validate().is_err());
        let flip = DirectionField::from_table(g, vec![Direction::Plus(0), Direction::Minus(0), Direction::Minus(0)]);
        assert!(flip.unwrap().validate().is_err());
        let ok = DirectionField::from_table(g, vec![Direction::Plus(0), Direction::Zero, Direction::Minus(0)]);
        ok.unwrap().validate().unwrap();
    }

    #[test]
    fn direction_distance() {
        assert_eq!(Direction::Plus(0).linf(Direction::Minus(0)), 2);
        assert_eq!(Direction::Plus(0).linf(Direction::Minus(1)), 1);
        assert_eq!(Direction::Zero.linf(Direction::Minus(1)), 1);
        assert_eq!(Direction::Plus(2).to_vec(3), vec![0, 0, 1]);
    }
}
