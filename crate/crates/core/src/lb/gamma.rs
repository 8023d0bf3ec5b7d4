//! Monte Carlo estimates for the random-walk staircase: endpoint
//! frequencies `q̂` and the weighted segment-hit sum `Γ̂(i)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::{folded_segment, Grid, GridPoint, Windows};
use crate::instances::staircase::walk_step;

/// Largest grid accumulated by [`estimate_gamma`].
pub const GAMMA_GRID_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkParams {
    pub d: usize,
    pub n: u64,
    pub ell: u64,
    /// Every `m`-th point is resampled uniformly.
    pub m: u64,
    /// Walk length `K`.
    pub len: u64,
}

impl WalkParams {
    /// The small setting used by the lower-bound checks.
    pub fn toy() -> Self {
        WalkParams { d: 3, n: 16, ell: 4, m: 4, len: 16 }
    }

    fn parts(&self) -> Result<(Grid, Windows)> {
        if self.m == 0 || self.len == 0 {
            return Err(Error::Parameter("walk needs m >= 1 and K >= 1".into()));
        }
        Ok((Grid::new(self.d, self.n)?, Windows::new(self.n, self.ell)?))
    }
}

/// `x_i = x, x_{i+1}, .., x_{i+steps}`.
pub fn walk_from(p: &WalkParams, x: &GridPoint, i: u64, steps: u64, rng: &mut impl Rng) -> Result<Vec<GridPoint>> {
    let (grid, win) = p.parts()?;
    grid.check(x)?;
    let mut out = vec![x.clone()];
    for j in i + 1..=i + steps {
        let next = walk_step(&grid, &win, p.m, j, out.last().expect("non-empty"), rng);
        out.push(next);
    }
    Ok(out)
}

/// Sample mean and its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    fn from_sums(sum: f64, sum_sq: f64, n: u64) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = if n > 1 { ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
        Estimate { mean, stderr: (var / nf).sqrt() }
    }

    /// `|a − b|` in units of the combined standard error.
    pub fn z_distance(&self, other: &Estimate) -> f64 {
        let se = (self.stderr.powi(2) + other.stderr.powi(2)).sqrt();
        let diff = (self.mean - other.mean).abs();
        if se == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / se
        }
    }
}

/// `q̂(x → y, i, t)`: frequency of `x_{i+t} = y` given `x_i = x`.
pub fn estimate_q(
    p: &WalkParams,
    x: &GridPoint,
    y: &GridPoint,
    i: u64,
    t: u64,
    samples: u64,
    rng: &mut impl Rng,
) -> Result<Estimate> {
    let mut hits = 0u64;
    for _ in 0..samples {
        if walk_from(p, x, i, t, rng)?.last() == Some(y) {
            hits += 1;
        }
    }
    Ok(Estimate::from_sums(hits as f64, hits as f64, samples))
}

/// `p̂(x, y, i, t)`: frequency of `y ∈ FS(x_{i+t−1}, x_{i+t})` given `x_i = x`.
pub fn estimate_p(
    p: &WalkParams,
    x: &GridPoint,
    y: &GridPoint,
    i: u64,
    t: u64,
    samples: u64,
    rng: &mut impl Rng,
) -> Result<Estimate> {
    if t == 0 {
        return Err(Error::Parameter("segment offset t starts at 1".into()));
    }
    let mut hits = 0u64;
    for _ in 0..samples {
        let w = walk_from(p, x, i, t, rng)?;
        if folded_segment(&w[w.len() - 2], &w[w.len() - 1]).contains(y) {
            hits += 1;
        }
    }
    Ok(Estimate::from_sums(hits as f64, hits as f64, samples))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaEstimate {
    pub gamma: Estimate,
    /// The candidate `y` attaining the largest estimate.
    pub argmax: GridPoint,
    /// Estimated `Σ_t (t−1)·p̂` at every grid point, in index order.
    pub per_point: Vec<f64>,
}

/// Estimates `max_y Σ_{t=1}^{K−i} (t−1)·p(x, y, i, t)` over every `y` in the
/// grid, from walks started at `x_i = x`. The maximum of estimates is not a
/// certified maximum.
pub fn estimate_gamma(p: &WalkParams, i: u64, x: &GridPoint, samples: u64, rng: &mut impl Rng) -> Result<GammaEstimate> {
    let (grid, _) = p.parts()?;
    if grid.size() > GAMMA_GRID_LIMIT {
        return Err(Error::ScaleGuard { what: "gamma grid", needed: grid.size() as u128, limit: GAMMA_GRID_LIMIT as u128 });
    }
    if samples == 0 {
        return Err(Error::Parameter("gamma needs at least one sample".into()));
    }
    let steps = p.len.saturating_sub(i);
    let size = grid.size() as usize;
    let (mut sum, mut sum_sq) = (vec![0f64; size], vec![0f64; size]);
    let mut contrib = vec![0f64; size];
    let mut touched: Vec<usize> = Vec::new();
    for _ in 0..samples {
        let w = walk_from(p, x, i, steps, rng)?;
        for t in 2..=steps as usize {
            let mut seg: Vec<usize> =
                folded_segment(&w[t - 1], &w[t]).points().iter().map(|q| grid.index(q) as usize).collect();
            seg.sort_unstable();
            seg.dedup();
            for c in seg {
                if contrib[c] == 0.0 {
                    touched.push(c);
                }
                contrib[c] += (t - 1) as f64;
            }
        }
        for c in touched.drain(..) {
            sum[c] += contrib[c];
            sum_sq[c] += contrib[c] * contrib[c];
            contrib[c] = 0.0;
        }
    }
    let best = (0..size)
        .max_by(|&a, &b| sum[a].total_cmp(&sum[b]).then_with(|| b.cmp(&a)))
        .expect("non-empty grid");
    let per_point = sum.iter().map(|s| s / samples as f64).collect();
    Ok(GammaEstimate {
        gamma: Estimate::from_sums(sum[best], sum_sq[best], samples),
        argmax: grid.point_at(best as u64),
        per_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::instance_rng;

    fn pt(c: &[i64]) -> GridPoint {
        GridPoint::new(c.to_vec())
    }

    #[test]
    fn single_step_is_uniform_on_the_window() {
        let p = WalkParams::toy();
        let mut rng = instance_rng(1);
        let e = estimate_q(&p, &pt(&[16, 1, 5]), &pt(&[2, 4, 6]), 0, 1, 20_000, &mut rng).unwrap();
        assert!((e.mean - 1.0 / 64.0).abs() < 4.0 * e.stderr);
        let off = estimate_q(&p, &pt(&[16, 1, 5]), &pt(&[16, 1, 5]), 0, 1, 1000, &mut rng).unwrap();
        assert_eq!(off.mean, 0.0);
    }

    #[test]
    fn resampled_step_can_land_anywhere() {
        let p = WalkParams::toy();
        let w = walk_from(&p, &pt(&[1, 1, 1]), 3, 1, &mut instance_rng(0)).unwrap();
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn first_segment_has_zero_weight() {
        // with K − i = 1 only t = 1 exists, whose factor is zero
        let p = WalkParams::toy();
        let g = estimate_gamma(&p, 15, &pt(&[1, 1, 1]), 200, &mut instance_rng(2)).unwrap();
        assert_eq!(g.gamma.mean, 0.0);
        assert!(g.per_point.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gamma_is_finite_and_positive() {
        let p = WalkParams::toy();
        let g = estimate_gamma(&p, 0, &pt(&[1, 1, 1]), 500, &mut instance_rng(3)).unwrap();
        assert!(g.gamma.mean > 0.0 && g.gamma.stderr.is_finite());
    }
}
