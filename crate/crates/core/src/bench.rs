//! Parameter sweeps and power-law fits of query counts.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instances::schedule::{const_round_exponent, poly_round_exponent};
use crate::registry::{Registry, RunParams, RunRecord};

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub algorithm: String,
    /// Shared parameters; `n` and `seed` are overridden per trial.
    pub base: RunParams,
    pub ns: Vec<u64>,
    pub trials: u64,
    pub seed_base: u64,
}

impl SweepSpec {
    fn check(&self) -> Result<()> {
        if self.ns.is_empty() {
            return Err(Error::Parameter("sweep needs at least one n".into()));
        }
        if self.ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter("n values must be strictly increasing".into()));
        }
        if self.trials == 0 {
            return Err(Error::Parameter("sweep needs at least one trial".into()));
        }
        Ok(())
    }
}

/// Every trial of the sweep, sorted by `(n, seed)`.
pub fn sweep_runs(registry: &Registry, spec: &SweepSpec) -> Result<Vec<RunRecord>> {
    spec.check()?;
    let solver = registry.get(&spec.algorithm)?;
    let jobs: Vec<RunParams> = spec
        .ns
        .iter()
        .flat_map(|&n| (0..spec.trials).map(move |t| (n, spec.seed_base + t)))
        .map(|(n, seed)| RunParams { n, seed, ..spec.base })
        .collect();
    let mut rows = jobs.par_iter().map(|p| solver.run(p)).collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.params.n, r.params.seed));
    Ok(rows)
}

/// Aggregate of the trials at one `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub algorithm: String,
    pub d: usize,
    pub n: u64,
    pub grid_side: u64,
    pub k_or_alpha: String,
    pub trials: u64,
    pub mean_queries: f64,
    pub max_queries: u64,
    pub mean_rounds: f64,
    pub success_rate: f64,
}

pub const SWEEP_HEADER: &str =
    "algorithm,d,n,grid_side,k_or_alpha,trials,mean_queries,max_queries,mean_rounds,success_rate";

pub fn aggregate(rows: &[RunRecord]) -> Vec<SweepPoint> {
    let mut out: Vec<SweepPoint> = Vec::new();
    for chunk in rows.chunk_by(|a, b| a.params.n == b.params.n) {
        let t = chunk.len() as f64;
        let first = &chunk[0];
        out.push(SweepPoint {
            algorithm: first.algorithm.to_string(),
            d: first.params.d,
            n: first.params.n,
            grid_side: first.grid_side,
            k_or_alpha: first.k_or_alpha(),
            trials: chunk.len() as u64,
            mean_queries: chunk.iter().map(|r| r.report.queries_used as f64).sum::<f64>() / t,
            max_queries: chunk.iter().map(|r| r.report.queries_used).max().unwrap_or(0),
            mean_rounds: chunk.iter().map(|r| r.report.rounds_used as f64).sum::<f64>() / t,
            success_rate: chunk.iter().filter(|r| r.report.success).count() as f64 / t,
        });
    }
    out
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut s = format!("{SWEEP_HEADER}\n");
    for p in points {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{:.4},{},{:.4},{:.4}",
            p.algorithm, p.d, p.n, p.grid_side, p.k_or_alpha, p.trials, p.mean_queries, p.max_queries, p.mean_rounds,
            p.success_rate
        );
    }
    s
}

/// Two columns, `grid_side mean_queries`, for gnuplot.
pub fn sweep_dat(points: &[SweepPoint]) -> String {
    let mut s = String::from("# grid_side mean_queries\n");
    for p in points {
        let _ = writeln!(s, "{} {:.4}", p.grid_side, p.mean_queries);
    }
    s
}

pub fn runs_csv(rows: &[RunRecord]) -> String {
    let mut s = format!("{}\n", RunRecord::CSV_HEADER);
    for r in rows {
        let _ = writeln!(s, "{}", r.csv_row());
    }
    s
}

/// Closed-form exponent the fit is compared against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Theory {
    ConstLs { d: usize, k: usize },
    PolyLs { d: usize, alpha: f64 },
    OneD { k: usize },
}

impl Theory {
    pub fn exponent(&self) -> f64 {
        match *self {
            Theory::ConstLs { d, k } => const_round_exponent(d, k),
            Theory::PolyLs { d, alpha } => poly_round_exponent(d, alpha),
            Theory::OneD { k } => 1.0 / k as f64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub predicted: f64,
    pub abs_delta: f64,
}

/// Least squares of `ln y` against `ln x`.
pub fn fit_power_law(points: &[(f64, f64)], theory: Theory) -> Result<FitResult> {
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::Parameter("power-law fit needs positive data".into()));
    }
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 {
        return Err(Error::Parameter("fit needs at least three distinct sizes".into()));
    }
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = points.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if syy == 0.0 {
        return Err(Error::Parameter("fit data is constant".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = (1.0 - sse / syy).clamp(0.0, 1.0);
    let predicted = theory.exponent();
    Ok(FitResult { slope, intercept, r_squared, predicted, abs_delta: (slope - predicted).abs() })
}

/// Reads `(size, queries)` pairs from a sweep CSV (`grid_side`,
/// `mean_queries`) or a run CSV (`n`, `queries_used`).
pub fn fit_points_from_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?.split(',').collect();
    let col = |name: &str| header.iter().position(|h| h.trim() == name);
    let (xc, yc) = match (col("grid_side"), col("mean_queries"), col("n"), col("queries_used")) {
        (Some(x), Some(y), _, _) => (x, y),
        (_, _, Some(x), Some(y)) => (x, y),
        _ => return Err(Error::Parse("CSV lacks size and query columns".into())),
    };
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            let get = |c: usize| -> Result<f64> {
                f.get(c)
                    .and_then(|v| v.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("line {}: bad numeric field", i + 2)))
            };
            Ok((get(xc)?, get(yc)?))
        })
        .collect()
}
