//! Side-length schedules for the constant-round and polynomial-round
//! staircase families.

use crate::error::{Error, Result};

/// `round(n^e)`, clamped to `[1, n]`.
pub fn round_pow(n: u64, e: f64) -> u64 {
    let v = (n as f64).powf(e).round();
    (v as u64).clamp(1, n.max(1))
}

/// `⌊n^α⌋`, robust against `n^α` landing a hair below an integer.
pub fn floor_pow(n: u64, alpha: f64) -> u64 {
    ((n as f64).powf(alpha) + 1e-9).floor() as u64
}

/// `ℓ_i = round(n^{(d^k − d^i)/(d^k − 1)})` for `i = 0..k`; for `d = 1`
/// the limit `n^{(k−i)/k}`.
pub fn ell_schedule(n: u64, d: usize, k: usize) -> Result<Vec<u64>> {
    if n < 1 || d < 1 || k < 1 {
        return Err(Error::Parameter(format!("schedule needs n, d, k >= 1 (got {n}, {d}, {k})")));
    }
    let df = d as f64;
    let dk = df.powi(k as i32);
    Ok((0..k)
        .map(|i| {
            let e = if d == 1 {
                (k - i) as f64 / k as f64
            } else {
                (dk - df.powi(i as i32)) / (dk - 1.0)
            };
            if i == 0 {
                n
            } else {
                round_pow(n, e)
            }
        })
        .collect())
}

/// `(d^{k+1} − d^k)/(d^k − 1)`, the per-round exponent of the constant-round
/// algorithm; `1/k` when `d = 1`.
pub fn const_round_exponent(d: usize, k: usize) -> f64 {
    if d == 1 {
        return 1.0 / k as f64;
    }
    let df = d as f64;
    let dk = df.powi(k as i32);
    (dk * df - dk) / (dk - 1.0)
}

/// `(d−1) − α(d−2)/d`.
pub fn poly_round_exponent(d: usize, alpha: f64) -> f64 {
    let df = d as f64;
    (df - 1.0) - alpha * (df - 2.0) / df
}

/// Parameters of the random-walk staircase family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolyParams {
    pub n: u64,
    pub d: usize,
    pub alpha: f64,
    /// Window side `ℓ = round(n^{1 − 2α/d})`.
    pub ell: u64,
    /// Resampling period `m = n/ℓ`.
    pub m: u64,
    /// Round count `⌊n^α⌋`.
    pub k: u64,
    /// Walk length `K = 2k`.
    pub walk_len: u64,
}

pub fn poly_params(n: u64, d: usize, alpha: f64) -> Result<PolyParams> {
    if d < 3 {
        return Err(Error::Parameter(format!("random-walk staircases need d >= 3 (got {d})")));
    }
    if !(alpha > 0.0 && alpha < d as f64 / 2.0) {
        return Err(Error::Parameter(format!("alpha must lie in (0, d/2) (got {alpha})")));
    }
    let ell = round_pow(n, 1.0 - 2.0 * alpha / d as f64);
    if ell < 2 || ell >= n {
        return Err(Error::Parameter(format!("window side {ell} degenerate for n = {n}")));
    }
    let m = ((n as f64 / ell as f64).round() as u64).max(1);
    let k = floor_pow(n, alpha).max(1);
    Ok(PolyParams { n, d, alpha, ell, m, k, walk_len: 2 * k })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_examples() {
        assert_eq!(ell_schedule(64, 2, 2).unwrap(), vec![64, 16]);
        assert_eq!(ell_schedule(256, 3, 2).unwrap(), vec![256, 64]);
        assert_eq!(ell_schedule(100, 1, 2).unwrap(), vec![100, 10]);
        for (n, d, k) in [(7, 2, 3), (1000, 3, 4), (5, 1, 5), (2, 4, 2)] {
            let s = ell_schedule(n, d, k).unwrap();
            assert_eq!(s[0], n);
            assert!(s.windows(2).all(|w| w[0] >= w[1]));
            assert!(s.iter().all(|&l| (1..=n).contains(&l)));
        }
    }

    #[test]
    fn exponents() {
        assert!((const_round_exponent(2, 2) - 4.0 / 3.0).abs() < 1e-12);
        assert!((const_round_exponent(3, 1) - 3.0).abs() < 1e-12);
        assert!((poly_round_exponent(3, 0.5) - (2.0 - 1.0 / 6.0)).abs() < 1e-12);
    }

    #[test]
    fn poly_examples() {
        let p = poly_params(64, 3, 0.5).unwrap();
        assert_eq!((p.ell, p.m, p.k, p.walk_len), (16, 4, 8, 16));
        let q = poly_params(16, 3, 0.75).unwrap();
        assert_eq!((q.ell, q.m, q.walk_len), (4, 4, 16));
        assert!(poly_params(64, 2, 0.5).is_err());
        assert!(poly_params(4, 3, 1.4).is_err());
        assert_eq!(floor_pow(27, 0.5), 5);
        assert_eq!(floor_pow(125, 0.5), 11);
    }
}
