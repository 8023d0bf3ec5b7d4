//! Plain-text instance files.
//!
//! ```text
//! const_round 2 64 2 7 -
//! 1 1
//! 40 12
//! 47 20
//! ```
//!
//! The header is `kind d n k_or_alpha seed end_sign`; each following line is
//! one connecting point. The trace is rebuilt on load.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridPoint};

use super::schedule::poly_params;
use super::staircase::{const_grid_side, EndSign, StaircaseInstance, StaircaseKind};

pub fn write_instance(s: &StaircaseInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {} {} {} {}",
        s.kind().as_str(),
        s.d(),
        s.n(),
        s.param(),
        s.seed(),
        s.end_sign()
    );
    for p in s.connecting_points() {
        let line: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

fn parse<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    tok.ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("malformed {what}")))
}

pub fn read_instance(text: &str) -> Result<StaircaseInstance> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty instance file".into()))?;
    let mut h = header.split_whitespace();
    let kind = match h.next() {
        Some("const_round") => StaircaseKind::ConstRound,
        Some("poly_round") => StaircaseKind::PolyRound,
        other => return Err(Error::Parse(format!("unknown kind {other:?}"))),
    };
    let d: usize = parse(h.next(), "dimension")?;
    let n: u64 = parse(h.next(), "size")?;
    let param: f64 = parse(h.next(), "k_or_alpha")?;
    let seed: u64 = parse(h.next(), "seed")?;
    let end_sign = match h.next() {
        Some("-") => EndSign::Minus,
        Some("+") => EndSign::Plus,
        other => return Err(Error::Parse(format!("bad end sign {other:?}"))),
    };
    let side = match kind {
        StaircaseKind::ConstRound => {
            if param.fract() != 0.0 || param < 1.0 {
                return Err(Error::Parse(format!("k must be a positive integer, got {param}")));
            }
            const_grid_side(n, d, param as usize)?
        }
        StaircaseKind::PolyRound => poly_params(n, d, param)?.n,
    };
    let grid = Grid::new(d, side)?;
    let mut points = Vec::new();
    for line in lines {
        let coords: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad coordinate in `{line}`"))))
            .collect::<Result<_>>()?;
        if coords.len() != d {
            return Err(Error::Parse(format!("point `{line}` has {} coordinates, expected {d}", coords.len())));
        }
        points.push(GridPoint::new(coords));
    }
    StaircaseInstance::from_points(kind, grid, n, param, seed, points, end_sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::staircase::{gen_const_staircase, gen_poly_staircase};

    #[test]
    fn roundtrip() {
        for s in [gen_const_staircase(64, 2, 2, 7).unwrap(), gen_poly_staircase(27, 3, 0.5, 3).unwrap()] {
            let text = write_instance(&s);
            let back = read_instance(&text).unwrap();
            assert_eq!(back.connecting_points(), s.connecting_points());
            assert_eq!(back.path(), s.path());
            assert_eq!(back.end_sign(), s.end_sign());
            assert_eq!(write_instance(&back), text);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(read_instance(""), Err(Error::Parse(_))));
        assert!(matches!(read_instance("cube 2 3 1 0 -\n1 1\n"), Err(Error::Parse(_))));
        assert!(matches!(read_instance("const_round 2 4 1 0 -\n1 1 1\n"), Err(Error::Parse(_))));
        assert!(read_instance("const_round 2 4 1 0 -\n2 2\n").is_err());
    }
}
