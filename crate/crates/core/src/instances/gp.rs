//! The grid path problem obtained from a constant-round staircase. Each
//! predecessor/successor query is answered from the staircase values at the
//! point and its neighbours, all asked in one round.

use crate::error::{Error, Result};
use crate::grid::{Grid, GridPoint};
use crate::oracle::Oracle;

use super::staircase::{StaircaseInstance, StaircaseKind};

/// `(pred, succ)`; `None` plays the role of "no".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NgAnswer {
    pub pred: Option<GridPoint>,
    pub succ: Option<GridPoint>,
}

#[derive(Clone, Debug)]
pub struct GpInstance {
    staircase: StaircaseInstance,
}

pub fn ls_to_gp(inst: StaircaseInstance) -> Result<GpInstance> {
    if inst.kind() != StaircaseKind::ConstRound {
        return Err(Error::Parameter("path reduction expects a constant-round staircase".into()));
    }
    Ok(GpInstance { staircase: inst })
}

/// Value queries spent per path query.
pub fn value_queries_per_answer(d: usize) -> usize {
    2 * d + 1
}

/// The path answer at `x` given `f(x)` and the values of its neighbours.
pub fn ng_from_values(fx: i64, neighbours: &[(GridPoint, i64)]) -> NgAnswer {
    if fx > 0 {
        return NgAnswer { pred: None, succ: None };
    }
    let find = |target: i64| neighbours.iter().find(|(_, v)| *v == target).map(|(p, _)| p.clone());
    let pred = if fx + 1 <= 0 { find(fx + 1) } else { None };
    let succ = find(fx - 1);
    NgAnswer { pred, succ }
}

impl GpInstance {
    pub fn staircase(&self) -> &StaircaseInstance {
        &self.staircase
    }

    /// Points whose value queries answer the path query at `x`.
    pub fn value_batch(&self, x: &GridPoint) -> Vec<GridPoint> {
        let mut b = vec![x.clone()];
        b.extend(self.staircase.grid().neighbors_unchecked(x));
        b
    }

    /// Last vertex of the path.
    pub fn path_end(&self) -> GridPoint {
        self.staircase.solution().clone()
    }
}

impl Oracle for GpInstance {
    type Answer = NgAnswer;
    fn grid(&self) -> &Grid {
        self.staircase.grid()
    }
    fn answer(&self, x: &GridPoint) -> NgAnswer {
        let s = &self.staircase;
        let nb: Vec<(GridPoint, i64)> = self
            .grid()
            .neighbors_unchecked(x)
            .into_iter()
            .map(|q| {
                let v = s.value_at(&q);
                (q, v)
            })
            .collect();
        ng_from_values(s.value_at(x), &nb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::staircase::{gen_const_staircase, EndSign};
    use crate::oracle::{verify_local_min, OracleSession};

    #[test]
    fn path_walk_reaches_the_local_min() {
        for seed in 0..30 {
            let s = gen_const_staircase(9, 2, 2, seed).unwrap();
            let gp = ls_to_gp(s.clone()).unwrap();
            let start = s.start().clone();
            let first = gp.answer(&start);
            assert_eq!(first.pred, None);
            let mut cur = start;
            let mut steps = 0u64;
            while let Some(next) = gp.answer(&cur).succ {
                assert!(s.value_at(&next) < s.value_at(&cur));
                cur = next;
                steps += 1;
            }
            assert_eq!(cur, gp.path_end());
            assert!(verify_local_min(&s, &cur));
            let expected = match s.end_sign() {
                EndSign::Minus => s.path_len(),
                EndSign::Plus => s.path_len().saturating_sub(1),
            };
            assert_eq!(steps, expected, "seed {seed}");
        }
    }

    #[test]
    fn off_path_and_end_answers() {
        let s = gen_const_staircase(27, 2, 2, 4).unwrap().with_end_sign(EndSign::Minus);
        let gp = ls_to_gp(s.clone()).unwrap();
        let far = s.grid().point_at(s.grid().size() - 1);
        if s.path_index(&far).is_none() {
            assert_eq!(gp.answer(&far), NgAnswer { pred: None, succ: None });
        }
        if s.path_len() > 0 {
            let end = gp.answer(s.end());
            assert!(end.pred.is_some());
            assert_eq!(end.succ, None);
            assert_eq!(gp.answer(s.start()).succ.as_ref(), Some(&s.path()[1]));
        }
    }

    #[test]
    fn one_round_of_value_queries_suffices() {
        let s = gen_const_staircase(27, 2, 2, 8).unwrap();
        let gp = ls_to_gp(s.clone()).unwrap();
        let x = s.path()[s.path().len() / 2].clone();
        let mut sess = OracleSession::unlimited(&s);
        let batch = gp.value_batch(&x);
        assert!(batch.len() <= value_queries_per_answer(2));
        let vals = sess.submit_round(&batch).unwrap();
        let nb: Vec<(GridPoint, i64)> = batch[1..].iter().cloned().zip(vals[1..].iter().copied()).collect();
        assert_eq!(ng_from_values(vals[0], &nb), gp.answer(&x));
        assert_eq!(sess.rounds_used(), 1);
    }
}
