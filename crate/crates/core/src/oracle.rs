//! Round-batched oracle access.
//!
//! An algorithm submits one batch per round and receives every answer at
//! once. The session ledgers each round and refuses submissions past its
//! round limit or query budget.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridPoint};

/// A query source over a fixed grid.
pub trait Oracle {
    type Answer: Clone;

    fn grid(&self) -> &Grid;

    /// Answer for an in-grid point.
    fn answer(&self, p: &GridPoint) -> Self::Answer;
}

/// Oracles answering with integer values.
pub trait ValueFunction: Oracle<Answer = i64> {}
impl<T: Oracle<Answer = i64> + ?Sized> ValueFunction for T {}

impl<O: Oracle + ?Sized> Oracle for &O {
    type Answer = O::Answer;
    fn grid(&self) -> &Grid {
        (**self).grid()
    }
    fn answer(&self, p: &GridPoint) -> O::Answer {
        (**self).answer(p)
    }
}

/// Optional caps on a session.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SessionLimits {
    pub round_limit: Option<usize>,
    pub query_budget: Option<u64>,
    /// Charge points again when re-queried in a later round.
    pub strict_recharge: bool,
}

impl SessionLimits {
    pub fn rounds(limit: usize) -> Self {
        SessionLimits { round_limit: Some(limit), ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub batch: Vec<GridPoint>,
    pub charged: u64,
    pub cumulative: u64,
}

#[derive(Clone, Debug, Default)]
pub struct RoundLedger {
    rounds: Vec<RoundRecord>,
    total_queries: u64,
}

impl RoundLedger {
    pub fn rounds(&self) -> &[RoundRecord] {
        &self.rounds
    }
    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }
    pub fn total_queries(&self) -> u64 {
        self.total_queries
    }

    /// CSV with header `round,batch_size,charged,cumulative_queries`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("round,batch_size,charged,cumulative_queries\n");
        for (i, r) in self.rounds.iter().enumerate() {
            let _ = writeln!(s, "{},{},{},{}", i + 1, r.batch.len(), r.charged, r.cumulative);
        }
        s
    }
}

/// A single-owner interaction with an oracle.
pub struct OracleSession<'a, O: Oracle + ?Sized> {
    oracle: &'a O,
    limits: SessionLimits,
    ledger: RoundLedger,
    known: HashMap<u64, O::Answer>,
}

impl<'a, O: Oracle + ?Sized> OracleSession<'a, O> {
    pub fn open(oracle: &'a O, limits: SessionLimits) -> Self {
        OracleSession { oracle, limits, ledger: RoundLedger::default(), known: HashMap::new() }
    }

    pub fn unlimited(oracle: &'a O) -> Self {
        Self::open(oracle, SessionLimits::default())
    }

    pub fn grid(&self) -> &Grid {
        self.oracle.grid()
    }
    pub fn limits(&self) -> SessionLimits {
        self.limits
    }
    pub fn ledger(&self) -> &RoundLedger {
        &self.ledger
    }
    pub fn rounds_used(&self) -> usize {
        self.ledger.round_count()
    }
    pub fn queries_used(&self) -> u64 {
        self.ledger.total_queries()
    }

    /// Rounds left before the limit, `None` when unlimited.
    pub fn rounds_remaining(&self) -> Option<usize> {
        self.limits.round_limit.map(|l| l.saturating_sub(self.rounds_used()))
    }

    /// Previously answered value, if any.
    pub fn known(&self, p: &GridPoint) -> Option<&O::Answer> {
        self.known.get(&self.grid().index(p))
    }

    pub fn is_known(&self, p: &GridPoint) -> bool {
        self.grid().contains(p) && self.known.contains_key(&self.grid().index(p))
    }

    /// All answered points, in no particular order.
    pub fn known_points(&self) -> impl Iterator<Item = (GridPoint, &O::Answer)> + '_ {
        let g = *self.grid();
        self.known.iter().map(move |(&i, a)| (g.point_at(i), a))
    }

    pub fn known_count(&self) -> usize {
        self.known.len()
    }

    /// Distinct points of `batch` that a submission would charge.
    pub fn charge_of(&self, batch: &[GridPoint]) -> u64 {
        let g = self.grid();
        let mut seen = std::collections::HashSet::with_capacity(batch.len());
        batch
            .iter()
            .filter(|p| {
                let i = g.index(p);
                seen.insert(i) && (self.limits.strict_recharge || !self.known.contains_key(&i))
            })
            .count() as u64
    }

    /// Submits one round. Answers align with `batch`.
    pub fn submit_round(&mut self, batch: &[GridPoint]) -> Result<Vec<O::Answer>> {
        if let Some(limit) = self.limits.round_limit {
            if self.rounds_used() >= limit {
                return Err(Error::RoundLimitExceeded { limit });
            }
        }
        let grid = *self.grid();
        for p in batch {
            grid.check(p)?;
        }
        let charged = self.charge_of(batch);
        if let Some(budget) = self.limits.query_budget {
            if self.queries_used() + charged > budget {
                return Err(Error::QueryBudgetExceeded {
                    budget,
                    spent: self.queries_used(),
                    requested: charged,
                });
            }
        }
        let mut answers = Vec::with_capacity(batch.len());
        for p in batch {
            let i = grid.index(p);
            let a = match self.known.get(&i) {
                Some(a) if !self.limits.strict_recharge => a.clone(),
                _ => {
                    let a = self.oracle.answer(p);
                    self.known.insert(i, a.clone());
                    a
                }
            };
            answers.push(a);
        }
        self.ledger.total_queries += charged;
        self.ledger.rounds.push(RoundRecord {
            batch: batch.to_vec(),
            charged,
            cumulative: self.ledger.total_queries,
        });
        Ok(answers)
    }

    /// Uncharged access for post-hoc audits.
    pub fn audit(&self, p: &GridPoint) -> O::Answer {
        self.oracle.answer(p)
    }
}

impl<O: ValueFunction + ?Sized> OracleSession<'_, O> {
    /// Checks `p` against all its neighbours without touching the ledger.
    pub fn verify_local_min(&self, p: &GridPoint) -> bool {
        verify_local_min(self.oracle, p)
    }

    /// Smallest known value inside `filter`, ties broken lexicographically.
    pub fn min_known_where(&self, filter: impl Fn(&GridPoint) -> bool) -> Option<(GridPoint, i64)> {
        let mut best: Option<(GridPoint, i64)> = None;
        for (p, &v) in self.known_points() {
            if !filter(&p) {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bp, bv)) => v < *bv || (v == *bv && p < *bp),
            };
            if better {
                best = Some((p, v));
            }
        }
        best
    }
}

/// `f(p) <= f(q)` for every neighbour `q` of `p`.
pub fn verify_local_min<O: ValueFunction + ?Sized>(oracle: &O, p: &GridPoint) -> bool {
    let g = oracle.grid();
    if !g.contains(p) {
        return false;
    }
    let v = oracle.answer(p);
    g.neighbors_unchecked(p).iter().all(|q| oracle.answer(q) >= v)
}

/// Index of the lexicographically smallest minimum of `(point, value)` pairs.
pub fn argmin_lex<'p>(items: impl IntoIterator<Item = (&'p GridPoint, i64)>) -> Option<(&'p GridPoint, i64)> {
    let mut best: Option<(&GridPoint, i64)> = None;
    for (p, v) in items {
        let better = match best {
            None => true,
            Some((bp, bv)) => v < bv || (v == bv && p < bp),
        };
        if better {
            best = Some((p, v));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Linear(Grid);
    impl Oracle for Linear {
        type Answer = i64;
        fn grid(&self) -> &Grid {
            &self.0
        }
        fn answer(&self, p: &GridPoint) -> i64 {
            p.coords().iter().sum()
        }
    }

    fn pt(c: &[i64]) -> GridPoint {
        GridPoint::new(c.to_vec())
    }

    #[test]
    fn fresh_session_and_empty_batch() {
        let o = Linear(Grid::new(2, 4).unwrap());
        let mut s = OracleSession::open(&o, SessionLimits::rounds(2));
        assert_eq!(s.rounds_used(), 0);
        assert!(s.submit_round(&[]).unwrap().is_empty());
        assert_eq!(s.rounds_used(), 1);
        assert_eq!(s.queries_used(), 0);
    }

    #[test]
    fn limits_are_enforced() {
        let o = Linear(Grid::new(1, 5).unwrap());
        let mut zero = OracleSession::open(&o, SessionLimits::rounds(0));
        assert_eq!(zero.submit_round(&[pt(&[1])]), Err(Error::RoundLimitExceeded { limit: 0 }));
        let mut one = OracleSession::open(&o, SessionLimits::rounds(1));
        one.submit_round(&[pt(&[1])]).unwrap();
        assert!(matches!(one.submit_round(&[pt(&[2])]), Err(Error::RoundLimitExceeded { .. })));
    }

    #[test]
    fn budget_rejection_is_atomic() {
        let o = Linear(Grid::new(1, 10).unwrap());
        let limits = SessionLimits { query_budget: Some(3), ..Default::default() };
        let mut s = OracleSession::open(&o, limits);
        s.submit_round(&[pt(&[1]), pt(&[2])]).unwrap();
        let err = s.submit_round(&[pt(&[3]), pt(&[4])]).unwrap_err();
        assert_eq!(err, Error::QueryBudgetExceeded { budget: 3, spent: 2, requested: 2 });
        assert_eq!(s.rounds_used(), 1);
        assert!(!s.is_known(&pt(&[3])));
        assert_eq!(s.submit_round(&[pt(&[3]), pt(&[1])]).unwrap(), vec![3, 1]);
        assert_eq!(s.queries_used(), 3);
    }

    #[test]
    fn duplicates_and_recall() {
        let o = Linear(Grid::new(1, 10).unwrap());
        let mut s = OracleSession::unlimited(&o);
        s.submit_round(&[pt(&[4]), pt(&[4]), pt(&[5])]).unwrap();
        assert_eq!(s.queries_used(), 2);
        s.submit_round(&[pt(&[4]), pt(&[6])]).unwrap();
        assert_eq!(s.queries_used(), 3);
        let strict = SessionLimits { strict_recharge: true, ..Default::default() };
        let mut t = OracleSession::open(&o, strict);
        t.submit_round(&[pt(&[4]), pt(&[4])]).unwrap();
        t.submit_round(&[pt(&[4])]).unwrap();
        assert_eq!(t.queries_used(), 2);
        assert_eq!(
            s.ledger().to_csv(),
            "round,batch_size,charged,cumulative_queries\n1,3,2,2\n2,2,1,3\n"
        );
    }

    #[test]
    fn invalid_point_is_a_domain_error() {
        let o = Linear(Grid::new(2, 3).unwrap());
        let mut s = OracleSession::unlimited(&o);
        assert!(matches!(s.submit_round(&[pt(&[4, 1])]), Err(Error::Domain(_))));
        assert_eq!(s.rounds_used(), 0);
    }

    #[test]
    fn local_min_audit_is_free() {
        let o = Linear(Grid::new(2, 3).unwrap());
        let s = OracleSession::unlimited(&o);
        assert!(s.verify_local_min(&pt(&[1, 1])));
        assert!(!s.verify_local_min(&pt(&[2, 1])));
        assert_eq!(s.queries_used(), 0);
        let single = Linear(Grid::new(3, 1).unwrap());
        assert!(verify_local_min(&single, &pt(&[1, 1, 1])));
    }
}
