use std::fmt;

use crate::grid::GridPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HaltReason {
    /// The algorithm ran its schedule to completion.
    Normal,
    /// A divide-and-conquer search narrowed to a single point.
    Dacs,
    /// A steepest-descent step found no smaller neighbour.
    SteepestDescentFixpoint,
    /// The session refused a further round before a solution was found.
    RoundLimit,
}

impl fmt::Display for HaltReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HaltReason::Normal => "normal",
            HaltReason::Dacs => "dacs",
            HaltReason::SteepestDescentFixpoint => "steepest_descent_fixpoint",
            HaltReason::RoundLimit => "round_limit",
        })
    }
}

/// Outcome of one algorithm run. `success` is filled by a post-hoc audit
/// that is not charged to the session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub solution: GridPoint,
    pub rounds_used: usize,
    pub queries_used: u64,
    pub halted_by: HaltReason,
    pub success: bool,
}
