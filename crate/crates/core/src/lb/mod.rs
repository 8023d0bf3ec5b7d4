//! Brute-force checks of the lower-bound counting arguments at toy scale.

pub mod gamma;
pub mod goodness;
pub mod score;

pub use gamma::{estimate_gamma, estimate_p, estimate_q, Estimate, GammaEstimate, WalkParams};
pub use goodness::{
    classify_all, classify_good, counting_slack, enumerate_goodness, hard_budget, simulate, AlgorithmUnderTest,
    FullGridRound1, GoodnessReport, GoodnessRow, RoundView, Toy, UniformBoundaryDnc, ZeroQuery,
};
pub use score::{blocked_set, probability_score, verify_cost_lemma, CostCheck};
