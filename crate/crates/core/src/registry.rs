//! Algorithms selectable by name, each paired with its default instance
//! family.

use std::fmt;

use rand::Rng;

use crate::brouwer::{const_rounds_brouwer, one_d_brouwer};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridPoint};
use crate::instances::{
    gen_1d_hard, gen_const_staircase, gen_poly_staircase, gen_sink_field, pad_brouwer, DirectionField,
    OneDHardInstance, OneDKind, StaircaseInstance,
};
use crate::oracle::{Oracle, OracleSession, SessionLimits};
use crate::rng::{algorithm_rng, instance_rng};
use crate::search::baselines::default_warm_start_samples;
use crate::search::poly_rounds::DEFAULT_SAMPLE_CONST;
use crate::search::{const_rounds_ls, log_rounds_dnc, one_d_ls, poly_rounds_ls, warm_start, PolyPlan, RunReport};

/// Staircase family for the baselines, which run on either.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Family {
    #[default]
    ConstRound,
    PolyRound,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "const_round" => Ok(Family::ConstRound),
            "poly_round" => Ok(Family::PolyRound),
            other => Err(Error::Parse(format!("unknown instance family `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunParams {
    pub d: usize,
    pub n: u64,
    pub k: usize,
    pub alpha: f64,
    pub seed: u64,
    pub budget: Option<u64>,
    pub sample_const: Option<f64>,
    /// Solution position for the one-dimensional families; drawn from the
    /// seed when absent.
    pub position: Option<i64>,
    pub family: Family,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            d: 2,
            n: 64,
            k: 2,
            alpha: 0.5,
            seed: 0,
            budget: None,
            sample_const: None,
            position: None,
            family: Family::ConstRound,
        }
    }
}

impl RunParams {
    fn limits(&self, rounds: Option<usize>) -> SessionLimits {
        SessionLimits { round_limit: rounds, query_budget: self.budget, strict_recharge: false }
    }

    fn position(&self) -> i64 {
        self.position.unwrap_or_else(|| instance_rng(self.seed).gen_range(1..=self.n.max(1) as i64))
    }
}

pub enum Instance {
    Staircase(StaircaseInstance),
    OneD(OneDHardInstance),
    Field(DirectionField),
}

impl Instance {
    pub fn grid(&self) -> &Grid {
        match self {
            Instance::Staircase(s) => s.grid(),
            Instance::OneD(s) => s.grid(),
            Instance::Field(f) => f.grid(),
        }
    }

    fn staircase(&self) -> Result<&StaircaseInstance> {
        match self {
            Instance::Staircase(s) => Ok(s),
            _ => Err(Error::Parameter("algorithm expects a staircase instance".into())),
        }
    }

    fn field(&self) -> Result<&DirectionField> {
        match self {
            Instance::Field(f) => Ok(f),
            _ => Err(Error::Parameter("algorithm expects a direction field".into())),
        }
    }
}

/// A named algorithm with a default instance family.
pub trait Solver: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether the run is parameterized by `α` rather than `k`.
    fn uses_alpha(&self) -> bool {
        false
    }

    fn instance(&self, p: &RunParams) -> Result<Instance>;

    fn solve(&self, instance: &Instance, p: &RunParams) -> Result<RunReport>;

    fn run(&self, p: &RunParams) -> Result<RunRecord> {
        let inst = self.instance(p)?;
        let report = self.solve(&inst, p)?;
        Ok(RunRecord {
            algorithm: self.name(),
            params: *p,
            uses_alpha: self.uses_alpha(),
            grid_side: inst.grid().side(),
            report,
        })
    }
}

/// One finished run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub algorithm: &'static str,
    pub params: RunParams,
    pub uses_alpha: bool,
    pub grid_side: u64,
    pub report: RunReport,
}

impl RunRecord {
    pub const CSV_HEADER: &'static str = "algorithm,d,n,k_or_alpha,seed,rounds_used,queries_used,success,solution";

    pub fn k_or_alpha(&self) -> String {
        if self.uses_alpha {
            format!("{}", self.params.alpha)
        } else {
            self.params.k.to_string()
        }
    }

    pub fn csv_row(&self) -> String {
        let r = &self.report;
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.algorithm,
            self.params.d,
            self.params.n,
            self.k_or_alpha(),
            self.params.seed,
            r.rounds_used,
            r.queries_used,
            u8::from(r.success),
            r.solution.dashed()
        )
    }
}

impl fmt::Display for RunRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.csv_row())
    }
}

fn staircase_family(p: &RunParams) -> Result<Instance> {
    Ok(Instance::Staircase(match p.family {
        Family::ConstRound => gen_const_staircase(p.n, p.d, p.k, p.seed)?,
        Family::PolyRound => gen_poly_staircase(p.n, p.d, p.alpha, p.seed)?,
    }))
}

fn one_d_params(p: &RunParams) -> Result<()> {
    if p.d != 1 {
        return Err(Error::Parameter(format!("one-dimensional algorithm run with d = {}", p.d)));
    }
    Ok(())
}

struct ConstLs;
impl Solver for ConstLs {
    fn name(&self) -> &'static str {
        "const_ls"
    }
    fn instance(&self, p: &RunParams) -> Result<Instance> {
        Ok(Instance::Staircase(gen_const_staircase(p.n, p.d, p.k, p.seed)?))
    }
    fn solve(&self, inst: &Instance, p: &RunParams) -> Result<RunReport> {
        let s = inst.staircase()?;
        let mut session = OracleSession::open(s, p.limits(Some(p.k)));
        Ok(const_rounds_ls(&mut session, p.k)?.run)
    }
}

struct PolyLs;
impl Solver for PolyLs {
    fn name(&self) -> &'static str {
        "poly_ls"
    }
    fn uses_alpha(&self) -> bool {
        true
    }
    fn instance(&self, p: &RunParams) -> Result<Instance> {
        Ok(Instance::Staircase(gen_poly_staircase(p.n, p.d, p.alpha, p.seed)?))
    }
    fn solve(&self, inst: &Instance, p: &RunParams) -> Result<RunReport> {
        let s = inst.staircase()?;
        let plan = PolyPlan::new(p.n, p.d, p.alpha, p.sample_const.unwrap_or(DEFAULT_SAMPLE_CONST))?;
        let mut session = OracleSession::open(s, p.limits(Some(plan.k as usize)));
        Ok(poly_rounds_ls(&mut session, plan, &mut algorithm_rng(p.seed))?.run)
    }
}

struct WarmStart;
impl Solver for WarmStart {
    fn name(&self) -> &'static str {
        "warm_start"
    }
    fn instance(&self, p: &RunParams) -> Result<Instance> {
        staircase_family(p)
    }
    fn solve(&self, inst: &Instance, p: &RunParams) -> Result<RunReport> {
        let s = inst.staircase()?;
        // the sample constant scales the default sample count
        let base = default_warm_start_samples(s.grid().size(), p.d) as f64;
        let t = (p.sample_const.unwrap_or(1.0) * base).ceil().max(1.0) as u64;
        let mut session = OracleSession::open(s, p.limits(None));
        warm_start(&mut session, t, &mut algorithm_rng(p.seed))
    }
}

struct LogDnc;
impl Solver for LogDnc {
    fn name(&self) -> &'static str {
        "log_dnc"
    }
    fn instance(&self, p: &RunParams) -> Result<Instance> {
        staircase_family(p)
    }
    fn solve(&self, inst: &Instance, p: &RunParams) -> Result<RunReport> {
        let s = inst.staircase()?;
        let mut session = OracleSession::open(s, p.limits(None));
        log_rounds_dnc(&mut session)
    }
}

struct OneDLs;
impl Solver for OneDLs {
    fn name(&self) -> &'static str {
        "one_d_ls"
    }
    fn instance(&self, p: &RunParams) -> Result<Instance> {
        one_d_params(p)?;
        Ok(Instance::OneD(gen_1d_hard(p.n, p.position(), OneDKind::LocalSearch)?))
    }
    fn solve(&self, inst: &Instance, p: &RunParams) -> Result<RunReport> {
        let Instance::OneD(s) = inst else {
            return Err(Error::Parameter("algorithm expects a one-dimensional instance".into()));
        };
        let mut session = OracleSession::open(s, p.limits(Some(p.k)));
        Ok(one_d_ls(&mut session, p.k)?.run)
    }
}

struct ConstBrouwer;
impl Solver for ConstBrouwer {
    fn name(&self) -> &'static str {
        "const_brouwer"
    }
    fn instance(&self, p: &RunParams) -> Result<Instance> {
        Ok(Instance::Field(pad_brouwer(gen_sink_field(p.n, p.d, brouwer_target(p)?)?)?))
    }
    fn solve(&self, inst: &Instance, p: &RunParams) -> Result<RunReport> {
        let mut session = OracleSession::open(inst.field()?, p.limits(Some(p.k)));
        Ok(const_rounds_brouwer(&mut session, p.k)?.run)
    }
}

struct OneDBrouwer;
impl Solver for OneDBrouwer {
    fn name(&self) -> &'static str {
        "one_d_brouwer"
    }
    fn instance(&self, p: &RunParams) -> Result<Instance> {
        one_d_params(p)?;
        Ok(Instance::Field(gen_1d_hard(p.n, p.position(), OneDKind::Brouwer)?.field()))
    }
    fn solve(&self, inst: &Instance, p: &RunParams) -> Result<RunReport> {
        let mut session = OracleSession::open(inst.field()?, p.limits(Some(p.k)));
        Ok(one_d_brouwer(&mut session, p.k)?.run)
    }
}

pub struct Registry {
    solvers: Vec<Box<dyn Solver>>,
}

impl Default for Registry {
    fn default() -> Self {
        Registry {
            solvers: vec![
                Box::new(ConstLs),
                Box::new(PolyLs),
                Box::new(WarmStart),
                Box::new(LogDnc),
                Box::new(OneDLs),
                Box::new(ConstBrouwer),
                Box::new(OneDBrouwer),
            ],
        }
    }
}

impl Registry {
    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.iter().map(|s| s.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Solver> {
        self.solvers
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::UnknownAlgorithm(name.to_string()))
    }

    pub fn register(&mut self, solver: Box<dyn Solver>) {
        self.solvers.retain(|s| s.name() != solver.name());
        self.solvers.push(solver);
    }
}

/// The seeded target of a `const_brouwer` run.
pub fn brouwer_target(p: &RunParams) -> Result<GridPoint> {
    let grid = Grid::new(p.d, p.n)?;
    Ok(grid.point_at(instance_rng(p.seed).gen_range(0..grid.size())))
}
