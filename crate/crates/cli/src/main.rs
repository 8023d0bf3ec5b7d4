//! `roundsearch`: run, sweep and fit round-limited search algorithms.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use roundsearch::bench::{aggregate, fit_points_from_csv, fit_power_law, runs_csv, sweep_csv, sweep_dat, SweepSpec, Theory};
use roundsearch::instances::io::write_instance;
use roundsearch::instances::{gen_const_staircase, gen_poly_staircase};
use roundsearch::lb::{
    enumerate_goodness, verify_cost_lemma, AlgorithmUnderTest, FullGridRound1, Toy, UniformBoundaryDnc, ZeroQuery,
};
use roundsearch::registry::{Family, Registry, RunParams, RunRecord};
use roundsearch::{Error, Grid};

const THREADS_ENV: &str = "ROUNDSEARCH_THREADS";

#[derive(Parser)]
#[command(name = "roundsearch", version, about = "Round-limited local search and Brouwer laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trial and print a CSV row.
    Run(RunArgs),
    /// Run trials over several sizes and print aggregated rows.
    Sweep(SweepArgs),
    /// Fit a power law to a sweep or run CSV.
    Fit(FitArgs),
    /// Enumerate good staircases and check the cost bound.
    VerifyLb(VerifyLbArgs),
    /// Write a staircase instance file.
    Gen(GenArgs),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Query budget for the whole run.
    #[arg(long)]
    budget: Option<u64>,
    /// Round-1 sample constant: poly_ls defaults to 100, warm_start scales
    /// its default sample count by it.
    #[arg(long = "sample-const")]
    sample_const: Option<f64>,
    /// Solution position for one-dimensional instances.
    #[arg(long)]
    position: Option<i64>,
    /// Staircase family for the baselines: const_round or poly_round.
    #[arg(long, default_value = "const_round")]
    family: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn params(&self, n: u64) -> Result<RunParams, Error> {
        Ok(RunParams {
            d: self.d,
            n,
            k: self.k,
            alpha: self.alpha,
            seed: self.seed,
            budget: self.budget,
            sample_const: self.sample_const,
            position: self.position,
            family: self.family.parse::<Family>()?,
        })
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    alg: String,
    #[arg(long, default_value_t = 64)]
    n: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    alg: String,
    /// Comma-separated, strictly increasing sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    /// Print every run instead of the aggregate.
    #[arg(long)]
    raw: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoryArg {
    ConstLs,
    PolyLs,
    OneD,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    csv: PathBuf,
    #[arg(long, value_enum)]
    theory: TheoryArg,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum LbAlg {
    Zero,
    FullGrid,
    Dnc,
}

#[derive(Args)]
struct VerifyLbArgs {
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Window sides of the toy schedule.
    #[arg(long, value_delimiter = ',', default_value = "4,2")]
    ells: Vec<u64>,
    #[arg(long, value_enum, default_value = "dnc")]
    alg: LbAlg,
    /// Per-round budget of the divide-and-conquer strategy.
    #[arg(long, default_value_t = 4)]
    budget: u64,
    /// Largest window side in the cost sweep over d in 1..=3.
    #[arg(long, default_value_t = 4)]
    max_ell: u64,
}

#[derive(Args)]
struct GenArgs {
    /// const_round or poly_round.
    #[arg(long, default_value = "const_round")]
    kind: String,
    #[arg(long, default_value_t = 64)]
    n: u64,
    #[command(flatten)]
    common: Common,
}

enum Failure {
    Usage(String),
    Lemma(String),
    Scale(String),
    Other(String),
    /// Stdout was closed by the reader.
    Closed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) | Error::Parse(_) | Error::UnknownAlgorithm(_) => Failure::Usage(e.to_string()),
            Error::ScaleGuard { .. } => Failure::Scale(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

fn say(text: &str) -> Result<(), Failure> {
    let mut stdout = io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Err(Failure::Closed),
        Err(e) => Err(Failure::Other(format!("writing stdout: {e}"))),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    say(text)?;
    if let Some(path) = out {
        fs::write(path, text).map_err(|e| Failure::Other(format!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_run(a: RunArgs) -> Result<(), Failure> {
    let reg = Registry::default();
    let rec = reg.get(&a.alg)?.run(&a.common.params(a.n)?)?;
    emit(&format!("{}\n{}\n", RunRecord::CSV_HEADER, rec.csv_row()), a.common.out.as_ref())
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Failure> {
    let spec = SweepSpec {
        algorithm: a.alg,
        base: a.common.params(0)?,
        ns: a.n,
        trials: a.trials,
        seed_base: a.common.seed,
    };
    let rows = roundsearch::bench::sweep_runs(&Registry::default(), &spec)?;
    if a.raw {
        return emit(&runs_csv(&rows), a.common.out.as_ref());
    }
    let points = aggregate(&rows);
    emit(&sweep_csv(&points), a.common.out.as_ref())?;
    if let Some(path) = &a.common.out {
        let dat = path.with_extension("dat");
        fs::write(&dat, sweep_dat(&points)).map_err(|e| Failure::Other(format!("writing {}: {e}", dat.display())))?;
    }
    Ok(())
}

fn cmd_fit(a: FitArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&a.csv).map_err(|e| Failure::Usage(format!("reading {}: {e}", a.csv.display())))?;
    let theory = match a.theory {
        TheoryArg::ConstLs => Theory::ConstLs { d: a.d, k: a.k },
        TheoryArg::PolyLs => Theory::PolyLs { d: a.d, alpha: a.alpha },
        TheoryArg::OneD => Theory::OneD { k: a.k },
    };
    let f = fit_power_law(&fit_points_from_csv(&text)?, theory)?;
    say("slope,intercept,r_squared,predicted,abs_delta\n")?;
    say(&format!("{:.6},{:.6},{:.6},{:.6},{:.6}\n", f.slope, f.intercept, f.r_squared, f.predicted, f.abs_delta))?;
    Ok(())
}

fn cmd_verify_lb(a: VerifyLbArgs) -> Result<(), Failure> {
    let toy = Toy::new(a.d, a.ells)?;
    let alg: Box<dyn AlgorithmUnderTest> = match a.alg {
        LbAlg::Zero => Box::new(ZeroQuery),
        LbAlg::FullGrid => Box::new(FullGridRound1),
        LbAlg::Dnc => Box::new(UniformBoundaryDnc { budget: a.budget }),
    };
    let report = enumerate_goodness(alg.as_ref(), &toy)?;
    say(&format!("# goodness of {}\n", report.algorithm))?;
    say(&report.to_csv())?;

    say("# cost bound\n")?;
    say("d,ell,points,violations,max_total,bound\n")?;
    let mut violations = 0u64;
    for d in 1..=3usize {
        for ell in 2..=a.max_ell {
            let m = 2 * ell;
            let grid = Grid::new(d, m)?;
            let (mut bad, mut max) = (0u64, 0f64);
            for y in grid.points() {
                let c = verify_cost_lemma(&y, ell, m, d)?;
                bad += u64::from(!c.pass);
                max = max.max(*c.total.numer() as f64 / *c.total.denom() as f64);
            }
            say(&format!("{d},{ell},{},{bad},{max:.4},{}\n", grid.size(), d as u64 * ell))?;
            violations += bad;
        }
    }
    if violations > 0 {
        return Err(Failure::Lemma(format!("{violations} cost-bound violations")));
    }
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<(), Failure> {
    let c = &a.common;
    let inst = match a.kind.as_str() {
        "const_round" => gen_const_staircase(a.n, c.d, c.k, c.seed)?,
        "poly_round" => gen_poly_staircase(a.n, c.d, c.alpha, c.seed)?,
        other => return Err(Failure::Usage(format!("unknown instance kind `{other}`"))),
    };
    emit(&write_instance(&inst), c.out.as_ref())
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.parse().map_err(|_| Failure::Usage(format!("{THREADS_ENV} must be a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Other(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Fit(a) => cmd_fit(a),
        Command::VerifyLb(a) => cmd_verify_lb(a),
        Command::Gen(a) => cmd_gen(a),
    });
    let (code, msg) = match result {
        Ok(()) | Err(Failure::Closed) => return ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => (2, m),
        Err(Failure::Lemma(m)) => (3, m),
        Err(Failure::Scale(m)) => (4, m),
        Err(Failure::Other(m)) => (1, m),
    };
    eprintln!("roundsearch: {msg}");
    ExitCode::from(code)
}
