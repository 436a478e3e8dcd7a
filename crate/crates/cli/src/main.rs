//! `fkineq`: run inequality checks, suites, falsification searches and the
//! Gaussian entropy demo from the command line.

mod inputs;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fkineq::suite::{SuiteGrid, TrialResult};
use fkineq::{
    falsify, run_suite, run_trials, verifiers, BlockPartition, Error, Func, HermitianMatrix, IneqId, InequalityReport,
    SampleMode, ToleranceConfig, TrialSetup,
};

use output::{Format, Sink};

#[derive(Parser, Debug)]
#[command(name = "fkineq", version, about = "Determinant and operator inequalities for conditional expectations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check one inequality on sampled or supplied matrices.
    Check(CheckArgs),
    /// Run every registered inequality over a parameter grid.
    Suite(SuiteArgs),
    /// Search for inputs that minimize an inequality's gap.
    Falsify(FalsifyArgs),
    /// Entropy subadditivity for Gaussian vectors.
    Demo(DemoArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Base seed; falls back to FKINEQ_SEED, then 0.
    #[arg(long, env = "FKINEQ_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long = "tol-psd")]
    tol_psd: Option<f64>,
    #[arg(long = "tol-eq")]
    tol_eq: Option<f64>,
    /// Write reports here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::JsonLines)]
    format: Format,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Directory receiving the witness matrices of reported trials.
    #[arg(long)]
    dump: Option<PathBuf>,
}

impl Common {
    fn tolerances(&self) -> Result<ToleranceConfig, Error> {
        let mut tol = ToleranceConfig::default();
        if let Some(t) = self.tol_psd {
            tol.psd_tol = t;
        }
        if let Some(t) = self.tol_eq {
            tol.equality_tol = t;
        }
        tol.validate()?;
        Ok(tol)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Random,
    InClause,
    OutOfClause,
}

impl From<Mode> for SampleMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Random => SampleMode::Random,
            Mode::InClause => SampleMode::InClause,
            Mode::OutOfClause => SampleMode::OutOfClause,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct Instance {
    #[arg(long)]
    ineq: String,
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// `diag`, `halves`, `full` or block sizes such as `2,2`.
    #[arg(long, default_value = "halves")]
    partition: String,
    /// Scalar function, e.g. `power:0.5`, `shift:log:1`, `rep:[0,0;(1,1)]`.
    #[arg(long = "fn")]
    func: Option<String>,
    /// `pinch`, `trace`, `haar:<k>` or `mix:<file>`.
    #[arg(long, default_value = "pinch")]
    map: String,
    #[arg(long, value_enum, default_value_t = Mode::Random)]
    mode: Mode,
    /// Resolvent parameter.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Rank of sampled singular PSD inputs.
    #[arg(long)]
    rank: Option<usize>,
    /// Spectrum range of sampled positive operators, `lo,hi`.
    #[arg(long, default_value = "0.1,10")]
    spectrum: String,
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long = "matrix-b")]
    matrix_b: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    instance: Instance,
    /// Defaults to 100, or 1 when --matrix is given.
    #[arg(long)]
    trials: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    /// Comma-separated ids; all registered ids by default.
    #[arg(long)]
    ineq: Option<String>,
    #[arg(long, default_value = "2,3,4,8")]
    dims: String,
    /// Semicolon-separated partitions, each resolved per dimension.
    #[arg(long, default_value = "diag;halves")]
    partitions: String,
    /// Semicolon-separated functions replacing the per-id defaults.
    #[arg(long = "fn")]
    func: Option<String>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = Mode::Random)]
    mode: Mode,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct FalsifyArgs {
    #[command(flatten)]
    instance: Instance,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct DemoArgs {
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value = "halves")]
    partition: String,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[command(flatten)]
    common: Common,
}

/// Exit statuses: 0 success, 1 a guaranteed inequality failed (or the
/// counterexample was not reproduced), 2 usage or input errors.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn configure_jobs(common: &Common) -> Result<(), Failure> {
    if let Some(j) = common.jobs {
        if j == 0 {
            return Err(Failure::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn parse_spectrum(text: &str) -> Result<(f64, f64), Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("bad spectrum bound `{s}`")));
    match parts.as_slice() {
        [lo, hi] => Ok((parse(lo)?, parse(hi)?)),
        _ => Err(Failure::Usage(format!("spectrum `{text}` must be `lo,hi`"))),
    }
}

fn build_setup(inst: &Instance, tol: ToleranceConfig) -> Result<TrialSetup, Failure> {
    let id: IneqId = inst.ineq.parse()?;
    let a = inst.matrix.as_deref().map(inputs::read_hermitian).transpose()?;
    let b = inst.matrix_b.as_deref().map(inputs::read_hermitian).transpose()?;
    let n = a.as_ref().map_or(inst.n, HermitianMatrix::dim);
    let partition = BlockPartition::parse(&inst.partition, Some(n))?;
    let (lo, hi) = parse_spectrum(&inst.spectrum)?;
    let mut setup = TrialSetup::new(id, n)
        .with_mode(inst.mode.into())
        .with_spectrum(lo, hi)
        .with_map(inputs::parse_map(&inst.map, n)?)
        .with_inputs(a, b)
        .with_tol(tol);
    if id != IneqId::Hadamard {
        setup = setup.with_partition(partition);
    }
    if let Some(f) = &inst.func {
        if !id.takes_function() {
            return Err(Failure::Usage(format!("{id} takes no function argument")));
        }
        setup = setup.with_func(f.parse::<Func>()?);
    }
    if let Some(r) = inst.rank {
        setup = setup.with_rank(r);
    }
    setup.lambda = inst.lambda;
    setup.validate()?;
    Ok(setup)
}

fn input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Precondition(_) | Error::Regularity(_) | Error::Shape(_) | Error::Domain { .. } | Error::NotHermitian { .. }
    )
}

fn check(args: CheckArgs) -> Result<(), Failure> {
    configure_jobs(&args.common)?;
    let tol = args.common.tolerances()?;
    let setup = build_setup(&args.instance, tol)?;
    let trials = args.trials.unwrap_or(if setup.a.is_some() { 1 } else { 100 });
    if trials == 0 {
        return Err(Failure::Usage("--trials must be positive".into()));
    }
    let results = run_trials(&setup, args.common.seed, trials);
    let mut sink = Sink::open(&args.common)?;
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(rs) => reports.extend(rs),
            Err(f) => errors.push(f),
        }
    }
    for r in &reports {
        sink.write(r)?;
    }
    sink.finish()?;
    output::dump_witnesses(args.common.dump.as_deref(), reports.iter())?;
    output::print_summary(&reports, &errors);
    if !setup.has_random_inputs() {
        if let Some(f) = errors.first() {
            return Err(Failure::Usage(f.error.clone()));
        }
    }
    verdict(&reports, &errors)
}

fn verdict(reports: &[InequalityReport], errors: &[fkineq::suite::TrialFailure]) -> Result<(), Failure> {
    if let Some(r) = reports.iter().find(|r| r.is_violation()) {
        return Err(Failure::Check(format!("{} violated in trial {} (gap {:.3e})", r.ineq_id, r.trial, r.gap)));
    }
    if let Some(f) = errors.iter().find(|f| !f.ill_conditioned) {
        return Err(Failure::Check(format!("{} trial {} failed: {}", f.ineq_id, f.trial, f.error)));
    }
    let counter: Vec<_> = reports.iter().filter(|r| r.ineq_id == IneqId::MaticVarCounterexample).collect();
    if !counter.is_empty() && counter.iter().all(|r| r.holds) {
        return Err(Failure::Check("no violation of the generalized ratio inequality was found".into()));
    }
    Ok(())
}

fn split_list(text: &str, sep: char) -> Vec<String> {
    text.split(sep).map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

fn suite(args: SuiteArgs) -> Result<(), Failure> {
    configure_jobs(&args.common)?;
    let tol = args.common.tolerances()?;
    let ids = match &args.ineq {
        Some(list) => split_list(list, ',').iter().map(|s| s.parse()).collect::<Result<Vec<IneqId>, _>>()?,
        None => IneqId::ALL.to_vec(),
    };
    let dims = split_list(&args.dims, ',')
        .iter()
        .map(|s| s.parse::<usize>().map_err(|_| Failure::Usage(format!("bad dimension `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let functions = match &args.func {
        Some(list) => Some(split_list(list, ';').iter().map(|s| s.parse()).collect::<Result<Vec<Func>, _>>()?),
        None => None,
    };
    let grid = SuiteGrid {
        ids,
        dims,
        partitions: split_list(&args.partitions, ';'),
        functions,
        trials: args.trials,
        mode: args.mode.into(),
        tol,
        ..SuiteGrid::default()
    };
    let run = run_suite(&grid, args.common.seed)?;
    let mut sink = Sink::open(&args.common)?;
    for r in &run.reports {
        sink.write(r)?;
    }
    sink.finish()?;
    output::dump_witnesses(
        args.common.dump.as_deref(),
        run.reports.iter().filter(|r| r.is_violation() || r.equality_mismatch()),
    )?;
    output::print_suite_summary(&run);
    verdict(&run.reports, &run.failures)
}

fn falsify_cmd(args: FalsifyArgs) -> Result<(), Failure> {
    configure_jobs(&args.common)?;
    let tol = args.common.tolerances()?;
    let setup = build_setup(&args.instance, tol)?;
    let out = falsify(&setup, args.budget, args.common.seed).map_err(|e| {
        if input_error(&e) {
            Failure::Usage(e.to_string())
        } else {
            Failure::Check(e.to_string())
        }
    })?;
    let mut sink = Sink::open(&args.common)?;
    sink.write(&out.best)?;
    sink.finish()?;
    output::dump_witnesses(args.common.dump.as_deref(), std::iter::once(&out.best))?;
    eprintln!(
        "falsify {}: {} evaluations, {} restarts, best gap {:.6e} (relative {:.3e}), first violation {}",
        setup.id,
        out.evaluations,
        out.restarts,
        out.best.gap,
        out.best.gap / out.best.scale,
        out.first_violation.map_or("none".to_string(), |e| format!("at evaluation {e}")),
    );
    verdict(std::slice::from_ref(&out.best), &[])
}

fn demo(args: DemoArgs) -> Result<(), Failure> {
    configure_jobs(&args.common)?;
    let tol = args.common.tolerances()?;
    let partition = BlockPartition::parse(&args.partition, Some(args.n))?;
    eprintln!("bivariate normal, unit variances: entropy deficit h(X)+h(Y)-h(X,Y) = -ln(1-rho^2)/2");
    let mut reports = Vec::new();
    for (i, rho) in [0.0, 0.25, 0.5, 0.75, 0.9, 0.99].into_iter().enumerate() {
        let sigma = HermitianMatrix::from_real_rows(2, &[1.0, rho, rho, 1.0])?;
        let mut r = verifiers::gaussian_entropy(&sigma, &BlockPartition::diagonal(2), &tol)?;
        r.trial = i as u64;
        r.context = format!("n=2 rho={rho}");
        eprintln!("  rho = {rho:<5} deficit {:.6} (closed form {:.6})", r.gap, -0.5 * (1.0 - rho * rho).ln());
        reports.push(r);
    }
    let setup = TrialSetup::new(IneqId::GaussianEntropy, args.n).with_partition(partition).with_tol(tol);
    setup.validate()?;
    let results: Vec<TrialResult> = run_trials(&setup, args.common.seed, args.trials);
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(rs) => reports.extend(rs),
            Err(f) => errors.push(f),
        }
    }
    let mut sink = Sink::open(&args.common)?;
    for r in &reports {
        sink.write(r)?;
    }
    sink.finish()?;
    output::dump_witnesses(args.common.dump.as_deref(), reports.iter())?;
    output::print_summary(&reports, &errors);
    verdict(&reports, &errors)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => check(a),
        Command::Suite(a) => suite(a),
        Command::Falsify(a) => falsify_cmd(a),
        Command::Demo(a) => demo(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("fkineq: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("fkineq: {msg}");
            ExitCode::from(2)
        }
    }
}
