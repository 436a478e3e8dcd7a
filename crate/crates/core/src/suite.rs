//! Trial generation and batch execution over a grid of configurations.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::Func;
use crate::linalg::{block_diagonal, inverse_pd, sqrt_psd, HermitianMatrix, ToleranceConfig};
use crate::report::{IneqId, InequalityReport};
use crate::sampling::{
    haar_unitary, mix_seed, random_hermitian, random_member, random_nonmember, random_pd, random_psd_singular,
    random_weights, reject_members, trial_rng, SamplerConfig, TrialRng,
};
use crate::subalgebra::{relative_distance_to_subalgebra, BlockPartition, PositiveMapSpec, UnitaryMixture};
use crate::verifiers as v;

/// Draws per trial before an ill-conditioned trial is given up.
pub const MAX_RESAMPLES: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub enum MapChoice {
    /// The block pinching for the trial partition.
    Pinch,
    Trace,
    /// Fresh mixture of `k` Haar unitaries with random weights per trial.
    HaarMix(usize),
    Explicit(PositiveMapSpec),
}

impl MapChoice {
    pub fn label(&self) -> String {
        match self {
            MapChoice::Pinch => "pinch".into(),
            MapChoice::Trace => "trace".into(),
            MapChoice::HaarMix(k) => format!("haar{k}"),
            MapChoice::Explicit(m) => m.label(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    /// Draws from the precondition class.
    Random,
    /// Draws satisfying the equality characterization.
    InClause,
    /// Draws bounded away from the equality characterization.
    OutOfClause,
}

impl std::str::FromStr for SampleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(SampleMode::Random),
            "in-clause" | "in_clause" => Ok(SampleMode::InClause),
            "out-of-clause" | "out_of_clause" => Ok(SampleMode::OutOfClause),
            _ => Err(Error::Parse(format!("unknown sampling mode `{s}`"))),
        }
    }
}

/// Everything needed to draw and check one trial.
#[derive(Clone, Debug)]
pub struct TrialSetup {
    pub id: IneqId,
    pub n: usize,
    pub partition: BlockPartition,
    /// Defaults per id when absent.
    pub func: Option<Func>,
    pub map: MapChoice,
    pub mode: SampleMode,
    /// Spectrum range of sampled positive operators.
    pub spectrum: (f64, f64),
    /// Relative distance from the equality set for out-of-clause draws.
    pub min_distance: f64,
    /// Resolvent parameter.
    pub lambda: f64,
    /// Rank of `A` for the singular PSD case; full rank when absent.
    pub rank: Option<usize>,
    /// Fixed inputs that override the samplers.
    pub a: Option<HermitianMatrix>,
    pub b: Option<HermitianMatrix>,
    pub tol: ToleranceConfig,
}

impl TrialSetup {
    pub fn new(id: IneqId, n: usize) -> Self {
        Self {
            id,
            n,
            partition: if id == IneqId::Hadamard { BlockPartition::diagonal(n) } else { BlockPartition::halves(n) },
            func: None,
            map: MapChoice::Pinch,
            mode: SampleMode::Random,
            spectrum: (0.1, 10.0),
            min_distance: 0.1,
            lambda: 1.0,
            rank: None,
            a: None,
            b: None,
            tol: ToleranceConfig::default(),
        }
    }

    pub fn with_partition(mut self, p: BlockPartition) -> Self {
        self.partition = p;
        self
    }

    pub fn with_func(mut self, f: Func) -> Self {
        self.func = Some(f);
        self
    }

    pub fn with_map(mut self, m: MapChoice) -> Self {
        self.map = m;
        self
    }

    pub fn with_mode(mut self, m: SampleMode) -> Self {
        self.mode = m;
        self
    }

    pub fn with_spectrum(mut self, lo: f64, hi: f64) -> Self {
        self.spectrum = (lo, hi);
        self
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn with_inputs(mut self, a: Option<HermitianMatrix>, b: Option<HermitianMatrix>) -> Self {
        self.a = a;
        self.b = b;
        self
    }

    pub fn with_tol(mut self, tol: ToleranceConfig) -> Self {
        self.tol = tol;
        self
    }

    /// The function argument, or the id's default.
    pub fn function(&self) -> Option<Func> {
        if !self.id.takes_function() {
            return None;
        }
        let default = match self.id {
            IneqId::OpMonotone | IneqId::DetMonotone => "power:0.5",
            IneqId::OpConvex | IneqId::TraceJensen => "square",
            _ => "reciprocal",
        };
        Some(self.func.clone().unwrap_or_else(|| default.parse().expect("default function parses")))
    }

    fn effective_partition(&self) -> BlockPartition {
        if self.id == IneqId::Hadamard {
            BlockPartition::diagonal(self.n)
        } else {
            self.partition.clone()
        }
    }

    /// Whether the sampling mode makes sense for this id.
    pub fn applicable(&self) -> bool {
        match self.mode {
            SampleMode::Random => true,
            SampleMode::InClause => self.id.has_equality_clause(),
            SampleMode::OutOfClause => {
                self.id.has_equality_clause()
                    && !self.function().is_some_and(|f| f.flags().linear)
                    && !self.effective_partition().is_full()
            }
        }
    }

    pub fn context(&self) -> String {
        let mut s = format!("n={} partition={}", self.n, self.effective_partition());
        if let Some(f) = self.function() {
            s.push_str(&format!(" fn={f}"));
        }
        if self.id.takes_map() {
            s.push_str(&format!(" map={}", self.map.label()));
        }
        if matches!(self.id, IneqId::ResolventI | IneqId::ResolventIi) {
            s.push_str(&format!(" lambda={}", self.lambda));
        }
        if let Some(r) = self.rank {
            s.push_str(&format!(" rank={r}"));
        }
        if self.a.is_some() {
            s.push_str(" input=A");
        }
        if self.b.is_some() {
            s.push_str(" input=B");
        }
        s.push_str(&format!(
            " mode={}",
            match self.mode {
                SampleMode::Random => "random",
                SampleMode::InClause => "in-clause",
                SampleMode::OutOfClause => "out-of-clause",
            }
        ));
        s
    }

    pub fn validate(&self) -> Result<()> {
        self.tol.validate()?;
        self.sampler().validate()?;
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Precondition(format!("λ = {} must be positive", self.lambda)));
        }
        for (name, m) in [("A", &self.a), ("B", &self.b)] {
            if let Some(m) = m {
                if m.dim() != self.n {
                    return Err(Error::Shape(format!("{name} is {0}x{0}, expected n = {1}", m.dim(), self.n)));
                }
            }
        }
        if let MapChoice::Explicit(PositiveMapSpec::UnitaryMixing(mix)) = &self.map {
            if mix.dim() != self.n {
                return Err(Error::Shape(format!("mixture acts on {0}x{0}, expected n = {1}", mix.dim(), self.n)));
            }
        }
        if !function_fits(self.id, self.func.as_ref()) {
            let f = self.func.as_ref().map(ToString::to_string).unwrap_or_default();
            return Err(Error::Precondition(format!("{f} does not meet the function class of {}", self.id)));
        }
        if !self.applicable() {
            return Err(Error::Precondition(format!("{} cannot be sampled in this mode", self.id)));
        }
        Ok(())
    }

    /// Whether a trial draws anything, so that redrawing can help.
    pub fn has_random_inputs(&self) -> bool {
        self.a.is_none() || (self.id.takes_b() && self.b.is_none()) || matches!(self.map, MapChoice::HaarMix(_))
    }

    pub(crate) fn sampler(&self) -> SamplerConfig {
        let mut cfg = SamplerConfig::new(self.n)
            .with_partition(self.effective_partition())
            .with_spectrum(self.spectrum.0, self.spectrum.1);
        cfg.rank = self.rank;
        cfg
    }
}

/// Concrete inputs for one check.
#[derive(Clone, Debug)]
pub struct Instance {
    pub a: HermitianMatrix,
    pub b: Option<HermitianMatrix>,
    pub map: PositiveMapSpec,
}

fn draw_map(setup: &TrialSetup, rng: &mut TrialRng) -> Result<PositiveMapSpec> {
    Ok(match &setup.map {
        MapChoice::Pinch => PositiveMapSpec::Pinching(setup.effective_partition()),
        MapChoice::Trace => PositiveMapSpec::TraceMap,
        MapChoice::HaarMix(k) => {
            let weights = random_weights(*k, rng);
            let terms = weights.into_iter().map(|w| (haar_unitary(setup.n, rng), w)).collect();
            PositiveMapSpec::UnitaryMixing(UnitaryMixture::new(terms)?)
        }
        MapChoice::Explicit(m) => m.clone(),
    })
}

/// PD matrix supported on the first block and zero elsewhere.
fn first_block_supported(cfg: &SamplerConfig, rng: &mut TrialRng) -> HermitianMatrix {
    let sizes = cfg.partition.sizes();
    let head = SamplerConfig { n: sizes[0], partition: BlockPartition::full(sizes[0]), ..cfg.clone() };
    let b1 = random_pd(&head, rng);
    let rest = cfg.n - sizes[0];
    if rest == 0 {
        return b1;
    }
    block_diagonal(&[b1, HermitianMatrix::zeros(rest)])
}

/// `B^{1/2} A⁻¹ B^{1/2}`, the matrix whose membership decides equality for
/// the second determinant-ratio inequality.
fn matic2_clause(a: &HermitianMatrix, b: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    let root = sqrt_psd(b, tol)?;
    Ok(inverse_pd(a)?.congruence(root.as_matrix()))
}

fn draw_a(setup: &TrialSetup, cfg: &SamplerConfig, rng: &mut TrialRng) -> Result<HermitianMatrix> {
    use IneqId::*;
    Ok(match setup.mode {
        SampleMode::Random => {
            let hermitian = match setup.id {
                Square => true,
                TraceJensen => setup.function().is_some_and(|f| f.domain().contains(-cfg.spectrum.1)),
                _ => false,
            };
            if hermitian {
                random_hermitian(cfg, rng)
            } else if setup.rank.is_some() && matches!(setup.id, ArvesonRight | UpHadamard | ResolventI | ResolventIi | Square) {
                random_psd_singular(cfg, rng)
            } else {
                random_pd(cfg, rng)
            }
        }
        SampleMode::InClause => random_member(cfg, rng),
        SampleMode::OutOfClause => random_nonmember(cfg, setup.min_distance, rng)?,
    })
}

/// Draws the inputs of one trial.
pub fn generate(setup: &TrialSetup, rng: &mut TrialRng) -> Result<Instance> {
    use IneqId::*;
    let cfg = setup.sampler();
    let map = draw_map(setup, rng)?;
    let mut a = match &setup.a {
        Some(a) => a.clone(),
        None => draw_a(setup, &cfg, rng)?,
    };
    let b = match (&setup.b, setup.id) {
        (Some(b), _) => Some(b.clone()),
        (None, Matic1 | Matic2) => Some(match setup.mode {
            SampleMode::Random => random_member(&cfg, rng),
            SampleMode::InClause => {
                // alternate between the two ways into the equality clause
                if rng.random_bool(0.5) {
                    if setup.a.is_none() {
                        a = random_pd(&cfg, rng);
                    }
                    if setup.id == Matic1 {
                        HermitianMatrix::zeros(setup.n)
                    } else {
                        first_block_supported(&cfg, rng)
                    }
                } else {
                    random_member(&cfg, rng)
                }
            }
            SampleMode::OutOfClause => {
                let b = random_member(&cfg, rng);
                if setup.id == Matic2 && setup.a.is_none() {
                    let mut found = false;
                    for _ in 0..100 {
                        let clause = matic2_clause(&a, &b, &setup.tol)?;
                        if relative_distance_to_subalgebra(clause.as_matrix(), &cfg.partition)? >= setup.min_distance {
                            found = true;
                            break;
                        }
                        a = random_nonmember(&cfg, setup.min_distance, rng)?;
                    }
                    if !found {
                        return Err(Error::Precondition("could not draw an out-of-clause pair".into()));
                    }
                }
                b
            }
        }),
        (None, UpMatic) => Some(random_pd(&cfg, rng)),
        (None, MaticVarCounterexample) => {
            Some(reject_members(&cfg.partition, setup.min_distance, rng, |rng| random_pd(&cfg, rng))?)
        }
        (None, _) => None,
    };
    Ok(Instance { a, b, map })
}

fn need_b(inst: &Instance) -> Result<&HermitianMatrix> {
    inst.b.as_ref().ok_or_else(|| Error::Precondition("this inequality needs a second operator B".into()))
}

/// Runs the verifier for `setup.id` on `inst`. `up_hadamard` yields both
/// sides; every other id yields one report.
pub fn evaluate(setup: &TrialSetup, inst: &Instance) -> Result<Vec<InequalityReport>> {
    use IneqId::*;
    let tol = &setup.tol;
    let p = setup.effective_partition();
    let a = &inst.a;
    let f = setup.function();
    let func = || f.as_ref().expect("function ids carry a function");
    let reports = match setup.id {
        Hadamard => vec![v::hadamard(a, tol)?],
        Fischer => vec![v::fischer(a, &p, tol)?],
        ArvesonLeft => {
            let (left, _) = v::arveson(a, &p, tol)?;
            vec![left.ok_or_else(|| Error::Regularity("the left inequality needs regular A".into()))?]
        }
        ArvesonRight => vec![v::arveson(a, &p, tol)?.1],
        Square => vec![v::square(a, &p, tol)?],
        Inverse => vec![v::inverse(a, &p, tol)?],
        ResolventI => vec![v::resolvent(a, &p, setup.lambda, tol)?.0],
        ResolventIi => vec![v::resolvent(a, &p, setup.lambda, tol)?.1],
        OpMonotone => vec![v::op_monotone(func(), a, &p, tol)?],
        OpConvex => vec![v::op_convex(func(), a, &p, tol)?],
        DetMonotone => vec![v::det_monotone(func(), a, &p, tol)?],
        DetPerturb => vec![v::det_perturb(a, &p, tol)?],
        Matic1 => vec![v::matic1(a, need_b(inst)?, &p, tol)?],
        Matic2 => vec![v::matic2(a, need_b(inst)?, &p, tol)?],
        MaticVarCounterexample => vec![v::matic_var_counterexample(need_b(inst)?, &p, tol)?],
        TraceJensen => vec![v::trace_jensen(func(), a, &inst.map, tol)?],
        LogconvexDet => vec![v::logconvex_det(func(), a, &inst.map, tol)?],
        UpHadamard => {
            let (left, right) = v::up_hadamard(a, &inst.map, tol)?;
            left.into_iter().chain(std::iter::once(right)).collect()
        }
        UpPerturb => vec![v::up_perturb(a, &inst.map, tol)?],
        UpMatic => vec![v::up_matic(a, need_b(inst)?, &inst.map, tol)?],
        GaussianEntropy => vec![v::gaussian_entropy(a, &p, tol)?],
    };
    Ok(reports)
}

/// One trial: draw, check, and redraw up to [`MAX_RESAMPLES`] times while
/// the draw is too ill-conditioned to invert reliably.
pub fn run_trial(setup: &TrialSetup, seed: u64, trial: u64) -> Result<Vec<InequalityReport>> {
    let mut rng = trial_rng(seed, trial);
    let mut last = None;
    for _ in 0..MAX_RESAMPLES {
        let inst = generate(setup, &mut rng)?;
        match evaluate(setup, &inst) {
            Ok(mut reports) => {
                let context = setup.context();
                for r in &mut reports {
                    r.seed = seed;
                    r.trial = trial;
                    r.context = context.clone();
                }
                return Ok(reports);
            }
            Err(e @ Error::IllConditioned(_)) if setup.has_random_inputs() => {
                last = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Result of one trial: reports, or the error that stopped it.
pub type TrialResult = std::result::Result<Vec<InequalityReport>, TrialFailure>;

#[derive(Clone, Debug, Serialize)]
pub struct TrialFailure {
    pub ineq_id: IneqId,
    pub trial: u64,
    pub seed: u64,
    pub context: String,
    pub error: String,
    /// Ill-conditioned draws are skipped rather than counted as failures.
    pub ill_conditioned: bool,
}

/// Runs `trials` trials in parallel; results come back ordered by trial.
pub fn run_trials(setup: &TrialSetup, seed: u64, trials: usize) -> Vec<TrialResult> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            run_trial(setup, seed, t).map_err(|e| TrialFailure {
                ineq_id: setup.id,
                trial: t,
                seed,
                context: setup.context(),
                ill_conditioned: matches!(e, Error::IllConditioned(_)),
                error: e.to_string(),
            })
        })
        .collect()
}

/// Parameter grid for a suite run.
#[derive(Clone, Debug)]
pub struct SuiteGrid {
    pub ids: Vec<IneqId>,
    pub dims: Vec<usize>,
    /// Partition texts resolved per dimension (`diag`, `halves`, `2,2`, …).
    pub partitions: Vec<String>,
    /// Overrides the per-id default function lists.
    pub functions: Option<Vec<Func>>,
    pub trials: usize,
    pub mode: SampleMode,
    pub mix_terms: usize,
    pub tol: ToleranceConfig,
}

impl Default for SuiteGrid {
    fn default() -> Self {
        Self {
            ids: IneqId::ALL.to_vec(),
            dims: vec![2, 3, 4, 8],
            partitions: vec!["diag".into(), "halves".into()],
            functions: None,
            trials: 200,
            mode: SampleMode::Random,
            mix_terms: 3,
            tol: ToleranceConfig::default(),
        }
    }
}

fn parse_all(list: &[&str]) -> Vec<Func> {
    list.iter().map(|s| s.parse().expect("grid function parses")).collect()
}

/// Default function lists per id.
pub fn default_functions(id: IneqId) -> Vec<Func> {
    match id {
        IneqId::OpMonotone | IneqId::DetMonotone => parse_all(&["power:0.5", "inv_perturb", "shift:log:1", "rep:[0,0;(1,1)]"]),
        IneqId::OpConvex | IneqId::TraceJensen => parse_all(&["square", "reciprocal", "one_plus_inv", "crep:[0,0,0;(1,1)]"]),
        IneqId::LogconvexDet => parse_all(&["reciprocal", "one_plus_inv"]),
        _ => Vec::new(),
    }
}

impl SuiteGrid {
    /// Every applicable cell of the grid, in a fixed order.
    pub fn cells(&self) -> Result<Vec<TrialSetup>> {
        let mut cells = Vec::new();
        for &id in &self.ids {
            for &n in &self.dims {
                let mut partitions = Vec::new();
                for text in &self.partitions {
                    let p = BlockPartition::parse(text, Some(n))?;
                    if !partitions.contains(&p) {
                        partitions.push(p);
                    }
                }
                if id == IneqId::Hadamard {
                    partitions = vec![BlockPartition::diagonal(n)];
                }
                let funcs: Vec<Option<Func>> = if id.takes_function() {
                    let fs = self.functions.clone().unwrap_or_else(|| default_functions(id));
                    fs.into_iter().map(Some).collect()
                } else {
                    vec![None]
                };
                let mut maps = vec![];
                for p in &partitions {
                    maps.push((p.clone(), MapChoice::Pinch));
                }
                if id.takes_map() {
                    maps.push((partitions[0].clone(), MapChoice::Trace));
                    maps.push((partitions[0].clone(), MapChoice::HaarMix(self.mix_terms)));
                }
                for f in &funcs {
                    for (p, m) in &maps {
                        let mut setup = TrialSetup::new(id, n)
                            .with_partition(p.clone())
                            .with_map(m.clone())
                            .with_mode(self.mode)
                            .with_tol(self.tol);
                        setup.func = f.clone();
                        if !setup.applicable() || !function_fits(id, setup.function().as_ref()) {
                            continue;
                        }
                        cells.push(setup);
                    }
                }
            }
        }
        if cells.is_empty() || self.trials == 0 {
            return Err(Error::Precondition("the suite grid is empty".into()));
        }
        Ok(cells)
    }
}

/// Whether a user-supplied function meets the id's requirements.
fn function_fits(id: IneqId, f: Option<&Func>) -> bool {
    let Some(f) = f else { return true };
    let fl = f.flags();
    match id {
        IneqId::OpMonotone => fl.operator_monotone,
        IneqId::DetMonotone => fl.operator_monotone && fl.positive_valued && !fl.constant,
        IneqId::OpConvex => fl.operator_convex,
        IneqId::TraceJensen => fl.operator_convex || fl.log_convex,
        IneqId::LogconvexDet => fl.log_convex && fl.positive_valued,
        _ => true,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Confusion {
    pub true_positive: usize,
    pub false_positive: usize,
    pub false_negative: usize,
    pub true_negative: usize,
    /// Reports with no expected value.
    pub undecided: usize,
}

impl Confusion {
    fn record(&mut self, r: &InequalityReport) {
        match (r.equality_expected, r.equality_detected) {
            (None, _) => self.undecided += 1,
            (Some(true), true) => self.true_positive += 1,
            (Some(false), true) => self.false_positive += 1,
            (Some(true), false) => self.false_negative += 1,
            (Some(false), false) => self.true_negative += 1,
        }
    }

    pub fn mismatches(&self) -> usize {
        self.false_positive + self.false_negative
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdSummary {
    pub ineq_id: IneqId,
    pub reports: usize,
    pub holds: usize,
    pub violations: usize,
    /// Smallest `gap / scale`.
    pub min_gap: f64,
    pub equality_detected: usize,
    pub equality: Confusion,
    pub skipped: usize,
    pub errors: usize,
}

impl IdSummary {
    fn new(ineq_id: IneqId) -> Self {
        Self {
            ineq_id,
            reports: 0,
            holds: 0,
            violations: 0,
            min_gap: f64::INFINITY,
            equality_detected: 0,
            equality: Confusion::default(),
            skipped: 0,
            errors: 0,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteRun {
    pub reports: Vec<InequalityReport>,
    pub failures: Vec<TrialFailure>,
}

impl SuiteRun {
    pub fn push(&mut self, results: Vec<TrialResult>) {
        for r in results {
            match r {
                Ok(reports) => self.reports.extend(reports),
                Err(f) => self.failures.push(f),
            }
        }
    }

    pub fn summary(&self) -> Vec<IdSummary> {
        let mut by_id: BTreeMap<IneqId, IdSummary> = BTreeMap::new();
        for r in &self.reports {
            let s = by_id.entry(r.ineq_id).or_insert_with(|| IdSummary::new(r.ineq_id));
            s.reports += 1;
            s.holds += usize::from(r.holds);
            s.violations += usize::from(r.is_violation());
            s.equality_detected += usize::from(r.equality_detected);
            s.min_gap = s.min_gap.min(r.gap / r.scale);
            s.equality.record(r);
        }
        for f in &self.failures {
            let s = by_id.entry(f.ineq_id).or_insert_with(|| IdSummary::new(f.ineq_id));
            if f.ill_conditioned {
                s.skipped += 1;
            } else {
                s.errors += 1;
            }
        }
        by_id.into_values().collect()
    }

    /// Reports contradicting a guaranteed inequality, plus non-skippable errors.
    pub fn failed(&self) -> bool {
        self.reports.iter().any(InequalityReport::is_violation) || self.failures.iter().any(|f| !f.ill_conditioned)
    }
}

/// Runs every cell of `grid`. Cell `k` uses seed `mix_seed(seed, k)` and
/// the output is ordered by cell, then trial.
pub fn run_suite(grid: &SuiteGrid, seed: u64) -> Result<SuiteRun> {
    let cells = grid.cells()?;
    let mut run = SuiteRun::default();
    let results: Vec<Vec<TrialResult>> = cells
        .par_iter()
        .enumerate()
        .map(|(k, setup)| run_trials(setup, mix_seed(seed, k as u64), grid.trials))
        .collect();
    for r in results {
        run.push(r);
    }
    Ok(run)
}
