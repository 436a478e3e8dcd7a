//! Operator monotone, operator convex and log-convex scalar functions.
//!
//! Besides a small named catalog, functions can be given by their integral
//! representations with a finite atomic measure:
//!
//! * monotone: `f(t) = a + b t + Σⱼ wⱼ (λⱼ+1) t / (λⱼ+t)` with `b ≥ 0`,
//! * convex:   `f(t) = a + b t + c t² + Σⱼ wⱼ (λⱼ+1) t² / (λⱼ+t)` with `c ≥ 0`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    apply_fn_spectrum, eig_hermitian, inverse_pd, min_eigenvalue, HermitianMatrix, Interval, ToleranceConfig,
};
use crate::sampling::{random_hermitian, random_pd, random_psd_singular, trial_rng, SamplerConfig};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NamedFunction {
    /// `t^r`, `0 < r ≤ 1`
    Power(f64),
    Log,
    Log1p,
    /// `(λ+1) t / (λ+t)`
    ResolventFrac(f64),
    /// `(1 + 1/t)⁻¹ = t/(t+1)`
    InvPerturb,
    Reciprocal,
    /// `1 + 1/t`
    OnePlusInv,
    /// `a + b t`
    Linear { a: f64, b: f64 },
    Square,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub lambda: f64,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneRep {
    pub a: f64,
    pub b: f64,
    pub atoms: Vec<Atom>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexRep {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub atoms: Vec<Atom>,
}

fn check_atoms(atoms: &[Atom]) -> Result<()> {
    for a in atoms {
        if !(a.lambda > 0.0 && a.lambda.is_finite() && a.weight > 0.0 && a.weight.is_finite()) {
            return Err(Error::Parse(format!("atom ({}, {}) needs λ > 0 and w > 0", a.lambda, a.weight)));
        }
    }
    Ok(())
}

impl MonotoneRep {
    pub fn new(a: f64, b: f64, atoms: Vec<Atom>) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b >= 0.0) {
            return Err(Error::Parse(format!("monotone representation needs finite a and b ≥ 0, got ({a}, {b})")));
        }
        check_atoms(&atoms)?;
        Ok(Self { a, b, atoms })
    }

    fn eval(&self, t: f64) -> f64 {
        self.a + self.b * t + self.atoms.iter().map(|at| at.weight * (at.lambda + 1.0) * t / (at.lambda + t)).sum::<f64>()
    }

    fn derivative(&self, t: f64) -> f64 {
        self.b
            + self
                .atoms
                .iter()
                .map(|at| at.weight * (at.lambda + 1.0) * at.lambda / (at.lambda + t).powi(2))
                .sum::<f64>()
    }
}

impl ConvexRep {
    pub fn new(a: f64, b: f64, c: f64, atoms: Vec<Atom>) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && c >= 0.0) {
            return Err(Error::Parse(format!("convex representation needs finite a, b and c ≥ 0, got ({a}, {b}, {c})")));
        }
        check_atoms(&atoms)?;
        Ok(Self { a, b, c, atoms })
    }

    fn eval(&self, t: f64) -> f64 {
        self.a
            + self.b * t
            + self.c * t * t
            + self.atoms.iter().map(|at| at.weight * (at.lambda + 1.0) * t * t / (at.lambda + t)).sum::<f64>()
    }

    fn derivative(&self, t: f64) -> f64 {
        self.b
            + 2.0 * self.c * t
            + self
                .atoms
                .iter()
                .map(|at| at.weight * (at.lambda + 1.0) * (t * t + 2.0 * at.lambda * t) / (at.lambda + t).powi(2))
                .sum::<f64>()
    }
}

/// Catalog properties of a function on its domain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub operator_monotone: bool,
    pub operator_convex: bool,
    pub log_convex: bool,
    /// `f(t) > 0` for every `t > 0` in the domain.
    pub positive_valued: bool,
    /// Affine: `a + b t`.
    pub linear: bool,
    pub constant: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Func {
    Named(NamedFunction),
    Monotone(MonotoneRep),
    Convex(ConvexRep),
    /// `t ↦ f(t + s)`
    Shift(Box<Func>, f64),
    /// `t ↦ log f(t)`
    LogOf(Box<Func>),
}

impl From<NamedFunction> for Func {
    fn from(f: NamedFunction) -> Self {
        Func::Named(f)
    }
}

impl Func {
    pub fn power(r: f64) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::Parse(format!("power exponent {r} must lie in (0, 1]")));
        }
        Ok(Func::Named(NamedFunction::Power(r)))
    }

    pub fn linear(a: f64, b: f64) -> Self {
        Func::Named(NamedFunction::Linear { a, b })
    }

    pub fn shift(f: Func, s: f64) -> Self {
        Func::Shift(Box::new(f), s)
    }

    pub fn log_of(f: Func) -> Self {
        Func::LogOf(Box::new(f))
    }

    pub fn domain(&self) -> Interval {
        use NamedFunction::*;
        match self {
            Func::Named(Log | Reciprocal | OnePlusInv) => Interval::positive(),
            Func::Named(Linear { .. } | Square) => Interval::real_line(),
            Func::Named(_) | Func::Monotone(_) | Func::Convex(_) => Interval::nonnegative(),
            Func::Shift(f, s) => f.domain().shifted(-s),
            Func::LogOf(f) => f.domain(),
        }
    }

    /// Scalar value; `t` must lie in the domain.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let domain = self.domain();
        if !domain.contains(t) {
            return Err(Error::Domain { eigenvalue: t, domain: domain.to_string() });
        }
        self.eval_unchecked(t)
    }

    fn eval_unchecked(&self, t: f64) -> Result<f64> {
        use NamedFunction::*;
        let v = match self {
            Func::Named(Power(r)) => t.powf(*r),
            Func::Named(Log) => t.ln(),
            Func::Named(Log1p) => t.ln_1p(),
            Func::Named(ResolventFrac(l)) => (l + 1.0) * t / (l + t),
            Func::Named(InvPerturb) => t / (t + 1.0),
            Func::Named(Reciprocal) => 1.0 / t,
            Func::Named(OnePlusInv) => 1.0 + 1.0 / t,
            Func::Named(Linear { a, b }) => a + b * t,
            Func::Named(Square) => t * t,
            Func::Monotone(rep) => rep.eval(t),
            Func::Convex(rep) => rep.eval(t),
            Func::Shift(f, s) => f.eval_unchecked(t + s)?,
            Func::LogOf(f) => {
                let inner = f.eval_unchecked(t)?;
                if inner <= 0.0 {
                    return Err(Error::Domain { eigenvalue: t, domain: format!("{{t : {f}(t) > 0}}") });
                }
                inner.ln()
            }
        };
        Ok(v)
    }

    /// Closed-form derivative.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        use NamedFunction::*;
        let domain = self.domain();
        if !domain.contains(t) {
            return Err(Error::Domain { eigenvalue: t, domain: domain.to_string() });
        }
        let d = match self {
            Func::Named(Power(r)) => r * t.powf(r - 1.0),
            Func::Named(Log) => 1.0 / t,
            Func::Named(Log1p) => 1.0 / (1.0 + t),
            Func::Named(ResolventFrac(l)) => (l + 1.0) * l / (l + t).powi(2),
            Func::Named(InvPerturb) => 1.0 / (t + 1.0).powi(2),
            Func::Named(Reciprocal) | Func::Named(OnePlusInv) => -1.0 / (t * t),
            Func::Named(Linear { b, .. }) => *b,
            Func::Named(Square) => 2.0 * t,
            Func::Monotone(rep) => rep.derivative(t),
            Func::Convex(rep) => rep.derivative(t),
            Func::Shift(f, s) => f.derivative(t + s)?,
            Func::LogOf(f) => f.derivative(t)? / f.eval(t)?,
        };
        Ok(d)
    }

    pub fn flags(&self) -> Flags {
        use NamedFunction::*;
        match self {
            Func::Named(Power(r)) => Flags {
                operator_monotone: true,
                operator_convex: *r == 1.0,
                positive_valued: true,
                linear: *r == 1.0,
                ..Flags::default()
            },
            Func::Named(Log) => Flags { operator_monotone: true, ..Flags::default() },
            Func::Named(Log1p | ResolventFrac(_) | InvPerturb) => {
                Flags { operator_monotone: true, positive_valued: true, ..Flags::default() }
            }
            Func::Named(Reciprocal | OnePlusInv) => {
                Flags { operator_convex: true, log_convex: true, positive_valued: true, ..Flags::default() }
            }
            Func::Named(Linear { a, b }) => Flags {
                operator_monotone: *b >= 0.0,
                operator_convex: true,
                log_convex: *b == 0.0 && *a > 0.0,
                positive_valued: *b >= 0.0 && *a >= 0.0 && (*a > 0.0 || *b > 0.0),
                linear: true,
                constant: *b == 0.0,
            },
            Func::Named(Square) => Flags { operator_convex: true, positive_valued: true, ..Flags::default() },
            Func::Monotone(rep) => {
                let linear = rep.atoms.is_empty();
                Flags {
                    operator_monotone: true,
                    operator_convex: linear,
                    log_convex: linear && rep.b == 0.0 && rep.a > 0.0,
                    positive_valued: rep.a >= 0.0 && (rep.a > 0.0 || rep.b > 0.0 || !linear),
                    linear,
                    constant: linear && rep.b == 0.0,
                }
            }
            Func::Convex(rep) => {
                let linear = rep.atoms.is_empty() && rep.c == 0.0;
                Flags {
                    operator_monotone: linear && rep.b >= 0.0,
                    operator_convex: true,
                    log_convex: linear && rep.b == 0.0 && rep.a > 0.0,
                    positive_valued: rep.a >= 0.0 && rep.b >= 0.0 && (rep.a > 0.0 || rep.b > 0.0 || !linear),
                    linear,
                    constant: linear && rep.b == 0.0,
                }
            }
            Func::Shift(f, s) => {
                let inner = f.flags();
                // f increasing with f(s) ≥ 0 makes t ↦ f(t+s) positive for t > 0
                let positive = inner.positive_valued
                    || (inner.operator_monotone && !inner.constant && f.eval(*s).is_ok_and(|v| v >= 0.0));
                Flags { positive_valued: positive && *s >= 0.0, ..inner }
            }
            Func::LogOf(f) => {
                let inner = f.flags();
                Flags {
                    operator_monotone: inner.operator_monotone && inner.positive_valued,
                    linear: inner.constant,
                    constant: inner.constant,
                    ..Flags::default()
                }
            }
        }
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use NamedFunction::*;
        let atoms = |atoms: &[Atom]| -> String {
            atoms.iter().map(|a| format!("({},{})", a.lambda, a.weight)).collect::<Vec<_>>().join(",")
        };
        match self {
            Func::Named(Power(r)) => write!(f, "power:{r}"),
            Func::Named(Log) => f.write_str("log"),
            Func::Named(Log1p) => f.write_str("log1p"),
            Func::Named(ResolventFrac(l)) => write!(f, "resolvent:{l}"),
            Func::Named(InvPerturb) => f.write_str("inv_perturb"),
            Func::Named(Reciprocal) => f.write_str("reciprocal"),
            Func::Named(OnePlusInv) => f.write_str("one_plus_inv"),
            Func::Named(Linear { a, b }) => write!(f, "linear:{a},{b}"),
            Func::Named(Square) => f.write_str("square"),
            Func::Monotone(r) => write!(f, "rep:[{},{};{}]", r.a, r.b, atoms(&r.atoms)),
            Func::Convex(r) => write!(f, "crep:[{},{},{};{}]", r.a, r.b, r.c, atoms(&r.atoms)),
            Func::Shift(inner, s) => write!(f, "shift:{inner}:{s}"),
            Func::LogOf(inner) => write!(f, "logof:{inner}"),
        }
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::Parse(format!("bad number `{s}`")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("non-finite number `{s}`")));
    }
    Ok(v)
}

/// Parses `[c0,c1,...;(λ1,w1),(λ2,w2)]`.
fn parse_rep_body(body: &str) -> Result<(Vec<f64>, Vec<Atom>)> {
    let inner = body
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("representation `{body}` must be bracketed")))?;
    let (coeffs, atoms) = inner.split_once(';').unwrap_or((inner, ""));
    let coeffs = coeffs.split(',').map(parse_f64).collect::<Result<Vec<_>>>()?;
    let mut parsed = Vec::new();
    let mut rest = atoms.trim();
    while !rest.is_empty() {
        let open = rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("expected `(` in `{rest}`")))?;
        let close = open.find(')').ok_or_else(|| Error::Parse(format!("unclosed atom in `{rest}`")))?;
        let (l, w) = open[..close]
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("atom `{}` must be (λ,w)", &open[..close])))?;
        parsed.push(Atom { lambda: parse_f64(l)?, weight: parse_f64(w)? });
        rest = open[close + 1..].trim_start().trim_start_matches(',').trim_start();
    }
    Ok((coeffs, parsed))
}

impl FromStr for Func {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use NamedFunction::*;
        let s = s.trim();
        let (head, arg) = s.split_once(':').unwrap_or((s, ""));
        let no_arg = |f: NamedFunction| {
            if arg.is_empty() {
                Ok(Func::Named(f))
            } else {
                Err(Error::Parse(format!("function `{head}` takes no argument")))
            }
        };
        match head {
            "log" => no_arg(Log),
            "log1p" => no_arg(Log1p),
            "inv_perturb" => no_arg(InvPerturb),
            "reciprocal" => no_arg(Reciprocal),
            "one_plus_inv" => no_arg(OnePlusInv),
            "square" => no_arg(Square),
            "power" => Func::power(parse_f64(arg)?),
            "resolvent" => {
                let l = parse_f64(arg)?;
                if l <= 0.0 {
                    return Err(Error::Parse(format!("resolvent parameter {l} must be positive")));
                }
                Ok(Func::Named(ResolventFrac(l)))
            }
            "linear" => {
                let (a, b) = arg.split_once(',').ok_or_else(|| Error::Parse("linear needs `a,b`".into()))?;
                Ok(Func::linear(parse_f64(a)?, parse_f64(b)?))
            }
            "rep" => {
                let (c, atoms) = parse_rep_body(arg)?;
                match c.as_slice() {
                    [a, b] => Ok(Func::Monotone(MonotoneRep::new(*a, *b, atoms)?)),
                    _ => Err(Error::Parse("rep needs coefficients `a,b`".into())),
                }
            }
            "crep" => {
                let (c, atoms) = parse_rep_body(arg)?;
                match c.as_slice() {
                    [a, b, c] => Ok(Func::Convex(ConvexRep::new(*a, *b, *c, atoms)?)),
                    _ => Err(Error::Parse("crep needs coefficients `a,b,c`".into())),
                }
            }
            "shift" => {
                let (inner, eps) = arg
                    .rsplit_once(':')
                    .ok_or_else(|| Error::Parse("shift needs `shift:<f>:<eps>`".into()))?;
                let eps = parse_f64(eps)?;
                if eps < 0.0 {
                    return Err(Error::Parse(format!("shift {eps} must be nonnegative")));
                }
                Ok(Func::shift(inner.parse()?, eps))
            }
            "logof" => Ok(Func::log_of(arg.parse()?)),
            _ => Err(Error::Parse(format!("unknown function `{s}`"))),
        }
    }
}

pub fn eval_scalar(f: &Func, t: f64) -> Result<f64> {
    f.eval(t)
}

/// `f(A)` through the spectral decomposition of `A`. Representations are
/// also evaluated as a sum of resolvents and the two routes must agree to
/// `1e-10` relative.
pub fn eval_on_matrix(f: &Func, a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    let spectrum = eig_hermitian(a)?;
    let value = apply_fn_spectrum(&spectrum, |t| f.eval_unchecked(t).unwrap_or(f64::NAN), &f.domain(), tol)?;
    if matches!(f, Func::Monotone(_) | Func::Convex(_)) {
        let other = eval_by_resolvents(f, a, tol)?;
        let residual = (value.as_matrix() - other.as_matrix()).norm() / value.frobenius().max(1.0);
        if residual > 1e-10 {
            return Err(Error::Numerical(format!(
                "spectral and resolvent evaluations of {f} disagree (relative residual {residual:.3e})"
            )));
        }
    }
    Ok(value)
}

/// Sum-of-resolvents evaluation of a representation:
/// `aI + bA (+ cA²) + Σ wⱼ(λⱼ+1)·A^p(λⱼI + A)⁻¹`.
pub fn eval_by_resolvents(f: &Func, a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    let slack = tol.psd_tol * a.frobenius().max(1.0);
    let lmin = min_eigenvalue(a)?;
    if lmin < -slack {
        return Err(Error::Domain { eigenvalue: lmin, domain: Interval::nonnegative().to_string() });
    }
    let n = a.dim();
    let (base, atoms, power) = match f {
        Func::Monotone(r) => (HermitianMatrix::identity(n).scale(r.a).add(&a.scale(r.b)), &r.atoms, 1),
        Func::Convex(r) => {
            let sq = a.commuting_product(a);
            (HermitianMatrix::identity(n).scale(r.a).add(&a.scale(r.b)).add(&sq.scale(r.c)), &r.atoms, 2)
        }
        _ => return Err(Error::Precondition(format!("{f} is not given by a representation"))),
    };
    let numerator = if power == 1 { a.clone() } else { a.commuting_product(a) };
    let mut out = base;
    for atom in atoms {
        let resolvent = inverse_pd(&a.shift(atom.lambda))?;
        let term = numerator.commuting_product(&resolvent).scale(atom.weight * (atom.lambda + 1.0));
        out = out.add(&term);
    }
    Ok(out)
}

/// Löwner matrix `[f(xᵢ) − f(xⱼ)] / (xᵢ − xⱼ)` with `f′(xᵢ)` on the diagonal.
pub fn loewner_matrix(f: &Func, points: &[f64]) -> Result<HermitianMatrix> {
    for (i, &x) in points.iter().enumerate() {
        if !f.domain().contains(x) {
            return Err(Error::Domain { eigenvalue: x, domain: f.domain().to_string() });
        }
        if points[..i].contains(&x) {
            return Err(Error::Precondition(format!("coincident Löwner points at {x}")));
        }
    }
    let values = points.iter().map(|&x| f.eval(x)).collect::<Result<Vec<_>>>()?;
    let n = points.len();
    let mut rows = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            rows[i * n + j] = if i == j {
                f.derivative(points[i])?
            } else {
                (values[i] - values[j]) / (points[i] - points[j])
            };
        }
    }
    HermitianMatrix::from_real_rows(n, &rows)
}

/// Central difference with step `10⁻⁶·max(1, |x|)`.
pub fn central_difference(f: &Func, x: f64) -> Result<f64> {
    let h = 1e-6 * x.abs().max(1.0);
    Ok((f.eval(x + h)? - f.eval(x - h)?) / (2.0 * h))
}

/// Outcome of a randomized operator-order test.
#[derive(Clone, Debug)]
pub struct SampleReport {
    pub trials: usize,
    pub violations: usize,
    /// Smallest `λ_min(difference) / scale` seen.
    pub min_gap: f64,
    pub first_violation: Option<SampleWitness>,
}

#[derive(Clone, Debug)]
pub struct SampleWitness {
    pub trial: usize,
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    pub weight: Option<f64>,
    pub gap: f64,
}

fn sampler_for(f: &Func, n: usize) -> SamplerConfig {
    let _ = f;
    SamplerConfig::new(n).with_spectrum(0.05, 10.0)
}

fn draw_in_domain<R: Rng + ?Sized>(f: &Func, cfg: &SamplerConfig, rng: &mut R) -> HermitianMatrix {
    let domain = f.domain();
    if domain.contains(-1.0) {
        random_hermitian(cfg, rng)
    } else {
        // shifted functions may accept a little of the negative axis; stay on (0, ∞)
        random_pd(cfg, rng)
    }
}

fn difference_gap(lower: &HermitianMatrix, upper: &HermitianMatrix) -> Result<f64> {
    let gap = min_eigenvalue(&upper.sub(lower))?;
    let scale = lower.frobenius().max(upper.frobenius()).max(1.0);
    Ok(gap / scale)
}

/// Draws pairs `A ≤ B` (with `B − A` PSD of random rank) and records every
/// trial where `f(B) − f(A)` fails to be PSD.
pub fn sample_monotone(f: &Func, n: usize, trials: usize, seed: u64, tol: &ToleranceConfig) -> Result<SampleReport> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let cfg = sampler_for(f, n);
    let mut report = SampleReport { trials, violations: 0, min_gap: f64::INFINITY, first_violation: None };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let a = draw_in_domain(f, &cfg, &mut rng);
        let rank = 1 + rng.random_range(0..n);
        let p = random_psd_singular(&cfg.clone().with_rank(rank), &mut rng);
        let b = a.add(&p);
        let fa = eval_on_matrix(f, &a, tol)?;
        let fb = eval_on_matrix(f, &b, tol)?;
        let gap = difference_gap(&fa, &fb)?;
        report.min_gap = report.min_gap.min(gap);
        if gap < -tol.psd_tol {
            report.violations += 1;
            report.first_violation.get_or_insert(SampleWitness { trial, a, b, weight: None, gap });
        }
    }
    Ok(report)
}

/// Draws `A`, `B` and `λ ∈ [0, 1]` and records every trial where
/// `λf(A) + (1−λ)f(B) − f(λA + (1−λ)B)` fails to be PSD.
pub fn sample_convex(f: &Func, n: usize, trials: usize, seed: u64, tol: &ToleranceConfig) -> Result<SampleReport> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let cfg = sampler_for(f, n);
    let mut report = SampleReport { trials, violations: 0, min_gap: f64::INFINITY, first_violation: None };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let a = draw_in_domain(f, &cfg, &mut rng);
        let b = draw_in_domain(f, &cfg, &mut rng);
        let w: f64 = rng.random();
        let mix = a.scale(w).add(&b.scale(1.0 - w));
        let lower = eval_on_matrix(f, &mix, tol)?;
        let upper = eval_on_matrix(f, &a, tol)?.scale(w).add(&eval_on_matrix(f, &b, tol)?.scale(1.0 - w));
        let gap = difference_gap(&lower, &upper)?;
        report.min_gap = report.min_gap.min(gap);
        if gap < -tol.psd_tol {
            report.violations += 1;
            report.first_violation.get_or_insert(SampleWitness { trial, a, b, weight: Some(w), gap });
        }
    }
    Ok(report)
}

/// Catalog entries used for certification and default grids.
pub fn catalog() -> Vec<Func> {
    use NamedFunction::*;
    vec![
        Func::Named(Power(0.5)),
        Func::Named(Power(0.25)),
        Func::Named(Power(1.0)),
        Func::Named(Log),
        Func::Named(Log1p),
        Func::Named(ResolventFrac(2.0)),
        Func::Named(InvPerturb),
        Func::Named(Reciprocal),
        Func::Named(OnePlusInv),
        Func::linear(1.0, 2.0),
        Func::Named(Square),
        Func::Monotone(MonotoneRep { a: 0.0, b: 0.0, atoms: vec![Atom { lambda: 1.0, weight: 1.0 }] }),
        Func::Convex(ConvexRep { a: 0.0, b: 0.0, c: 0.0, atoms: vec![Atom { lambda: 1.0, weight: 1.0 }] }),
    ]
}
