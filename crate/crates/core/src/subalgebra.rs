//! Block-diagonal subalgebras `M_{n₁} ⊕ … ⊕ M_{n_k}` of `M_n(ℂ)`, their
//! trace-preserving conditional expectations (pinchings), and general
//! trace-preserving unital positive maps.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    block_2x2, inverse_pd, is_psd, min_eigenvalue, ComplexMatrix, HermitianMatrix,
    ToleranceConfig, C64,
};
use crate::sampling::{random_complex, random_member_with, random_pd, trial_rng, SamplerConfig};

/// Ordered block sizes `(n₁, …, n_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockPartition {
    sizes: Vec<usize>,
}

impl BlockPartition {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Parse(format!("block sizes must be positive, got {sizes:?}")));
        }
        Ok(Self { sizes })
    }

    /// `(1, …, 1)`: the diagonal masa.
    pub fn diagonal(n: usize) -> Self {
        Self { sizes: vec![1; n] }
    }

    /// `(n)`: the whole algebra.
    pub fn full(n: usize) -> Self {
        Self { sizes: vec![n] }
    }

    /// `(⌊n/2⌋, ⌈n/2⌉)`, or `(1)` when `n = 1`.
    pub fn halves(n: usize) -> Self {
        if n < 2 {
            return Self::full(n);
        }
        Self { sizes: vec![n / 2, n - n / 2] }
    }

    /// Parses `2,2,3`, `diag`, `full` or `halves`; the keywords need `n`.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let text = text.trim();
        let need_n = || n.ok_or_else(|| Error::Parse(format!("partition `{text}` needs a dimension")));
        let p = match text {
            "diag" => Self::diagonal(need_n()?),
            "full" => Self::full(need_n()?),
            "halves" => Self::halves(need_n()?),
            _ => {
                let sizes = text
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad block size `{s}`"))))
                    .collect::<Result<Vec<_>>>()?;
                Self::new(sizes)?
            }
        };
        if let Some(n) = n {
            if p.total() != n {
                return Err(Error::Shape(format!("partition {p} sums to {}, expected {n}", p.total())));
            }
        }
        Ok(p)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_full(&self) -> bool {
        self.sizes.len() == 1
    }

    pub fn is_diagonal(&self) -> bool {
        self.sizes.iter().all(|&s| s == 1)
    }

    /// Index ranges of the diagonal blocks.
    pub fn ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.sizes
            .iter()
            .map(|&s| {
                let r = start..start + s;
                start += s;
                r
            })
            .collect()
    }

    /// Block index of each coordinate.
    pub fn labels(&self) -> Vec<usize> {
        self.sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect()
    }

    /// The diagonal blocks of `a` as separate matrices.
    pub fn blocks(&self, a: &HermitianMatrix) -> Result<Vec<HermitianMatrix>> {
        self.check_dim(a.dim())?;
        Ok(self
            .ranges()
            .into_iter()
            .map(|r| HermitianMatrix::hermitize(a.as_matrix().view((r.start, r.start), (r.len(), r.len())).into_owned()))
            .collect())
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.total() != n {
            return Err(Error::Shape(format!("partition {self} does not fit a {n}x{n} matrix")));
        }
        Ok(())
    }
}

impl fmt::Display for BlockPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for BlockPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, None)
    }
}

/// Zeroes every entry outside the diagonal blocks.
pub fn pinch(a: &ComplexMatrix, p: &BlockPartition) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Shape(format!("pinching needs a square matrix, got {}x{}", a.nrows(), a.ncols())));
    }
    p.check_dim(a.nrows())?;
    let labels = p.labels();
    let zero = C64::new(0.0, 0.0);
    Ok(ComplexMatrix::from_fn(a.nrows(), a.ncols(), |i, j| if labels[i] == labels[j] { a[(i, j)] } else { zero }))
}

pub fn pinch_hermitian(a: &HermitianMatrix, p: &BlockPartition) -> Result<HermitianMatrix> {
    // zeroing entries symmetrically keeps exact Hermitian symmetry
    Ok(HermitianMatrix::hermitize(pinch(a.as_matrix(), p)?))
}

/// `‖A − Φ(A)‖_F`
pub fn distance_to_subalgebra(a: &ComplexMatrix, p: &BlockPartition) -> Result<f64> {
    Ok((a - pinch(a, p)?).norm())
}

/// `‖A − Φ(A)‖_F / ‖A‖_F` (zero for the zero matrix).
pub fn relative_distance_to_subalgebra(a: &ComplexMatrix, p: &BlockPartition) -> Result<f64> {
    let d = distance_to_subalgebra(a, p)?;
    let norm = a.norm();
    Ok(if norm == 0.0 { 0.0 } else { d / norm })
}

/// Membership residual `‖A − Φ(A)‖_F / max(1, ‖A‖_F)`.
pub fn membership_residual(a: &ComplexMatrix, p: &BlockPartition) -> Result<f64> {
    Ok(distance_to_subalgebra(a, p)? / a.norm().max(1.0))
}

pub fn is_member(a: &ComplexMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<bool> {
    Ok(membership_residual(a, p)? <= tol.membership_tol)
}

/// Convex combination of unitary conjugations `A ↦ Σ pᵢ UᵢAUᵢ*`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMixture {
    terms: Vec<(ComplexMatrix, f64)>,
}

impl UnitaryMixture {
    /// Validates unitarity (`‖U*U − I‖_F ≤ 1e-10`) and weights (nonnegative,
    /// summing to one within `1e-12`), then renormalizes the weights.
    pub fn new(terms: Vec<(ComplexMatrix, f64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::MapSpec("unitary mixture needs at least one term".into()));
        }
        let n = terms[0].0.nrows();
        for (i, (u, w)) in terms.iter().enumerate() {
            if u.nrows() != n || u.ncols() != n {
                return Err(Error::MapSpec(format!("term {i} is {}x{}, expected {n}x{n}", u.nrows(), u.ncols())));
            }
            let residual = (u.adjoint() * u - ComplexMatrix::identity(n, n)).norm();
            if residual > 1e-10 {
                return Err(Error::MapSpec(format!("term {i} is not unitary (residual {residual:.3e})")));
            }
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::MapSpec(format!("term {i} has invalid weight {w}")));
            }
        }
        let total: f64 = terms.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::MapSpec(format!("weights sum to {total}, expected 1")));
        }
        let terms = terms.into_iter().map(|(u, w)| (u, w / total)).collect();
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(ComplexMatrix, f64)] {
        &self.terms
    }

    pub fn dim(&self) -> usize {
        self.terms[0].0.nrows()
    }
}

/// A trace-preserving unital positive map on `M_n(ℂ)`.
#[derive(Clone, Debug, PartialEq)]
pub enum PositiveMapSpec {
    Pinching(BlockPartition),
    UnitaryMixing(UnitaryMixture),
    /// `A ↦ tr(A)·I`
    TraceMap,
}

impl PositiveMapSpec {
    pub fn identity(n: usize) -> Self {
        PositiveMapSpec::UnitaryMixing(UnitaryMixture { terms: vec![(ComplexMatrix::identity(n, n), 1.0)] })
    }

    pub fn as_partition(&self) -> Option<&BlockPartition> {
        match self {
            PositiveMapSpec::Pinching(p) => Some(p),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            PositiveMapSpec::Pinching(p) => format!("pinch:{p}"),
            PositiveMapSpec::UnitaryMixing(m) => format!("mix:{}", m.terms.len()),
            PositiveMapSpec::TraceMap => "trace".into(),
        }
    }
}

pub fn apply_map(a: &ComplexMatrix, map: &PositiveMapSpec) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Shape(format!("positive maps act on square matrices, got {}x{}", a.nrows(), a.ncols())));
    }
    let n = a.nrows();
    match map {
        PositiveMapSpec::Pinching(p) => pinch(a, p),
        PositiveMapSpec::UnitaryMixing(mix) => {
            if mix.dim() != n {
                return Err(Error::Shape(format!("mixture acts on {}x{}, input is {n}x{n}", mix.dim(), mix.dim())));
            }
            let mut out = ComplexMatrix::zeros(n, n);
            for (u, w) in &mix.terms {
                out += (u * a * u.adjoint()) * C64::new(*w, 0.0);
            }
            Ok(out)
        }
        PositiveMapSpec::TraceMap => {
            let t = crate::linalg::normalized_trace(a)?;
            Ok(ComplexMatrix::identity(n, n) * t)
        }
    }
}

pub fn apply_map_hermitian(a: &HermitianMatrix, map: &PositiveMapSpec) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::hermitize(apply_map(a.as_matrix(), map)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Linearity,
    Unitality,
    Positivity,
    Bimodule,
    TracePreservation,
    Idempotence,
}

#[derive(Clone, Debug)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub trial: usize,
    pub residual: f64,
    pub witness: Vec<ComplexMatrix>,
}

/// Maximum residual per axiom over all trials, plus any violations.
#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub trials: usize,
    pub linearity: f64,
    pub unitality: f64,
    /// Smallest relative eigenvalue of `Φ(X)` over PSD inputs `X`.
    pub min_positivity: f64,
    pub bimodule: f64,
    pub trace: f64,
    pub idempotence: f64,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const AXIOM_TOL: f64 = 1e-10;

fn rel_residual(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    (x - y).norm() / x.norm().max(y.norm()).max(1.0)
}

/// Randomized check of the conditional-expectation axioms for the pinching
/// onto `p`: linearity, `Φ(I) = I`, positivity, `Φ(S₁RS₂) = S₁Φ(R)S₂`,
/// trace preservation and idempotence.
pub fn check_expectation_axioms(p: &BlockPartition, trials: usize, seed: u64) -> Result<AxiomReport> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let n = p.total();
    let tol = ToleranceConfig::default();
    let mut report = AxiomReport { trials, min_positivity: f64::INFINITY, ..Default::default() };
    let id = ComplexMatrix::identity(n, n);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let r1 = random_complex(n, &mut rng);
        let r2 = random_complex(n, &mut rng);
        let alpha = C64::new(rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0);
        // S₁, S₂ arbitrary (non-Hermitian) elements of the subalgebra
        let s1 = pinch(&random_complex(n, &mut rng), p)?;
        let s2 = pinch(&random_complex(n, &mut rng), p)?;
        let psd = random_pd(&SamplerConfig::new(n).with_spectrum(1e-3, 10.0), &mut rng);

        let record = |axiom: Axiom, residual: f64, witness: Vec<ComplexMatrix>, report: &mut AxiomReport| {
            let slot = match axiom {
                Axiom::Linearity => &mut report.linearity,
                Axiom::Unitality => &mut report.unitality,
                Axiom::Bimodule => &mut report.bimodule,
                Axiom::TracePreservation => &mut report.trace,
                Axiom::Idempotence => &mut report.idempotence,
                Axiom::Positivity => unreachable!(),
            };
            *slot = slot.max(residual);
            if residual > AXIOM_TOL {
                report.violations.push(AxiomViolation { axiom, trial, residual, witness });
            }
        };

        let lhs = pinch(&(&r1 + &r2 * alpha), p)?;
        let rhs = pinch(&r1, p)? + pinch(&r2, p)? * alpha;
        record(Axiom::Linearity, rel_residual(&lhs, &rhs), vec![r1.clone(), r2.clone()], &mut report);

        record(Axiom::Unitality, rel_residual(&pinch(&id, p)?, &id), vec![], &mut report);

        let lhs = pinch(&(&s1 * &r1 * &s2), p)?;
        let rhs = &s1 * pinch(&r1, p)? * &s2;
        record(Axiom::Bimodule, rel_residual(&lhs, &rhs), vec![s1.clone(), r1.clone(), s2.clone()], &mut report);

        let t0 = r1.trace();
        let t1 = pinch(&r1, p)?.trace();
        record(Axiom::TracePreservation, (t0 - t1).norm() / t0.norm().max(1.0), vec![r1.clone()], &mut report);

        let once = pinch(&r1, p)?;
        record(Axiom::Idempotence, rel_residual(&pinch(&once, p)?, &once), vec![r1.clone()], &mut report);

        let image = pinch_hermitian(&psd, p)?;
        let lmin = min_eigenvalue(&image)? / psd.frobenius().max(1.0);
        report.min_positivity = report.min_positivity.min(lmin);
        if !is_psd(&image, &tol)? {
            report.violations.push(AxiomViolation {
                axiom: Axiom::Positivity,
                trial,
                residual: -lmin,
                witness: vec![psd.as_matrix().clone()],
            });
        }
    }
    Ok(report)
}

/// `Φ ⊗ I₂` applied to a `2n × 2n` matrix viewed as a 2×2 array of `n × n`
/// blocks.
pub fn pinch_two_by_two(x: &HermitianMatrix, p: &BlockPartition) -> Result<HermitianMatrix> {
    let n = p.total();
    if x.dim() != 2 * n {
        return Err(Error::Shape(format!("expected a {0}x{0} matrix, got {1}x{1}", 2 * n, x.dim())));
    }
    let m = x.as_matrix();
    let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
    for bi in 0..2 {
        for bj in 0..2 {
            let block = m.view((bi * n, bj * n), (n, n)).into_owned();
            out.view_mut((bi * n, bj * n), (n, n)).copy_from(&pinch(&block, p)?);
        }
    }
    Ok(HermitianMatrix::hermitize(out))
}

#[derive(Clone, Debug)]
pub struct TwoPositivityReport {
    pub trials: usize,
    /// Smallest eigenvalue of `(Φ ⊗ I₂)(X)` relative to `max(1, ‖X‖₂)`.
    pub min_eigenvalue: f64,
    pub violations: Vec<(usize, HermitianMatrix)>,
}

/// Samples PSD `X ∈ M₂(M_n)` (full rank and rank-deficient) and checks that
/// the blockwise pinching stays PSD.
pub fn check_two_positivity(p: &BlockPartition, trials: usize, seed: u64) -> Result<TwoPositivityReport> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let n = p.total();
    let tol = ToleranceConfig::default();
    let mut report = TwoPositivityReport { trials, min_eigenvalue: f64::INFINITY, violations: vec![] };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        // X = G G* with G of random width, so X is PSD and often singular
        let width = 1 + (rng.random::<u64>() as usize) % (2 * n);
        let g = ComplexMatrix::from_fn(2 * n, width, |_, _| random_complex(1, &mut rng)[(0, 0)]);
        let x = HermitianMatrix::hermitize(&g * g.adjoint());
        let y = pinch_two_by_two(&x, p)?;
        let spectrum = crate::linalg::eig_hermitian(&y)?;
        let scale = spectrum.spectral_norm().max(1.0);
        report.min_eigenvalue = report.min_eigenvalue.min(spectrum.min() / scale);
        if spectrum.min() < -tol.psd_tol * scale {
            report.violations.push((trial, x));
        }
    }
    Ok(report)
}

/// The fixed point `[[A, I], [I, A⁻¹]]` for `A` positive definite.
pub fn inverse_pair_matrix(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let n = a.dim();
    let inv = inverse_pd(a)?;
    block_2x2(a.as_matrix(), &ComplexMatrix::identity(n, n), inv.as_matrix())
}

/// Random member of the subalgebra drawn through its blocks.
pub fn random_block_member<R: Rng + ?Sized>(p: &BlockPartition, lo: f64, hi: f64, rng: &mut R) -> HermitianMatrix {
    random_member_with(p, rng, |k, rng| random_pd(&SamplerConfig::new(k).with_spectrum(lo, hi), rng))
}
