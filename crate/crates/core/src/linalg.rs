//! Dense complex linear algebra: Hermitian eigendecomposition, functional
//! calculus, positivity tests, normalized trace and Schur complements.
//!
//! Every positivity decision is relative: a threshold is scaled by
//! `max(1, ‖A‖₂)` so that results do not depend on the overall magnitude of
//! the operator under test.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Square or rectangular complex matrix, stored by nalgebra (column-major).
pub type ComplexMatrix = DMatrix<C64>;

/// Matrices whose condition number exceeds this are rejected as
/// ill-conditioned trials instead of being inverted.
pub const MAX_CONDITION: f64 = 1e12;

/// Relative Frobenius tolerance on `U diag(λ) U* − A` after an eigensolve.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

/// Relative numerical tolerances used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    pub hermiticity_tol: f64,
    pub psd_tol: f64,
    pub singular_tol: f64,
    pub equality_tol: f64,
    pub membership_tol: f64,
    pub violation_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            hermiticity_tol: 1e-9,
            psd_tol: 1e-10,
            singular_tol: 1e-12,
            equality_tol: 1e-9,
            membership_tol: 1e-8,
            violation_tol: 1e-9,
        }
    }
}

impl ToleranceConfig {
    /// Checks that every tolerance lies in `[0, 1e-3]`.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("hermiticity_tol", self.hermiticity_tol),
            ("psd_tol", self.psd_tol),
            ("singular_tol", self.singular_tol),
            ("equality_tol", self.equality_tol),
            ("membership_tol", self.membership_tol),
            ("violation_tol", self.violation_tol),
        ];
        for (name, value) in fields {
            if !(0.0..=1e-3).contains(&value) {
                return Err(Error::Precondition(format!(
                    "{name} = {value} is outside [0, 1e-3]"
                )));
            }
        }
        Ok(())
    }
}

/// A real interval used as the domain of a scalar function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_open: false, hi_open: false }
    }

    /// `[0, ∞)`
    pub fn nonnegative() -> Self {
        Self { lo: 0.0, hi: f64::INFINITY, lo_open: false, hi_open: true }
    }

    /// `(0, ∞)`
    pub fn positive() -> Self {
        Self { lo: 0.0, hi: f64::INFINITY, lo_open: true, hi_open: true }
    }

    pub fn real_line() -> Self {
        Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY, lo_open: true, hi_open: true }
    }

    pub fn shifted(&self, by: f64) -> Self {
        Self { lo: self.lo + by, hi: self.hi + by, ..*self }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }

    /// Moves `x` into the interval when it lies within `slack` of a closed
    /// endpoint. Points near an open endpoint are not rescued.
    pub fn admit(&self, x: f64, slack: f64) -> Option<f64> {
        if self.contains(x) {
            return Some(x);
        }
        if !self.lo_open && x < self.lo && self.lo - x <= slack {
            return Some(self.lo);
        }
        if !self.hi_open && x > self.hi && x - self.hi <= slack {
            return Some(self.hi);
        }
        None
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_open { '(' } else { '[' };
        let close = if self.hi_open { ')' } else { ']' };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

/// A complex matrix known to be Hermitian.
///
/// Construction checks `‖A − A*‖_F ≤ hermiticity_tol · max(1, ‖A‖_F)` and
/// then stores the exact Hermitian part `(A + A*)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, ToleranceConfig::default().hermiticity_tol)
    }

    pub fn with_tolerance(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        check_finite(&m)?;
        let residual = hermiticity_residual(&m);
        if residual > tol {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Self::hermitize(m))
    }

    /// Takes the Hermitian part without checking. Use only for matrices that
    /// are Hermitian by construction up to rounding.
    pub(crate) fn hermitize(m: ComplexMatrix) -> Self {
        let adj = m.adjoint();
        Self((m + adj) * C64::new(0.5, 0.0))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        Self(m)
    }

    /// Real symmetric matrix from row-major entries.
    pub fn from_real_rows(n: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::Shape(format!("expected {} entries, got {}", n * n, rows.len())));
        }
        let m = ComplexMatrix::from_fn(n, n, |i, j| C64::new(rows[i * n + j], 0.0));
        Self::new(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * C64::new(s, 0.0))
    }

    /// `self + s·I`
    pub fn shift(&self, s: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += C64::new(s, 0.0);
        }
        Self(m)
    }

    /// `X A X*`, Hermitian for any square `X` of matching size.
    pub fn congruence(&self, x: &ComplexMatrix) -> Self {
        Self::hermitize(x * &self.0 * x.adjoint())
    }

    /// Product of two Hermitian matrices that are known to commute.
    pub(crate) fn commuting_product(&self, other: &Self) -> Self {
        Self::hermitize(&self.0 * &other.0)
    }

    pub fn frobenius(&self) -> f64 {
        self.0.norm()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }
}

pub(crate) fn check_finite(m: &ComplexMatrix) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// `‖A − A*‖_F / max(1, ‖A‖_F)`
pub fn hermiticity_residual(m: &ComplexMatrix) -> f64 {
    (m - m.adjoint()).norm() / m.norm().max(1.0)
}

/// Eigenvalues (ascending) and unitary eigenvectors of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `max |λ|`, the spectral norm of the decomposed matrix.
    pub fn spectral_norm(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// `max |λ| / min |λ|`; infinite for singular matrices.
    pub fn condition_number(&self) -> f64 {
        let smallest = self.eigenvalues.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min);
        if smallest == 0.0 {
            f64::INFINITY
        } else {
            self.spectral_norm() / smallest
        }
    }

    /// `U diag(g(λ)) U*`
    pub fn rebuild(&self, values: &[f64]) -> HermitianMatrix {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &v) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(v);
        }
        HermitianMatrix::hermitize(scaled * u.adjoint())
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
pub fn eig_hermitian(a: &HermitianMatrix) -> Result<Spectrum> {
    let n = a.dim();
    if n == 0 {
        return Ok(Spectrum { eigenvalues: vec![], eigenvectors: ComplexMatrix::zeros(0, 0) });
    }
    let eig = SymmetricEigen::try_new(a.as_matrix().clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    if eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    let spectrum = Spectrum { eigenvalues, eigenvectors };
    let rebuilt = spectrum.rebuild(&spectrum.eigenvalues);
    let residual = (rebuilt.as_matrix() - a.as_matrix()).norm();
    if residual > RECONSTRUCTION_TOL * a.frobenius().max(f64::MIN_POSITIVE) && residual > 1e-300 {
        return Err(Error::Numerical(format!(
            "eigendecomposition reconstruction residual {residual:.3e}"
        )));
    }
    Ok(spectrum)
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian(a)?.eigenvalues)
}

/// Applies `f` to the spectrum of `a`.
///
/// Eigenvalues within `psd_tol · max(1, ‖A‖₂)` of a closed endpoint of the
/// domain are clamped onto it; anything else outside the domain is an error.
pub fn apply_fn<F>(a: &HermitianMatrix, f: F, domain: &Interval, tol: &ToleranceConfig) -> Result<HermitianMatrix>
where
    F: Fn(f64) -> f64,
{
    let spectrum = eig_hermitian(a)?;
    apply_fn_spectrum(&spectrum, f, domain, tol)
}

pub fn apply_fn_spectrum<F>(spectrum: &Spectrum, f: F, domain: &Interval, tol: &ToleranceConfig) -> Result<HermitianMatrix>
where
    F: Fn(f64) -> f64,
{
    let slack = tol.psd_tol * spectrum.spectral_norm().max(1.0);
    let mut values = Vec::with_capacity(spectrum.eigenvalues.len());
    for &l in &spectrum.eigenvalues {
        let x = domain.admit(l, slack).ok_or_else(|| Error::Domain {
            eigenvalue: l,
            domain: domain.to_string(),
        })?;
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::Domain { eigenvalue: l, domain: domain.to_string() });
        }
        values.push(y);
    }
    Ok(spectrum.rebuild(&values))
}

fn psd_threshold(spectrum: &Spectrum, tol: &ToleranceConfig) -> f64 {
    tol.psd_tol * spectrum.spectral_norm().max(1.0)
}

pub fn is_psd(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<bool> {
    let s = eig_hermitian(a)?;
    Ok(s.min() >= -psd_threshold(&s, tol))
}

pub fn is_pd(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<bool> {
    let s = eig_hermitian(a)?;
    Ok(s.min() >= psd_threshold(&s, tol) && s.min() > 0.0)
}

pub fn min_eigenvalue(a: &HermitianMatrix) -> Result<f64> {
    Ok(eig_hermitian(a)?.min())
}

/// Average of the diagonal entries.
pub fn normalized_trace(a: &ComplexMatrix) -> Result<C64> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(Error::Shape(format!(
            "normalized trace needs a non-empty square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(a.trace() / a.nrows() as f64)
}

/// Inverse of a positive definite matrix through its Cholesky factor.
pub fn inverse_pd(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let chol = a
        .as_matrix()
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Regularity("matrix is not positive definite".into()))?;
    Ok(HermitianMatrix::hermitize(chol.inverse()))
}

/// Inverse of a positive definite matrix, refusing ill-conditioned input.
pub fn checked_inverse_pd(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    let s = eig_hermitian(a)?;
    if s.min() <= psd_threshold(&s, tol) {
        return Err(Error::Regularity(format!("smallest eigenvalue {:.3e}", s.min())));
    }
    let cond = s.condition_number();
    if cond > MAX_CONDITION {
        return Err(Error::IllConditioned(cond));
    }
    inverse_pd(a)
}

/// Principal square root of a PSD matrix; tiny negative eigenvalues are
/// clamped to zero.
pub fn sqrt_psd(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    apply_fn(a, f64::sqrt, &Interval::nonnegative(), tol)
}

/// Schur complement `C − B* A⁻¹ B` of `P = [[A, B], [B*, C]]`, where `A` is the
/// leading `split × split` block.
pub fn schur_complement(p: &HermitianMatrix, split: usize, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    let n = p.dim();
    if split == 0 || split >= n {
        return Err(Error::Shape(format!("split {split} must lie strictly inside 0..{n}")));
    }
    let m = p.as_matrix();
    let a = HermitianMatrix::hermitize(m.view((0, 0), (split, split)).into_owned());
    let b = m.view((0, split), (split, n - split)).into_owned();
    let c = m.view((split, split), (n - split, n - split)).into_owned();
    if !is_pd(&a, tol)? {
        return Err(Error::Regularity("leading block of the Schur complement is not positive definite".into()));
    }
    let chol = a
        .into_inner()
        .cholesky()
        .ok_or_else(|| Error::Regularity("Cholesky factorisation of the leading block failed".into()))?;
    let a_inv_b = chol.solve(&b);
    Ok(HermitianMatrix::hermitize(c - b.adjoint() * a_inv_b))
}

/// Builds `[[A, B], [B*, C]]` from its blocks.
pub fn block_2x2(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix) -> Result<HermitianMatrix> {
    let (p, q) = (a.nrows(), c.nrows());
    if a.ncols() != p || c.ncols() != q || b.nrows() != p || b.ncols() != q {
        return Err(Error::Shape("inconsistent block sizes".into()));
    }
    let mut m = ComplexMatrix::zeros(p + q, p + q);
    m.view_mut((0, 0), (p, p)).copy_from(a);
    m.view_mut((0, p), (p, q)).copy_from(b);
    m.view_mut((p, 0), (q, p)).copy_from(&b.adjoint());
    m.view_mut((p, p), (q, q)).copy_from(c);
    HermitianMatrix::new(m)
}

/// Block-diagonal matrix `diag(A₁, …, A_k)`.
pub fn block_diagonal(blocks: &[HermitianMatrix]) -> HermitianMatrix {
    let n: usize = blocks.iter().map(HermitianMatrix::dim).sum();
    let mut m = ComplexMatrix::zeros(n, n);
    let mut offset = 0;
    for b in blocks {
        let k = b.dim();
        m.view_mut((offset, offset), (k, k)).copy_from(b.as_matrix());
        offset += k;
    }
    HermitianMatrix(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn real(n: usize, rows: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_rows(n, rows).unwrap()
    }

    fn close(a: &HermitianMatrix, b: &HermitianMatrix, eps: f64) -> bool {
        (a.as_matrix() - b.as_matrix()).norm() <= eps
    }

    #[test]
    fn eig_of_diagonal_is_sorted() {
        let s = eig_hermitian(&HermitianMatrix::from_real_diagonal(&[3.0, 1.0])).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 3.0]);
        // permutation of identity columns
        for j in 0..2 {
            let col = s.eigenvectors.column(j);
            let big = col.iter().filter(|z| (z.norm() - 1.0).abs() < 1e-12).count();
            assert_eq!(big, 1);
        }
    }

    #[test]
    fn eig_of_identity() {
        let s = eig_hermitian(&HermitianMatrix::identity(5)).unwrap();
        assert!(s.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-15));
    }

    #[test]
    fn eig_of_two_by_two() {
        // λ² − 4λ + 3 = 0
        let s = eig_hermitian(&real(2, &[2.0, 1.0, 1.0, 2.0])).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[
            C64::new(1.0, 0.0), C64::new(2.0, 0.0),
            C64::new(0.0, 0.0), C64::new(1.0, 0.0),
        ]);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn functional_calculus_examples() {
        let t = tol();
        let r = apply_fn(&HermitianMatrix::from_real_diagonal(&[1.0, 4.0]), f64::sqrt, &Interval::nonnegative(), &t).unwrap();
        assert!(close(&r, &HermitianMatrix::from_real_diagonal(&[1.0, 2.0]), 1e-14));

        let r = apply_fn(&HermitianMatrix::identity(3), f64::ln, &Interval::positive(), &t).unwrap();
        assert!(r.frobenius() < 1e-15);

        let r = apply_fn(&real(2, &[2.0, 1.0, 1.0, 2.0]), |x| x * x, &Interval::real_line(), &t).unwrap();
        assert!(close(&r, &real(2, &[5.0, 4.0, 4.0, 5.0]), 1e-13));
    }

    #[test]
    fn domain_violation_carries_eigenvalue() {
        let err = apply_fn(&HermitianMatrix::from_real_diagonal(&[-1.0, 2.0]), f64::sqrt, &Interval::nonnegative(), &tol()).unwrap_err();
        assert_eq!(err, Error::Domain { eigenvalue: -1.0, domain: "[0, inf)".into() });
    }

    #[test]
    fn positivity_examples() {
        let t = tol();
        let id = HermitianMatrix::identity(3);
        assert!(is_psd(&id, &t).unwrap() && is_pd(&id, &t).unwrap());
        let d = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(is_psd(&d, &t).unwrap() && !is_pd(&d, &t).unwrap());
        let m = real(2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(!is_psd(&m, &t).unwrap() && !is_pd(&m, &t).unwrap());
    }

    #[test]
    fn normalized_trace_examples() {
        assert_eq!(normalized_trace(&ComplexMatrix::identity(4, 4)).unwrap(), C64::new(1.0, 0.0));
        let d = HermitianMatrix::from_real_diagonal(&[1.0, 4.0]);
        assert_eq!(normalized_trace(d.as_matrix()).unwrap().re, 2.5);
        assert!(matches!(normalized_trace(&ComplexMatrix::zeros(2, 3)), Err(Error::Shape(_))));
    }

    #[test]
    fn schur_complement_examples() {
        let t = tol();
        let s = schur_complement(&real(2, &[2.0, 1.0, 1.0, 1.0]), 1, &t).unwrap();
        assert!((s.as_matrix()[(0, 0)].re - 0.5).abs() < 1e-15);

        let a = real(2, &[2.0, 0.5, 0.5, 1.0]);
        let c = real(2, &[3.0, -1.0, -1.0, 2.0]);
        let p = block_diagonal(&[a.clone(), c.clone()]);
        assert!(close(&schur_complement(&p, 2, &t).unwrap(), &c, 1e-14));

        let a_inv = inverse_pd(&a).unwrap();
        let p = block_2x2(a.as_matrix(), &ComplexMatrix::identity(2, 2), a_inv.as_matrix()).unwrap();
        assert!(schur_complement(&p, 2, &t).unwrap().frobenius() < 1e-14);
    }

    #[test]
    fn singular_leading_block_is_rejected() {
        let p = HermitianMatrix::from_real_diagonal(&[0.0, 1.0]);
        assert!(matches!(schur_complement(&p, 1, &tol()), Err(Error::Regularity(_))));
    }

    #[test]
    fn interval_admits_near_closed_endpoint_only() {
        assert_eq!(Interval::nonnegative().admit(-1e-14, 1e-10), Some(0.0));
        assert_eq!(Interval::positive().admit(-1e-14, 1e-10), None);
        assert_eq!(Interval::closed(1.0, 2.0).admit(2.0 + 1e-12, 1e-10), Some(2.0));
    }

    #[test]
    fn tolerance_validation() {
        assert!(tol().validate().is_ok());
        let bad = ToleranceConfig { psd_tol: 0.1, ..tol() };
        assert!(bad.validate().is_err());
    }
}
