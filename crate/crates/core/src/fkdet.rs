//! Fuglede–Kadison determinant on `M_n(ℂ)` with the normalized trace.
//!
//! `Δ(A) = exp(tr log |A|)`, which on matrices is the geometric mean of the
//! singular values, `|det A|^{1/n}`. Singular operators get the analytic
//! extension `Δ(A) = 0`.

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, is_pd, ComplexMatrix, HermitianMatrix, ToleranceConfig};

/// A determinant value kept alongside its logarithm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FkValue {
    pub value: f64,
    /// `−∞` exactly when `value == 0`.
    pub log_value: f64,
}

impl FkValue {
    pub const ZERO: FkValue = FkValue { value: 0.0, log_value: f64::NEG_INFINITY };

    pub fn from_log(log_value: f64) -> Self {
        if log_value == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { value: log_value.exp(), log_value }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_value == f64::NEG_INFINITY
    }
}

/// Geometric mean of `values`, or zero when the smallest is negligible
/// against the largest.
fn from_singular_values(values: &[f64], singular_tol: f64) -> FkValue {
    let n = values.len();
    if n == 0 {
        return FkValue { value: 1.0, log_value: 0.0 };
    }
    let largest = values.iter().copied().fold(0.0, f64::max);
    let smallest = values.iter().copied().fold(f64::INFINITY, f64::min);
    if largest == 0.0 || smallest <= singular_tol * largest {
        return FkValue::ZERO;
    }
    let log_mean = values.iter().map(|s| s.ln()).sum::<f64>() / n as f64;
    FkValue::from_log(log_mean)
}

/// `Δ(A)` for an arbitrary square matrix, from its singular values.
pub fn fk_det(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<FkValue> {
    if !a.is_square() {
        return Err(Error::Shape(format!("Δ needs a square matrix, got {}x{}", a.nrows(), a.ncols())));
    }
    crate::linalg::check_finite(a)?;
    if a.nrows() == 0 {
        return Ok(from_singular_values(&[], tol.singular_tol));
    }
    let svd = a.clone().try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    Ok(from_singular_values(svd.singular_values.as_slice(), tol.singular_tol))
}

/// `Δ(A)` for a Hermitian matrix; its singular values are `|λᵢ|`.
pub fn fk_det_hermitian(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<FkValue> {
    let spectrum = eig_hermitian(a)?;
    let abs: Vec<f64> = spectrum.eigenvalues.iter().map(|l| l.abs()).collect();
    Ok(from_singular_values(&abs, tol.singular_tol))
}

/// `log Δ(A)`, `−∞` for singular `A`.
pub fn log_fk_det(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<f64> {
    Ok(fk_det_hermitian(a, tol)?.log_value)
}

/// `Δ(A + B) / Δ(A)` for positive definite `A` and PSD `B`, evaluated as a
/// difference of logarithms.
pub fn fk_det_ratio(a: &HermitianMatrix, b: &HermitianMatrix, tol: &ToleranceConfig) -> Result<f64> {
    Ok(log_fk_det_ratio(a, b, tol)?.exp())
}

pub fn log_fk_det_ratio(a: &HermitianMatrix, b: &HermitianMatrix, tol: &ToleranceConfig) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!("dimension mismatch {} vs {}", a.dim(), b.dim())));
    }
    if !is_pd(a, tol)? {
        return Err(Error::Regularity("Δ(A+B)/Δ(A) needs positive definite A".into()));
    }
    let log_a = log_fk_det(a, tol)?;
    let log_ab = log_fk_det(&a.add(b), tol)?;
    Ok(log_ab - log_a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{block_diagonal, inverse_pd};
    use crate::sampling::{random_complex, random_pd, trial_rng, SamplerConfig};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn real(n: usize, rows: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_rows(n, rows).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn examples() {
        let t = tol();
        assert!((fk_det(&ComplexMatrix::identity(4, 4), &t).unwrap().value - 1.0).abs() < 1e-15);
        let d = HermitianMatrix::from_real_diagonal(&[1.0, 4.0]);
        assert!((fk_det(d.as_matrix(), &t).unwrap().value - 2.0).abs() < 1e-14);
        // |det| = 3 by cofactors
        let m = real(2, &[2.0, 1.0, 1.0, 2.0]);
        assert!((fk_det(m.as_matrix(), &t).unwrap().value - 3f64.sqrt()).abs() < 1e-14);
        let s = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert_eq!(fk_det(s.as_matrix(), &t).unwrap(), FkValue::ZERO);
        assert_eq!(fk_det_hermitian(&s, &t).unwrap(), FkValue::ZERO);
        assert_eq!(fk_det(&ComplexMatrix::zeros(3, 3), &t).unwrap(), FkValue::ZERO);
    }

    #[test]
    fn ratio_examples() {
        let t = tol();
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]);
        assert!((fk_det_ratio(&a, &HermitianMatrix::zeros(2), &t).unwrap() - 1.0).abs() < 1e-15);
        let id = HermitianMatrix::identity(3);
        assert!((fk_det_ratio(&id, &id, &t).unwrap() - 2.0).abs() < 1e-14);
        let b = HermitianMatrix::from_real_diagonal(&[3.0, 4.0]);
        assert!((fk_det_ratio(&a, &b, &t).unwrap() - 12f64.sqrt()).abs() < 1e-13);
        assert!(matches!(
            fk_det_ratio(&HermitianMatrix::from_real_diagonal(&[1.0, 0.0]), &b, &t),
            Err(Error::Regularity(_))
        ));
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(matches!(fk_det(&ComplexMatrix::zeros(2, 3), &tol()), Err(Error::Shape(_))));
    }

    #[test]
    fn multiplicative_and_inverse() {
        let t = tol();
        let mut rng = trial_rng(11, 0);
        for n in 1..=12 {
            let a = random_complex(n, &mut rng);
            let b = random_complex(n, &mut rng);
            let da = fk_det(&a, &t).unwrap().value;
            let db = fk_det(&b, &t).unwrap().value;
            let dab = fk_det(&(&a * &b), &t).unwrap().value;
            assert!(rel(dab, da * db) < 1e-9, "n={n}");
            let inv = a.clone().try_inverse().unwrap();
            assert!(rel(fk_det(&inv, &t).unwrap().value * da, 1.0) < 1e-9);
        }
    }

    #[test]
    fn monotone_on_positive_cone_and_bounded_by_trace() {
        let t = tol();
        let mut rng = trial_rng(12, 0);
        for n in 2..=6 {
            let cfg = SamplerConfig::new(n).with_spectrum(0.1, 10.0);
            let a = random_pd(&cfg, &mut rng);
            let p = random_pd(&cfg, &mut rng);
            let da = fk_det_hermitian(&a, &t).unwrap().value;
            assert!(da <= fk_det_hermitian(&a.add(&p), &t).unwrap().value + 1e-9);
            assert!(da <= a.trace() / n as f64 + 1e-9);
            let scalar = HermitianMatrix::identity(n).scale(2.5);
            assert!((fk_det_hermitian(&scalar, &t).unwrap().value - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn continuity_from_above_for_singular_psd() {
        let t = tol();
        let a = real(3, &[1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 2.0]);
        let base = fk_det_hermitian(&a, &t).unwrap().value;
        assert_eq!(base, 0.0);
        let mut last = f64::INFINITY;
        for k in 1..=6 {
            let eps = 10f64.powi(-k);
            let d = (fk_det_hermitian(&a.shift(eps), &t).unwrap().value - base).abs();
            assert!(d < last);
            last = d;
        }
        assert!(last < 0.05);
    }

    #[test]
    fn block_formula() {
        let t = tol();
        let mut rng = trial_rng(13, 0);
        let cfg = SamplerConfig::new(3).with_spectrum(0.2, 5.0);
        let a1 = random_pd(&cfg, &mut rng);
        let a2 = random_pd(&cfg, &mut rng);
        let whole = fk_det_hermitian(&block_diagonal(&[a1.clone(), a2.clone()]), &t).unwrap().value;
        let parts = (fk_det_hermitian(&a1, &t).unwrap().value * fk_det_hermitian(&a2, &t).unwrap().value).sqrt();
        assert!(rel(whole, parts) < 1e-9);
        let inv = inverse_pd(&a1).unwrap();
        assert!(rel(fk_det_hermitian(&inv, &t).unwrap().value, 1.0 / fk_det_hermitian(&a1, &t).unwrap().value) < 1e-9);
    }

    #[test]
    fn sylvester_identity() {
        let t = tol();
        let mut rng = trial_rng(14, 0);
        for n in 1..=8 {
            let a = random_complex(n, &mut rng);
            let b = random_complex(n, &mut rng);
            let id = ComplexMatrix::identity(n, n);
            let left = fk_det(&(&id + &a * &b), &t).unwrap().value;
            let right = fk_det(&(&id + &b * &a), &t).unwrap().value;
            assert!(rel(left, right) < 1e-9);
        }
    }
}
