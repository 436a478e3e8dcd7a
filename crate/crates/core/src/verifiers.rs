//! One checker per inequality. Each returns an [`InequalityReport`] whose
//! `equality_expected` evaluates the equality characterization on the inputs.
//!
//! `Φ` is the block pinching for a [`BlockPartition`]; the `up_*`,
//! `trace_jensen` and `logconvex_det` checks accept any unital
//! trace-preserving positive map.

use crate::error::{Error, Result};
use crate::fkdet::{fk_det_hermitian, log_fk_det, FkValue};
use crate::functions::{eval_on_matrix, Func};
use crate::linalg::{
    apply_fn_spectrum, eig_hermitian, is_psd, normalized_trace, sqrt_psd, HermitianMatrix, Interval,
    ToleranceConfig,
};
use crate::report::{IneqId, InequalityReport};
use crate::subalgebra::{
    apply_map_hermitian, is_member, membership_residual, pinch_hermitian, BlockPartition, PositiveMapSpec,
};

/// Inputs that must be inverted are rejected above this condition number;
/// the suite resamples such trials.
pub const VERIFIER_MAX_CONDITION: f64 = 1e6;

fn check_dims(a: &HermitianMatrix, n: usize) -> Result<()> {
    if a.dim() != n {
        return Err(Error::Shape(format!("matrix is {}x{0}, expected {n}x{n}", a.dim())));
    }
    Ok(())
}

fn require_psd(a: &HermitianMatrix, name: &str, tol: &ToleranceConfig) -> Result<()> {
    if !is_psd(a, tol)? {
        return Err(Error::Precondition(format!("{name} must be positive semidefinite")));
    }
    Ok(())
}

/// Checks positive definiteness and returns the condition number.
fn require_pd(a: &HermitianMatrix, name: &str, tol: &ToleranceConfig) -> Result<f64> {
    let s = eig_hermitian(a)?;
    let threshold = tol.psd_tol * s.spectral_norm().max(1.0);
    if s.min() < -threshold {
        return Err(Error::Precondition(format!("{name} must be positive definite")));
    }
    if s.min() <= threshold {
        return Err(Error::Regularity(format!("{name} is singular (smallest eigenvalue {:.3e})", s.min())));
    }
    Ok(s.condition_number())
}

/// Inverse of a positive definite matrix through its spectrum, refusing
/// condition numbers above [`VERIFIER_MAX_CONDITION`].
fn inv(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    let s = eig_hermitian(a)?;
    if s.min() <= 0.0 {
        return Err(Error::Regularity(format!("smallest eigenvalue {:.3e}", s.min())));
    }
    let cond = s.condition_number();
    if cond > VERIFIER_MAX_CONDITION {
        return Err(Error::IllConditioned(cond));
    }
    apply_fn_spectrum(&s, |t| 1.0 / t, &Interval::positive(), tol)
}

fn phi(a: &HermitianMatrix, p: &BlockPartition) -> Result<HermitianMatrix> {
    pinch_hermitian(a, p)
}

fn member(a: &HermitianMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<bool> {
    is_member(a.as_matrix(), p, tol)
}

fn logdet(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<f64> {
    let v = log_fk_det(a, tol)?;
    if v == f64::NEG_INFINITY {
        return Err(Error::Regularity("determinant vanishes".into()));
    }
    Ok(v)
}

/// `log Δ(A + B) − log Δ(A)`
fn log_ratio(a: &HermitianMatrix, b: &HermitianMatrix, tol: &ToleranceConfig) -> Result<f64> {
    Ok(logdet(&a.add(b), tol)? - logdet(a, tol)?)
}

fn det(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<FkValue> {
    fk_det_hermitian(a, tol)
}

/// `det A ≤ Π aᵢᵢ`, compared as `log Δ(A) ≤ log Δ(diag A)`.
pub fn hadamard(a: &HermitianMatrix, tol: &ToleranceConfig) -> Result<InequalityReport> {
    let p = BlockPartition::diagonal(a.dim());
    let cond = require_pd(a, "A", tol)?;
    Ok(InequalityReport::determinant(IneqId::Hadamard, det(a, tol)?, det(&phi(a, &p)?, tol)?, tol)
        .expect(Some(member(a, &p, tol)?))
        .note("cond_a", cond)
        .with_witness("A", a))
}

/// `det A ≤ Π det A[αᵢ]`, compared as `log Δ(A) ≤ log Δ(Φ(A))`.
pub fn fischer(a: &HermitianMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<InequalityReport> {
    check_dims(a, p.total())?;
    let cond = require_pd(a, "A", tol)?;
    Ok(InequalityReport::determinant(IneqId::Fischer, det(a, tol)?, det(&phi(a, p)?, tol)?, tol)
        .expect(Some(member(a, p, tol)?))
        .note("cond_a", cond)
        .note("membership_residual", membership_residual(a.as_matrix(), p)?)
        .with_witness("A", a))
}

/// `Δ(Φ(A⁻¹)⁻¹) ≤ Δ(A) ≤ Δ(Φ(A))`. The left report is produced only for
/// regular `A`; the right one also for singular PSD `A`.
pub fn arveson(
    a: &HermitianMatrix,
    p: &BlockPartition,
    tol: &ToleranceConfig,
) -> Result<(Option<InequalityReport>, InequalityReport)> {
    check_dims(a, p.total())?;
    require_psd(a, "A", tol)?;
    let expected = member(a, p, tol)?;
    let residual = membership_residual(a.as_matrix(), p)?;
    let da = det(a, tol)?;
    let right = InequalityReport::determinant(IneqId::ArvesonRight, da, det(&phi(a, p)?, tol)?, tol)
        .expect(Some(expected))
        .note("membership_residual", residual)
        .with_witness("A", a);
    let left = if da.is_zero() {
        None
    } else {
        let cond = require_pd(a, "A", tol)?;
        let lower = inv(&phi(&inv(a, tol)?, p)?, tol)?;
        Some(
            InequalityReport::determinant(IneqId::ArvesonLeft, det(&lower, tol)?, da, tol)
                .expect(Some(expected))
                .note("cond_a", cond)
                .note("membership_residual", residual)
                .with_witness("A", a),
        )
    };
    Ok((left, right))
}

/// `Φ(A)² ≤ Φ(A²)` for Hermitian `A`.
pub fn square(a: &HermitianMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<InequalityReport> {
    check_dims(a, p.total())?;
    let pa = phi(a, p)?;
    let lower = pa.commuting_product(&pa);
    let upper = phi(&a.commuting_product(a), p)?;
    Ok(InequalityReport::operator(IneqId::Square, &lower, &upper, tol)?
        .expect(Some(member(a, p, tol)?))
        .note("membership_residual", membership_residual(a.as_matrix(), p)?)
        .with_witness("A", a))
}

/// `Φ(A)⁻¹ ≤ Φ(A⁻¹)` for positive definite `A`.
pub fn inverse(a: &HermitianMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<InequalityReport> {
    check_dims(a, p.total())?;
    let cond = require_pd(a, "A", tol)?;
    let lower = inv(&phi(a, p)?, tol)?;
    let upper = phi(&inv(a, tol)?, p)?;
    Ok(InequalityReport::operator(IneqId::Inverse, &lower, &upper, tol)?
        .expect(Some(member(a, p, tol)?))
        .note("cond_a", cond)
        .with_witness("A", a))
}

/// `X(λ+X)⁻¹` and `X²(λ+X)⁻¹` for PSD `X`, after checking them against
/// `I − λ(λ+X)⁻¹` and `X − λ + λ²(λ+X)⁻¹`.
fn resolvent_parts(x: &HermitianMatrix, lambda: f64, tol: &ToleranceConfig) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let s = eig_hermitian(x)?;
    let domain = Interval::nonnegative();
    let first = apply_fn_spectrum(&s, |t| t / (lambda + t), &domain, tol)?;
    let second = apply_fn_spectrum(&s, |t| t * t / (lambda + t), &domain, tol)?;
    let res = inv(&x.shift(lambda), tol)?;
    let n = x.dim();
    let id = HermitianMatrix::identity(n);
    let first_alt = id.sub(&res.scale(lambda));
    let second_alt = x.shift(-lambda).add(&res.scale(lambda * lambda));
    let r1 = (first.as_matrix() - first_alt.as_matrix()).norm() / first.frobenius().max(1.0);
    let r2 = (second.as_matrix() - second_alt.as_matrix()).norm() / second.frobenius().max(1.0).max(lambda);
    if r1 > 1e-10 || r2 > 1e-10 {
        return Err(Error::Numerical(format!("resolvent identities fail (residuals {r1:.2e}, {r2:.2e})")));
    }
    Ok((first, second))
}

/// (i) `Φ(A(λ+A)⁻¹) ≤ Φ(A)(λ+Φ(A))⁻¹` and
/// (ii) `Φ(A)²(λ+Φ(A))⁻¹ ≤ Φ(A²(λ+A)⁻¹)` for PSD `A` and `λ > 0`.
pub fn resolvent(
    a: &HermitianMatrix,
    p: &BlockPartition,
    lambda: f64,
    tol: &ToleranceConfig,
) -> Result<(InequalityReport, InequalityReport)> {
    check_dims(a, p.total())?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Precondition(format!("λ = {lambda} must be positive")));
    }
    require_psd(a, "A", tol)?;
    let pa = phi(a, p)?;
    let (a1, a2) = resolvent_parts(a, lambda, tol)?;
    let (p1, p2) = resolvent_parts(&pa, lambda, tol)?;
    let expected = Some(member(a, p, tol)?);
    let first = InequalityReport::operator(IneqId::ResolventI, &phi(&a1, p)?, &p1, tol)?
        .expect(expected)
        .note("lambda", lambda)
        .with_witness("A", a);
    let second = InequalityReport::operator(IneqId::ResolventIi, &p2, &phi(&a2, p)?, tol)?
        .expect(expected)
        .note("lambda", lambda)
        .with_witness("A", a);
    Ok((first, second))
}

/// `Φ(f(A)) ≤ f(Φ(A))` for operator monotone `f`.
pub fn op_monotone(f: &Func, a: &HermitianMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<InequalityReport> {
    check_dims(a, p.total())?;
    let flags = f.flags();
    if !flags.operator_monotone {
        return Err(Error::Precondition(format!("{f} is not operator monotone")));
    }
    let cond = require_pd(a, "A", tol)?;
    let lower = phi(&eval_on_matrix(f, a, tol)?, p)?;
    let upper = eval_on_matrix(f, &phi(a, p)?, tol)?;
    Ok(InequalityReport::operator(IneqId::OpMonotone, &lower, &upper, tol)?
        .expect(Some(flags.linear || member(a, p, tol)?))
        .note("cond_a", cond)
        .with_witness("A", a))
}

/// `f(Φ(A)) ≤ Φ(f(A))` for operator convex `f`.
pub fn op_convex(f: &Func, a: &HermitianMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<InequalityReport> {
    check_dims(a, p.total())?;
    let flags = f.flags();
    if !flags.operator_convex {
        return Err(Error::Precondition(format!("{f} is not operator convex")));
    }
    let lower = eval_on_matrix(f, &phi(a, p)?, tol)?;
    let upper = phi(&eval_on_matrix(f, a, tol)?, p)?;
    Ok(InequalityReport::operator(IneqId::OpConvex, &lower, &upper, tol)?
        .expect(Some(flags.linear || member(a, p, tol)?))
        .with_witness("A", a))
}

fn det_monotone_with<M>(f: &Func, a: &HermitianMatrix, map: M, tol: &ToleranceConfig) -> Result<(InequalityReport, f64)>
where
    M: Fn(&HermitianMatrix) -> Result<HermitianMatrix>,
{
    let flags = f.flags();
    if !(flags.operator_monotone && flags.positive_valued && !flags.constant) {
        return Err(Error::Precondition(format!("{f} must be non-constant, positive and operator monotone")));
    }
    let cond = require_pd(a, "A", tol)?;
    let lhs = det(&eval_on_matrix(f, a, tol)?, tol)?;
    let rhs = det(&eval_on_matrix(f, &map(a)?, tol)?, tol)?;
    Ok((InequalityReport::determinant(IneqId::DetMonotone, lhs, rhs, tol).with_witness("A", a), cond))
}

/// `Δ(f(A)) ≤ Δ(f(Φ(A)))` for non-constant positive operator monotone `f`.
pub fn det_monotone(f: &Func, a: &HermitianMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<InequalityReport> {
    check_dims(a, p.total())?;
    let (r, cond) = det_monotone_with(f, a, |x| phi(x, p), tol)?;
    Ok(r.expect(Some(member(a, p, tol)?)).note("cond_a", cond))
}

/// The same determinant inequality for a unital trace-preserving map that
/// is 2-positive (unitary mixtures are completely positive). Equality is
/// diagnosed only for pinchings.
pub fn det_monotone_map(f: &Func, a: &HermitianMatrix, map: &PositiveMapSpec, tol: &ToleranceConfig) -> Result<InequalityReport> {
    let (r, cond) = det_monotone_with(f, a, |x| apply_map_hermitian(x, map), tol)?;
    let expected = match map.as_partition() {
        Some(p) => Some(member(a, p, tol)?),
        None => None,
    };
    Ok(r.expect(expected).note("cond_a", cond))
}

/// `Δ(I + Φ(A)⁻¹) ≤ Δ(I + A⁻¹)`.
pub fn det_perturb(a: &HermitianMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<InequalityReport> {
    check_dims(a, p.total())?;
    let cond = require_pd(a, "A", tol)?;
    let lhs = logdet(&inv(&phi(a, p)?, tol)?.shift(1.0), tol)?;
    let rhs = logdet(&inv(a, tol)?.shift(1.0), tol)?;
    Ok(InequalityReport::log_values(IneqId::DetPerturb, lhs, rhs, tol)
        .expect(Some(member(a, p, tol)?))
        .note("cond_a", cond)
        .with_witness("A", a))
}

fn matic_inputs(a: &HermitianMatrix, b: &HermitianMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<f64> {
    check_dims(a, p.total())?;
    check_dims(b, p.total())?;
    let cond = require_pd(a, "A", tol)?;
    require_psd(b, "B", tol)?;
    if !member(b, p, tol)? {
        return Err(Error::Precondition("B must lie in the block subalgebra".into()));
    }
    Ok(cond)
}

/// `Δ(Φ(A)+B)/Δ(Φ(A)) ≤ Δ(A+B)/Δ(A)` for PD `A` and a PSD member `B`.
/// Equality is expected exactly when `B = 0`, or `B` is regular and `A` a
/// member; for other singular `B` it is left undecided.
pub fn matic1(a: &HermitianMatrix, b: &HermitianMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<InequalityReport> {
    let cond = matic_inputs(a, b, p, tol)?;
    let pa = phi(a, p)?;
    let lhs = log_ratio(&pa, b, tol)?;
    let rhs = log_ratio(a, b, tol)?;
    let s = eig_hermitian(b)?;
    let b_zero = s.spectral_norm() <= tol.psd_tol;
    let b_regular = s.min() > tol.psd_tol * s.spectral_norm().max(1.0);
    let expected = if b_zero {
        Some(true)
    } else if b_regular {
        Some(member(a, p, tol)?)
    } else {
        None
    };
    Ok(InequalityReport::log_values(IneqId::Matic1, lhs, rhs, tol)
        .expect(expected)
        .note("cond_a", cond)
        .with_witness("A", a)
        .with_witness("B", b))
}

/// `Δ(A+B)/Δ(A) ≤ Δ(Φ(A⁻¹)⁻¹+B)/Δ(Φ(A⁻¹)⁻¹)` for PD `A` and a PSD member
/// `B`; equality exactly when `B^{1/2}A⁻¹B^{1/2}` is a member.
pub fn matic2(a: &HermitianMatrix, b: &HermitianMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<InequalityReport> {
    let cond = matic_inputs(a, b, p, tol)?;
    let a_inv = inv(a, tol)?;
    let harmonic = inv(&phi(&a_inv, p)?, tol)?;
    let lhs = log_ratio(a, b, tol)?;
    let rhs = log_ratio(&harmonic, b, tol)?;
    let root = sqrt_psd(b, tol)?;
    let clause = a_inv.congruence(root.as_matrix());
    Ok(InequalityReport::log_values(IneqId::Matic2, lhs, rhs, tol)
        .expect(Some(member(&clause, p, tol)?))
        .note("cond_a", cond)
        .note("clause_membership_residual", membership_residual(clause.as_matrix(), p)?)
        .with_witness("A", a)
        .with_witness("B", b))
}

/// The generalization `Δ(Φ(A)+Φ(B))/Δ(Φ(A)) ≤ Δ(A+B)/Δ(A)` with `A = I` and
/// a non-member `B`. It is false: the report carries a negative gap.
pub fn matic_var_counterexample(b: &HermitianMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<InequalityReport> {
    check_dims(b, p.total())?;
    require_psd(b, "B", tol)?;
    if member(b, p, tol)? {
        return Err(Error::Precondition("B must not lie in the block subalgebra".into()));
    }
    let id = HermitianMatrix::identity(b.dim());
    let lhs = log_ratio(&id, &phi(b, p)?, tol)?;
    let rhs = log_ratio(&id, b, tol)?;
    Ok(InequalityReport::log_values(IneqId::MaticVarCounterexample, lhs, rhs, tol)
        .note("membership_residual", membership_residual(b.as_matrix(), p)?)
        .with_witness("A", &id)
        .with_witness("B", b))
}

fn spectrum_inside(inner: &HermitianMatrix, outer: &HermitianMatrix, tol: &ToleranceConfig) -> Result<()> {
    let si = eig_hermitian(inner)?;
    let so = eig_hermitian(outer)?;
    let slack = tol.psd_tol * so.spectral_norm().max(1.0) * 10.0;
    if si.min() < so.min() - slack || si.max() > so.max() + slack {
        return Err(Error::Numerical(format!(
            "spectrum [{}, {}] of the image escapes [{}, {}]",
            si.min(),
            si.max(),
            so.min(),
            so.max()
        )));
    }
    Ok(())
}

/// `τ(f(M(A))) ≤ τ(M(f(A)))` for convex `f` and a unital trace-preserving
/// positive map `M`.
pub fn trace_jensen(f: &Func, a: &HermitianMatrix, map: &PositiveMapSpec, tol: &ToleranceConfig) -> Result<InequalityReport> {
    let flags = f.flags();
    if !(flags.operator_convex || flags.log_convex) {
        return Err(Error::Precondition(format!("{f} is not known to be convex")));
    }
    let ma = apply_map_hermitian(a, map)?;
    spectrum_inside(&ma, a, tol)?;
    let lhs = normalized_trace(eval_on_matrix(f, &ma, tol)?.as_matrix())?.re;
    let rhs = normalized_trace(apply_map_hermitian(&eval_on_matrix(f, a, tol)?, map)?.as_matrix())?.re;
    Ok(InequalityReport::scalar(IneqId::TraceJensen, lhs, rhs, tol)
        .expect(flags.linear.then_some(true))
        .with_witness("A", a))
}

/// `Δ(f(M(A))) ≤ Δ(f(A))` for positive log-convex `f`.
pub fn logconvex_det(f: &Func, a: &HermitianMatrix, map: &PositiveMapSpec, tol: &ToleranceConfig) -> Result<InequalityReport> {
    let flags = f.flags();
    if !(flags.log_convex && flags.positive_valued) {
        return Err(Error::Precondition(format!("{f} must be positive and log-convex")));
    }
    require_psd(a, "A", tol)?;
    let ma = apply_map_hermitian(a, map)?;
    spectrum_inside(&ma, a, tol)?;
    let lhs = det(&eval_on_matrix(f, &ma, tol)?, tol)?;
    let rhs = det(&eval_on_matrix(f, a, tol)?, tol)?;
    Ok(InequalityReport::determinant(IneqId::LogconvexDet, lhs, rhs, tol)
        .expect(flags.constant.then_some(true))
        .with_witness("A", a))
}

/// `Δ(M(A⁻¹)⁻¹) ≤ Δ(A) ≤ Δ(M(A))`; the left report needs regular `A`.
pub fn up_hadamard(
    a: &HermitianMatrix,
    map: &PositiveMapSpec,
    tol: &ToleranceConfig,
) -> Result<(Option<InequalityReport>, InequalityReport)> {
    require_psd(a, "A", tol)?;
    let da = det(a, tol)?;
    let right = InequalityReport::determinant(IneqId::UpHadamard, da, det(&apply_map_hermitian(a, map)?, tol)?, tol)
        .note("side", 1.0)
        .with_witness("A", a);
    let left = if da.is_zero() {
        None
    } else {
        let cond = require_pd(a, "A", tol)?;
        let lower = inv(&apply_map_hermitian(&inv(a, tol)?, map)?, tol)?;
        Some(
            InequalityReport::determinant(IneqId::UpHadamard, det(&lower, tol)?, da, tol)
                .note("side", -1.0)
                .note("cond_a", cond)
                .with_witness("A", a),
        )
    };
    Ok((left, right))
}

/// `Δ(I + M(A)⁻¹) ≤ Δ(I + A⁻¹)`.
pub fn up_perturb(a: &HermitianMatrix, map: &PositiveMapSpec, tol: &ToleranceConfig) -> Result<InequalityReport> {
    let cond = require_pd(a, "A", tol)?;
    let lhs = logdet(&inv(&apply_map_hermitian(a, map)?, tol)?.shift(1.0), tol)?;
    let rhs = logdet(&inv(a, tol)?.shift(1.0), tol)?;
    Ok(InequalityReport::log_values(IneqId::UpPerturb, lhs, rhs, tol).note("cond_a", cond).with_witness("A", a))
}

/// `Δ(A+B)/Δ(A) ≤ Δ(M(A)+M(B))/Δ(M(A⁻¹)⁻¹)` for PD `A`, PSD `B`.
pub fn up_matic(a: &HermitianMatrix, b: &HermitianMatrix, map: &PositiveMapSpec, tol: &ToleranceConfig) -> Result<InequalityReport> {
    check_dims(b, a.dim())?;
    let cond = require_pd(a, "A", tol)?;
    require_psd(b, "B", tol)?;
    let lhs = log_ratio(a, b, tol)?;
    let ma = apply_map_hermitian(a, map)?;
    let mb = apply_map_hermitian(b, map)?;
    let harmonic = inv(&apply_map_hermitian(&inv(a, tol)?, map)?, tol)?;
    let rhs = logdet(&ma.add(&mb), tol)? - logdet(&harmonic, tol)?;
    Ok(InequalityReport::log_values(IneqId::UpMatic, lhs, rhs, tol)
        .note("cond_a", cond)
        .with_witness("A", a)
        .with_witness("B", b))
}

/// Differential entropy `½ ln((2πe)^n det Σ)` of a centred Gaussian.
pub fn gaussian_entropy_of(sigma: &HermitianMatrix, tol: &ToleranceConfig) -> Result<f64> {
    let n = sigma.dim() as f64;
    let log_det = n * logdet(sigma, tol)?;
    Ok(0.5 * (n * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln() + log_det))
}

/// Subadditivity `h(X) ≤ Σᵢ h(X_{αᵢ})` for a Gaussian vector with
/// covariance `Σ`, split along the partition.
pub fn gaussian_entropy(sigma: &HermitianMatrix, p: &BlockPartition, tol: &ToleranceConfig) -> Result<InequalityReport> {
    check_dims(sigma, p.total())?;
    let cond = require_pd(sigma, "Σ", tol)?;
    let lhs = gaussian_entropy_of(sigma, tol)?;
    let rhs = p.blocks(sigma)?.iter().map(|b| gaussian_entropy_of(b, tol)).sum::<Result<f64>>()?;
    Ok(InequalityReport::scalar(IneqId::GaussianEntropy, lhs, rhs, tol)
        .expect(Some(member(sigma, p, tol)?))
        .note("cond_a", cond)
        .with_witness("Sigma", sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_hermitian, random_member, random_nonmember, random_pd, trial_rng, SamplerConfig};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn real(n: usize, rows: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_rows(n, rows).unwrap()
    }

    fn f(s: &str) -> Func {
        s.parse().unwrap()
    }

    fn cfg(n: usize, p: &BlockPartition) -> SamplerConfig {
        SamplerConfig::new(n).with_partition(p.clone()).with_spectrum(0.2, 5.0)
    }

    #[test]
    fn hadamard_examples() {
        let t = tol();
        let r = hadamard(&HermitianMatrix::from_real_diagonal(&[2.0, 5.0]), &t).unwrap();
        assert!(r.gap.abs() < 1e-15 && r.equality_detected && r.equality_expected == Some(true));
        let r = hadamard(&real(2, &[2.0, 1.0, 1.0, 2.0]), &t).unwrap();
        // log Δ: ½ln 3 vs ½ln 4
        assert!((r.gap - 0.5 * (4f64 / 3.0).ln()).abs() < 1e-14);
        assert!(r.holds && !r.equality_detected && r.equality_expected == Some(false));
        let r = hadamard(&real(2, &[1.0, 0.999, 0.999, 1.0]), &t).unwrap();
        assert!(r.holds && (r.notes["cond_a"] - 1999.0).abs() < 1e-6);
        assert!(matches!(hadamard(&real(2, &[1.0, 2.0, 2.0, 1.0]), &t), Err(Error::Precondition(_))));
    }

    #[test]
    fn fischer_reduces_to_hadamard() {
        let t = tol();
        let mut rng = trial_rng(1, 0);
        for n in 2..=5 {
            let a = random_pd(&SamplerConfig::new(n), &mut rng);
            let h = hadamard(&a, &t).unwrap();
            let fi = fischer(&a, &BlockPartition::diagonal(n), &t).unwrap();
            assert!((h.gap - fi.gap).abs() < 1e-14);
        }
        let p = BlockPartition::halves(4);
        let a = random_nonmember(&cfg(4, &p), 0.1, &mut rng).unwrap();
        let r = fischer(&a, &p, &t).unwrap();
        let dense = |m: &HermitianMatrix| m.as_matrix().determinant().re.ln();
        let blocks = p.blocks(&a).unwrap();
        let expected = (dense(&blocks[0]) + dense(&blocks[1]) - dense(&a)) / 4.0;
        assert!((r.gap - expected).abs() < 1e-12);
        assert!(r.gap > 0.0 && !r.equality_detected);
    }

    #[test]
    fn arveson_examples() {
        let t = tol();
        let p = BlockPartition::diagonal(2);
        let (left, right) = arveson(&HermitianMatrix::from_real_diagonal(&[1.0, 0.0]), &p, &t).unwrap();
        assert!(left.is_none());
        assert!(right.holds && right.gap == 0.0);

        let p = BlockPartition::halves(4);
        let mut rng = trial_rng(2, 0);
        let a = random_nonmember(&cfg(4, &p), 0.1, &mut rng).unwrap();
        let (left, right) = arveson(&a, &p, &t).unwrap();
        let left = left.unwrap();
        assert!(left.gap > 1e-6 && right.gap > 1e-6);
        let explicit = a.as_matrix().clone().try_inverse().unwrap();
        let pinched = crate::subalgebra::pinch(&explicit, &p).unwrap().try_inverse().unwrap();
        let lower = crate::fkdet::fk_det(&pinched, &t).unwrap().log_value;
        assert!((left.lhs - lower).abs() < 1e-10);

        let m = random_member(&cfg(4, &p), &mut rng);
        let (left, right) = arveson(&m, &p, &t).unwrap();
        assert!(left.unwrap().equality_detected && right.equality_detected);
    }

    #[test]
    fn square_and_inverse_examples() {
        let t = tol();
        let p = BlockPartition::diagonal(2);
        let r = square(&real(2, &[1.0, 1.0, 1.0, 1.0]), &p, &t).unwrap();
        assert!((r.gap - 1.0).abs() < 1e-14);
        let mut rng = trial_rng(3, 0);
        let p = BlockPartition::halves(4);
        let m = random_member(&cfg(4, &p), &mut rng);
        assert!(square(&m, &p, &t).unwrap().equality_detected);
        assert!(inverse(&m, &p, &t).unwrap().equality_detected);
        let a = random_nonmember(&cfg(4, &p), 0.1, &mut rng).unwrap();
        assert!(square(&a, &p, &t).unwrap().gap > 0.0);
        assert!(inverse(&a, &p, &t).unwrap().gap > 0.0);
        let h = random_hermitian(&SamplerConfig::new(4), &mut rng);
        assert!(square(&h, &p, &t).unwrap().holds);
    }

    #[test]
    fn resolvent_examples() {
        let t = tol();
        let p = BlockPartition::halves(4);
        let mut rng = trial_rng(4, 0);
        let m = random_member(&cfg(4, &p), &mut rng);
        let (a, b) = resolvent(&m, &p, 1.0, &t).unwrap();
        assert!(a.equality_detected && b.equality_detected);
        let x = random_nonmember(&cfg(4, &p), 0.1, &mut rng).unwrap();
        let (a, b) = resolvent(&x, &p, 1.0, &t).unwrap();
        assert!(a.gap > 0.0 && b.gap > 0.0 && !a.equality_detected);
        let (a, _) = resolvent(&x, &p, 1e6, &t).unwrap();
        assert!(a.deviation < 1e-10);
        assert!(resolvent(&x, &p, 0.0, &t).is_err());
    }

    #[test]
    fn op_function_examples() {
        let t = tol();
        let p = BlockPartition::halves(4);
        let mut rng = trial_rng(5, 0);
        let a = random_nonmember(&cfg(4, &p), 0.1, &mut rng).unwrap();
        let r = op_monotone(&f("linear:1,2"), &a, &p, &t).unwrap();
        assert!(r.equality_detected && r.equality_expected == Some(true));
        let r = op_monotone(&f("rep:[0,0;(1,1)]"), &a, &p, &t).unwrap();
        assert!(r.gap > 0.0 && !r.equality_detected);
        let m = random_member(&cfg(4, &p), &mut rng);
        assert!(op_monotone(&f("power:0.5"), &m, &p, &t).unwrap().equality_detected);
        assert!(op_monotone(&f("square"), &a, &p, &t).is_err());

        let sq = op_convex(&f("square"), &a, &p, &t).unwrap();
        let direct = square(&a, &p, &t).unwrap();
        assert!((sq.gap - direct.gap).abs() < 1e-12);
        assert!(op_convex(&f("linear:3,-1"), &a, &p, &t).unwrap().equality_detected);
        assert!(op_convex(&f("reciprocal"), &m, &p, &t).unwrap().equality_detected);
    }

    #[test]
    fn det_monotone_and_perturb_agree() {
        let t = tol();
        let p = BlockPartition::halves(4);
        let mut rng = trial_rng(6, 0);
        for _ in 0..20 {
            let a = random_nonmember(&cfg(4, &p), 0.1, &mut rng).unwrap();
            let dm = det_monotone(&f("inv_perturb"), &a, &p, &t).unwrap();
            let dp = det_perturb(&a, &p, &t).unwrap();
            assert!((dm.gap - dp.gap).abs() < 1e-10);
            assert!(dm.gap > 0.0);
            let lin = det_monotone(&f("power:1"), &a, &p, &t).unwrap();
            let (_, right) = arveson(&a, &p, &t).unwrap();
            assert!((lin.gap - right.gap).abs() < 1e-12 && !lin.equality_detected);
        }
        assert!(det_monotone(&f("linear:2,0"), &random_pd(&SamplerConfig::new(4), &mut rng), &p, &t).is_err());
    }

    #[test]
    fn matic_examples() {
        let t = tol();
        let p = BlockPartition::halves(4);
        let mut rng = trial_rng(7, 0);
        let a = random_nonmember(&cfg(4, &p), 0.1, &mut rng).unwrap();
        let zero = HermitianMatrix::zeros(4);
        let r = matic1(&a, &zero, &p, &t).unwrap();
        assert!(r.equality_detected && r.equality_expected == Some(true));
        let id = HermitianMatrix::identity(4);
        let r = matic1(&a, &id, &p, &t).unwrap();
        assert!(r.gap > 0.0 && r.equality_expected == Some(false) && !r.equality_detected);
        let m = random_member(&cfg(4, &p), &mut rng);
        assert!(matic1(&m, &id, &p, &t).unwrap().equality_detected);

        let b1 = random_pd(&SamplerConfig::new(2), &mut rng);
        let b = crate::linalg::block_diagonal(&[b1, HermitianMatrix::zeros(2)]);
        let r = matic2(&a, &b, &p, &t).unwrap();
        assert!(r.equality_detected && r.equality_expected == Some(true));
        let r = matic1(&a, &b, &p, &t).unwrap();
        assert_eq!(r.equality_expected, None);
        let r = matic2(&a, &id, &p, &t).unwrap();
        assert!(r.gap > 0.0 && r.equality_expected == Some(false));
        assert!(matic2(&m, &id, &p, &t).unwrap().equality_detected);
        assert!(matches!(matic1(&a, &a, &p, &t), Err(Error::Precondition(_))));
    }

    #[test]
    fn matic_var_fixed_witness() {
        let t = tol();
        let b = real(2, &[1.0, 1.0, 1.0, 1.0]);
        let r = matic_var_counterexample(&b, &BlockPartition::diagonal(2), &t).unwrap();
        assert!((r.gap - (0.5 * 3f64.ln() - 2f64.ln())).abs() < 1e-14);
        assert!(!r.holds && !r.is_violation());
        assert!(matic_var_counterexample(&HermitianMatrix::identity(2), &BlockPartition::diagonal(2), &t).is_err());
    }

    #[test]
    fn unital_positive_examples() {
        let t = tol();
        let mut rng = trial_rng(8, 0);
        let a = random_pd(&SamplerConfig::new(3), &mut rng);
        let id_map = PositiveMapSpec::identity(3);
        let (l, r) = up_hadamard(&a, &id_map, &t).unwrap();
        assert!(l.unwrap().equality_detected && r.equality_detected);
        assert!(up_perturb(&a, &id_map, &t).unwrap().equality_detected);
        let (_, r) = up_hadamard(&a, &PositiveMapSpec::TraceMap, &t).unwrap();
        assert!((r.rhs - (a.trace() / 3.0).ln()).abs() < 1e-12);

        let sq = trace_jensen(&f("square"), &a, &PositiveMapSpec::TraceMap, &t).unwrap();
        let mean = a.trace() / 3.0;
        assert!((sq.lhs - mean * mean).abs() < 1e-12);
        let p = BlockPartition::diagonal(3);
        let tj = trace_jensen(&f("square"), &a, &PositiveMapSpec::Pinching(p.clone()), &t).unwrap();
        let direct = square(&a, &p, &t).unwrap();
        let pa = pinch_hermitian(&a, &p).unwrap();
        let via_square = (a.commuting_product(&a).trace() - pa.commuting_product(&pa).trace()) / 3.0;
        assert!((tj.gap - via_square).abs() < 1e-12 && direct.holds);
        assert!(trace_jensen(&f("linear:1,2"), &a, &PositiveMapSpec::TraceMap, &t).unwrap().equality_detected);

        let pinching = PositiveMapSpec::Pinching(p.clone());
        let (left, right) = arveson(&a, &p, &t).unwrap();
        let lc = logconvex_det(&f("reciprocal"), &a, &pinching, &t).unwrap();
        assert!((lc.gap - right.gap).abs() < 1e-12);
        let a_inv = crate::linalg::inverse_pd(&a).unwrap();
        let lc = logconvex_det(&f("reciprocal"), &a_inv, &pinching, &t).unwrap();
        assert!((lc.gap - left.unwrap().gap).abs() < 1e-12);
        assert!(logconvex_det(&f("linear:2,0"), &a, &PositiveMapSpec::TraceMap, &t).unwrap().equality_detected);
        assert!(logconvex_det(&f("power:0.5"), &a, &PositiveMapSpec::TraceMap, &t).is_err());
    }

    #[test]
    fn gaussian_entropy_examples() {
        let t = tol();
        let rho: f64 = 0.5;
        let sigma = real(2, &[1.0, rho, rho, 1.0]);
        let r = gaussian_entropy(&sigma, &BlockPartition::diagonal(2), &t).unwrap();
        assert!((r.gap - 0.5 * (1.0 / (1.0 - rho * rho)).ln()).abs() < 1e-14);
        let mut rng = trial_rng(9, 0);
        let p = BlockPartition::halves(4);
        let s = random_pd(&SamplerConfig::new(4), &mut rng);
        let g = gaussian_entropy(&s, &p, &t).unwrap();
        let fi = fischer(&s, &p, &t).unwrap();
        assert!((g.gap - 2.0 * fi.gap).abs() < 1e-10);
        let m = random_member(&cfg(4, &p), &mut rng);
        assert!(gaussian_entropy(&m, &p, &t).unwrap().equality_detected);
    }
}
