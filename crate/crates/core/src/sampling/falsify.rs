//! Randomized search for inputs that minimize an inequality's gap.
//!
//! Hill climbing with random restarts: each step adds a random Hermitian
//! direction scaled to a fraction of the current input's norm, repairs the
//! result back into the precondition class, and keeps it if the relative
//! gap `gap / scale` went down. The step halves on every failure; after ten
//! failed levels the search restarts from a fresh draw.

use serde::Serialize;

use super::{random_hermitian_direction, trial_rng};
use crate::error::{Error, Result};
use crate::linalg::{apply_fn, HermitianMatrix, Interval};
use crate::report::{IneqId, InequalityReport};
use crate::subalgebra::is_member;
use crate::suite::{evaluate, generate, Instance, TrialSetup};

const INITIAL_STEP: f64 = 0.5;
const STEP_LEVELS: usize = 10;

#[derive(Clone, Debug, Serialize)]
pub struct FalsifyOutcome {
    /// Report with the smallest relative gap seen.
    pub best: InequalityReport,
    pub evaluations: usize,
    pub restarts: usize,
    /// Evaluation count at which the first violation appeared.
    pub first_violation: Option<usize>,
}

fn objective(reports: &[InequalityReport]) -> Option<(f64, &InequalityReport)> {
    reports
        .iter()
        .map(|r| (r.gap / r.scale, r))
        .filter(|(g, _)| g.is_finite())
        .min_by(|a, b| a.0.total_cmp(&b.0))
}

/// Clips the spectrum of `m` into `[lo, hi]`.
fn clip(m: &HermitianMatrix, lo: f64, hi: f64, setup: &TrialSetup) -> Result<HermitianMatrix> {
    apply_fn(m, |t| t.clamp(lo, hi), &Interval::real_line(), &setup.tol)
}

fn perturb(
    inst: &Instance,
    setup: &TrialSetup,
    step: f64,
    rng: &mut super::TrialRng,
) -> Result<Instance> {
    let (lo, hi) = setup.spectrum;
    let mut next = inst.clone();
    if setup.id == IneqId::MaticVarCounterexample {
        let b = inst.b.as_ref().expect("counterexample instances carry B");
        let dir = random_hermitian_direction(setup.n, rng);
        let moved = clip(&b.add(&dir.scale(step * b.frobenius().max(1.0))), 0.0, hi, setup)?;
        if is_member(moved.as_matrix(), &setup.partition, &setup.tol)? {
            return Err(Error::Precondition("perturbed B fell into the subalgebra".into()));
        }
        next.b = Some(moved);
        return Ok(next);
    }
    let dir = random_hermitian_direction(setup.n, rng);
    let moved = inst.a.add(&dir.scale(step * inst.a.frobenius().max(1.0)));
    next.a = match setup.id {
        IneqId::Square => clip(&moved, -hi, hi, setup)?,
        _ if setup.rank.is_some() => clip(&moved, 0.0, hi, setup)?,
        _ => clip(&moved, lo, hi, setup)?,
    };
    Ok(next)
}

/// Searches for the smallest relative gap of `id` within `budget`
/// evaluations. A zero budget returns the report of the seed instance.
pub fn falsify(setup: &TrialSetup, budget: usize, seed: u64) -> Result<FalsifyOutcome> {
    setup.validate()?;
    let mut rng = trial_rng(seed, 0);
    let mut evaluations = 0usize;
    let mut restarts = 0usize;
    let mut first_violation = None;

    let context = setup.context();
    let finish = |mut r: InequalityReport, e: usize| {
        r.seed = seed;
        r.trial = e as u64;
        r.context = context.clone();
        r
    };

    let draw = |rng: &mut super::TrialRng| -> Result<(Instance, Vec<InequalityReport>)> {
        let mut last = None;
        for _ in 0..crate::suite::MAX_RESAMPLES {
            let inst = generate(setup, rng)?;
            match evaluate(setup, &inst) {
                Ok(r) => return Ok((inst, r)),
                Err(e @ Error::IllConditioned(_)) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last.expect("at least one attempt"))
    };

    let (mut current, reports) = draw(&mut rng)?;
    let (mut current_obj, seed_report) =
        objective(&reports).ok_or_else(|| Error::Numerical("seed instance has no finite gap".into()))?;
    let mut best = finish(seed_report.clone(), 0);
    if budget == 0 {
        return Ok(FalsifyOutcome { best, evaluations: 0, restarts: 0, first_violation: None });
    }
    evaluations += 1;
    if !seed_report.holds {
        first_violation = Some(evaluations);
    }
    let mut best_obj = current_obj;
    let mut step = INITIAL_STEP;
    let mut level = 0;

    while evaluations < budget {
        if level >= STEP_LEVELS {
            let (inst, reports) = draw(&mut rng)?;
            evaluations += 1;
            restarts += 1;
            step = INITIAL_STEP;
            level = 0;
            if let Some((obj, r)) = objective(&reports) {
                current = inst;
                current_obj = obj;
                if !r.holds && first_violation.is_none() {
                    first_violation = Some(evaluations);
                }
                if obj < best_obj {
                    best_obj = obj;
                    best = finish(r.clone(), evaluations);
                }
            }
            continue;
        }
        let candidate = perturb(&current, setup, step, &mut rng).and_then(|inst| {
            let reports = evaluate(setup, &inst)?;
            Ok((inst, reports))
        });
        evaluations += 1;
        let improved = match &candidate {
            Ok((_, reports)) => match objective(reports) {
                Some((obj, r)) => {
                    if !r.holds && first_violation.is_none() {
                        first_violation = Some(evaluations);
                    }
                    if obj < best_obj {
                        best_obj = obj;
                        best = finish(r.clone(), evaluations);
                    }
                    obj < current_obj
                }
                None => false,
            },
            Err(_) => false,
        };
        if improved {
            let (inst, reports) = candidate.expect("improved candidates evaluated");
            current = inst;
            current_obj = objective(&reports).expect("finite objective").0;
        } else {
            step *= 0.5;
            level += 1;
        }
    }
    Ok(FalsifyOutcome { best, evaluations, restarts, first_violation })
}
