//! Report serialization, witness dumps and summaries.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use fkineq::suite::{SuiteRun, TrialFailure};
use fkineq::textio::write_matrix;
use fkineq::{IneqId, InequalityReport, ReportKind};
use serde::Serialize;

use crate::Common;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[value(name = "json-lines", alias = "jsonl")]
    JsonLines,
    Csv,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    ineq_id: IneqId,
    trial: u64,
    seed: u64,
    kind: ReportKind,
    lhs: f64,
    rhs: f64,
    gap: f64,
    scale: f64,
    holds: bool,
    equality_detected: bool,
    equality_expected: Option<bool>,
    deviation: f64,
    lhs_log: Option<f64>,
    rhs_log: Option<f64>,
    context: &'a str,
}

impl<'a> From<&'a InequalityReport> for CsvRow<'a> {
    fn from(r: &'a InequalityReport) -> Self {
        Self {
            ineq_id: r.ineq_id,
            trial: r.trial,
            seed: r.seed,
            kind: r.kind,
            lhs: r.lhs,
            rhs: r.rhs,
            gap: r.gap,
            scale: r.scale,
            holds: r.holds,
            equality_detected: r.equality_detected,
            equality_expected: r.equality_expected,
            deviation: r.deviation,
            lhs_log: r.lhs_log,
            rhs_log: r.rhs_log,
            context: &r.context,
        }
    }
}

pub enum Sink {
    Json(BufWriter<Box<dyn Write>>),
    Csv(Box<csv::Writer<Box<dyn Write>>>),
}

impl Sink {
    pub fn open(common: &Common) -> io::Result<Self> {
        let w: Box<dyn Write> = match &common.out {
            Some(path) => Box::new(File::create(path)?),
            None => Box::new(io::stdout().lock()),
        };
        Ok(match common.format {
            Format::JsonLines => Sink::Json(BufWriter::new(w)),
            Format::Csv => Sink::Csv(Box::new(csv::Writer::from_writer(w))),
        })
    }

    pub fn write(&mut self, r: &InequalityReport) -> io::Result<()> {
        match self {
            Sink::Json(w) => {
                serde_json::to_writer(&mut *w, r)?;
                w.write_all(b"\n")
            }
            Sink::Csv(w) => w.serialize(CsvRow::from(r)).map_err(io::Error::other),
        }
    }

    pub fn finish(self) -> io::Result<()> {
        match self {
            Sink::Json(mut w) => w.flush(),
            Sink::Csv(mut w) => w.flush(),
        }
    }
}

/// Writes each witness matrix to `<dir>/<id>-s<seed>-t<trial>-<name>.txt`.
pub fn dump_witnesses<'a, I>(dir: Option<&Path>, reports: I) -> io::Result<()>
where
    I: Iterator<Item = &'a InequalityReport>,
{
    let Some(dir) = dir else { return Ok(()) };
    fs::create_dir_all(dir)?;
    for r in reports {
        for (name, m) in &r.witness {
            let file = dir.join(format!("{}-s{:016x}-t{}-{name}.txt", r.ineq_id, r.seed, r.trial));
            fs::write(file, write_matrix(m))?;
        }
    }
    Ok(())
}

pub fn print_summary(reports: &[InequalityReport], errors: &[TrialFailure]) {
    let holds = reports.iter().filter(|r| r.holds).count();
    let min_gap = reports.iter().map(|r| r.gap / r.scale).fold(f64::INFINITY, f64::min);
    let detected = reports.iter().filter(|r| r.equality_detected).count();
    let expected = reports.iter().filter(|r| r.equality_expected == Some(true)).count();
    let mismatched = reports.iter().filter(|r| r.equality_mismatch()).count();
    let skipped = errors.iter().filter(|e| e.ill_conditioned).count();
    eprintln!(
        "reports {} holds {holds} min relative gap {min_gap:.3e} equality detected {detected} expected {expected} mismatched {mismatched} skipped {skipped} errors {}",
        reports.len(),
        errors.len() - skipped
    );
    for e in errors.iter().filter(|e| !e.ill_conditioned).take(5) {
        eprintln!("  trial {} ({}): {}", e.trial, e.context, e.error);
    }
}

pub fn print_suite_summary(run: &SuiteRun) {
    eprintln!(
        "{:<26}{:>8}{:>8}{:>6}{:>13}{:>7}{:>7}{:>7}{:>7}{:>7}{:>6}",
        "ineq_id", "reports", "holds", "viol", "min_gap", "eq_tp", "eq_fp", "eq_fn", "eq_tn", "eq_na", "skip"
    );
    for s in run.summary() {
        eprintln!(
            "{:<26}{:>8}{:>8}{:>6}{:>13.3e}{:>7}{:>7}{:>7}{:>7}{:>7}{:>6}",
            s.ineq_id.as_str(),
            s.reports,
            s.holds,
            s.violations,
            s.min_gap,
            s.equality.true_positive,
            s.equality.false_positive,
            s.equality.false_negative,
            s.equality.true_negative,
            s.equality.undecided,
            s.skipped,
        );
    }
    for f in run.failures.iter().filter(|f| !f.ill_conditioned).take(5) {
        eprintln!("  {} trial {} ({}): {}", f.ineq_id, f.trial, f.context, f.error);
    }
}
