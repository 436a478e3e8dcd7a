//! Numerical checks of determinant and operator inequalities for
//! conditional expectations onto block-diagonal subalgebras of `M_n(ℂ)`,
//! built around the Fuglede–Kadison determinant.
//!
//! ```
//! use fkineq::{verifiers, HermitianMatrix, ToleranceConfig};
//!
//! let a = HermitianMatrix::from_real_rows(2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
//! let r = verifiers::hadamard(&a, &ToleranceConfig::default()).unwrap();
//! assert!(r.holds && !r.equality_detected);
//! ```

pub mod error;
pub mod fkdet;
pub mod functions;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod subalgebra;
pub mod suite;
pub mod textio;
pub mod verifiers;

pub use error::{Error, Result};
pub use fkdet::{fk_det, fk_det_hermitian, fk_det_ratio, log_fk_det, log_fk_det_ratio, FkValue};
pub use functions::{Func, NamedFunction};
pub use linalg::{ComplexMatrix, HermitianMatrix, Interval, ToleranceConfig, C64};
pub use report::{IneqId, InequalityReport, ReportKind};
pub use sampling::{falsify, FalsifyOutcome, SamplerConfig};
pub use subalgebra::{BlockPartition, PositiveMapSpec, UnitaryMixture};
pub use suite::{run_suite, run_trials, MapChoice, SampleMode, SuiteGrid, SuiteRun, TrialSetup};
