//! Analytic constants, sweeps over levels and weights, and their reports.

mod constants;
mod pipeline;
mod sweep;
mod verify;

pub use constants::{
    b_of_m, c_rho, dirichlet_l2, humbert_volume, kronecker, predicted_bounds, t2_even, weight_band,
    AnalyticConstants, CLASS_NUMBER_ONE,
};
pub use pipeline::{
    cusp_checks, measure, ExperimentRecord, SubgroupData, BOUNDARY_TORSION_TOLERANCE, CHECK_NAMES,
};
pub use sweep::{
    csv_string, run_sweep, thread_count, weight_sweep, write_csv, write_weight_csv, IdealSource,
    SweepConfig, SweepFailure, SweepKind, SweepReport, WeightEntry, WeightReport, CSV_HEADER,
    THREADS_ENV,
};
pub use verify::{run_suite, Suite, SuiteCheck};
