//! Evaluation of the monitored inequalities along runs, the uniqueness and
//! approximation experiments, and their machine-readable reports.

mod approximation;
mod checks;
mod composition;
mod fit;
mod osgood;
mod record;
mod summary;
mod uniqueness;

pub use approximation::{approximation_experiment, ApproximationRow, ApproximationTable, SLOPE_TOLERANCE};
pub use checks::{
    log_upsilon, run_check_by_name, run_checks_streaming, run_inequality_check, CheckContext, CheckId, Monitor,
    Trapezoid, DEFAULT_CHEMIN_BAND, MAX_STRIDE,
};
pub use composition::{default_sample_pairs, flow_composition_check};
pub use fit::{band_decay_rate, linear_fit, mode_decay_rate};
pub use osgood::{osgood_integrate, ramp_closed_form, OsgoodProblem, OsgoodSolution, OSGOOD_TOLERANCE};
pub use record::{
    csv_rows, ratio, read_records_csv, write_records_csv, CsvRow, EstimateRecord, Exponents, RecordMeta,
    RecordPoint, Relation, CSV_COLUMNS,
};
pub use summary::{assess, CheckSummary, RunSummary, ThresholdSource, CALIBRATION_SLACK};
pub use uniqueness::{uniqueness_experiment, PerturbationSpec, PerturbedField, TwinRunResult, SPECTRAL_FLOOR};
