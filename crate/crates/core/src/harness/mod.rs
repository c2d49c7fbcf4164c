//! Experiment harness: EPD suites, parameter sweeps, policy comparison and
//! CSV output in the seven-column experiment-table layout.

mod csv_io;
mod epd;
mod experiment;
mod stats;
mod suites;

use thiserror::Error;

use crate::search::SearchError;

pub use csv_io::{emit_csv, format_float, parse_csv, CSV_HEADER};
pub use epd::{load_epd, parse_epd_line, read_epd, EpdError, EpdErrorKind, EpdRecord};
pub use experiment::{
    compare_policies, evaluate_case, record_horizon, run_case, run_sweep, solve_with_ladder,
    CaseOutcome, ExperimentRow, LadderHit, PolicyFamily, PolicySummary, SweepSpec,
};
pub use stats::{median, spearman};
pub use suites::{bundled_suite, BUNDLED_SUITES};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Epd(#[from] EpdError),
    #[error("record `{0}` has neither `bm` nor `dm`; nothing to check a search against")]
    NoCriterion(String),
    #[error("record `{id}`: {source}")]
    Search { id: String, source: SearchError },
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("need at least two policies to compare, got {0}")]
    TooFewPolicies(usize),
    #[error("unknown bundled suite `{0}`")]
    UnknownSuite(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed csv row {row}: {message}")]
    CsvRow { row: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}
