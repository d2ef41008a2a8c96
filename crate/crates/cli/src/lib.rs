//! Verification driver behind the `perfdel` command.

pub mod checks;
pub mod report;
pub mod series;

pub use checks::{run_record, Check, CheckResult, Settings, Status};
pub use report::{verify, Report};
pub use series::{run_series, SeriesOutcome};
