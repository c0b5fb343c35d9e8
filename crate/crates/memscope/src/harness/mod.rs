//! Experiment orchestration: validate, run, summarize, export.
//!
//! The harness enforces one rule end to end: no experiment runs without a
//! verdict on what it actually tests. [`validate_config`] classifies the
//! configured context against the configured task and either stamps the
//! experiment or rejects it with a corrective plan; [`run_stamped`] executes
//! a stamped config deterministically; [`export_result`] writes the stamped
//! records; [`regenerate_report`] recomputes summaries from records alone.
//! [`run_experiment`] chains the whole pipeline.

mod config;
mod export;
mod metrics;
mod plot;
mod runner;

pub use config::{validate_config, ExperimentConfig, Rejection, Stamp, StampedConfig, Verdict};
pub use export::{
    export_result, load_rows, regenerate_report, results_root, ReportSummary, ResultRow,
    RECORDS_HEADER, SUMMARY_HEADER,
};
pub use metrics::{learning_curve, mean_sem, CurvePoint, SummaryStat};
pub use plot::render_curve_svg;
pub use runner::{epsilon_at, eval_checkpoints, run_stamped, EvalRecord, ExperimentResult};

use std::path::{Path, PathBuf};

use crate::error::Result;

/// End result of [`run_experiment`].
#[derive(Debug)]
pub enum Outcome {
    /// The experiment ran; results were written to `dir`.
    Completed {
        result: Box<ExperimentResult>,
        dir: PathBuf,
    },
    /// Validation refused the experiment; nothing ran and nothing was
    /// written.
    Rejected(Rejection),
}

/// Validate, run, and export in one call. Scientific rejections come back as
/// [`Outcome::Rejected`]; malformed configs and IO problems are errors.
pub fn run_experiment(config: &ExperimentConfig, results_root: &Path) -> Result<Outcome> {
    match validate_config(config)? {
        Verdict::Rejected(rejection) => Ok(Outcome::Rejected(rejection)),
        Verdict::Accepted(stamped) => {
            let result = run_stamped(&stamped)?;
            let dir = export_result(&result, results_root)?;
            Ok(Outcome::Completed {
                result: Box::new(result),
                dir,
            })
        }
    }
}
