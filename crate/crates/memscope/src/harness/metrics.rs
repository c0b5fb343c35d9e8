//! Summary statistics over evaluation records.
//!
//! All aggregation follows the same two-level scheme: evaluation seeds are
//! averaged within a run first, then runs are treated as the independent
//! samples. The standard error is the sample standard deviation over runs
//! (n - 1 normalization) divided by sqrt(runs); a single run reports an error
//! of zero, and [`ExperimentResult::single_run`] flags that the error bar is
//! meaningless in that case.
//!
//! [`ExperimentResult::single_run`]: crate::harness::ExperimentResult::single_run

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::harness::EvalRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStat {
    pub mean: f64,
    pub sem: f64,
}

/// Mean and standard error of the mean of a sample. Panics on an empty
/// sample; a single value has error zero.
pub fn mean_sem(values: &[f64]) -> SummaryStat {
    assert!(!values.is_empty(), "mean of an empty sample");
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return SummaryStat { mean, sem: 0.0 };
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    SummaryStat {
        mean,
        sem: (var / n).sqrt(),
    }
}

/// One point of the learning curve: statistics at a training checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub eval_episode: u32,
    pub success: SummaryStat,
    pub ret: SummaryStat,
}

/// Aggregate raw evaluation records into a learning curve, one point per
/// checkpoint, ordered by training episode.
pub fn learning_curve(records: &[EvalRecord]) -> Vec<CurvePoint> {
    // checkpoint -> run -> (success values, return values)
    type PerRun = BTreeMap<u32, (Vec<f64>, Vec<f64>)>;
    let mut grouped: BTreeMap<u32, PerRun> = BTreeMap::new();
    for r in records {
        let per_run = grouped
            .entry(r.eval_episode)
            .or_default()
            .entry(r.run)
            .or_default();
        per_run.0.push(f64::from(u8::from(r.success)));
        per_run.1.push(r.ret);
    }
    grouped
        .into_iter()
        .map(|(eval_episode, runs)| {
            let mut success_by_run = Vec::with_capacity(runs.len());
            let mut ret_by_run = Vec::with_capacity(runs.len());
            for (_, (successes, rets)) in runs {
                success_by_run.push(mean_sem(&successes).mean);
                ret_by_run.push(mean_sem(&rets).mean);
            }
            CurvePoint {
                eval_episode,
                success: mean_sem(&success_by_run),
                ret: mean_sem(&ret_by_run),
            }
        })
        .collect()
}
