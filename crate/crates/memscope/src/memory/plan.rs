use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::memory::{context_intervals, HorizonProfile};

/// Which kind of memory an experiment is meant to isolate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemoryTarget {
    Ltm,
    Stm,
}

impl fmt::Display for MemoryTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MemoryTarget::Ltm => "long-term memory",
            MemoryTarget::Stm => "short-term memory",
        })
    }
}

/// Concrete context-length recommendation for a target on a given task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub target: MemoryTarget,
    /// Recommended context range `[k_min, k_max]`; `k_max = None` means
    /// unbounded above.
    pub k_min: u32,
    pub k_max: Option<u32>,
    /// For a long-term target: the minimum effective context the mechanism
    /// must provide so that every horizon is reachable through it.
    pub required_k_eff: Option<u32>,
    /// Context lengths (exclusive bounds) that would mix both kinds of
    /// memory. Only reported for short-term targets, where "anything above
    /// the border" is a tempting but wrong simplification.
    pub mixed_gap: Option<(u32, u32)>,
    pub border: u32,
    pub max_horizon: u32,
}

impl ExperimentPlan {
    /// Multi-line human-readable rendering used by front-ends.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("target: {}\n", self.target));
        match self.target {
            MemoryTarget::Ltm => {
                out.push_str(&format!(
                    "context: K in [{}, {}] (prefer the low end; a small window makes the mechanism's contribution unmistakable)\n",
                    self.k_min,
                    self.k_max.unwrap(),
                ));
                out.push_str(&format!(
                    "mechanism: required, with effective context K_eff >= {}\n",
                    self.required_k_eff.unwrap(),
                ));
            }
            MemoryTarget::Stm => {
                out.push_str(&format!("context: K >= {}\n", self.k_min));
                if let Some((lo, hi)) = self.mixed_gap {
                    out.push_str(&format!(
                        "warning: K in ({lo}, {hi}) would mix long- and short-term memory; stay at K >= {hi} for a pure short-term test\n",
                    ));
                }
            }
        }
        out
    }
}

/// Derive the context-length recommendation for `target` on a task with the
/// given profile.
///
/// Long-term targets place the window at or below the border and demand a
/// mechanism whose reach covers the longest horizon; without a mechanism the
/// target is untestable and an error is returned. Short-term targets place
/// the window at or above the longest horizon; when the profile spans several
/// horizons the plan flags the in-between band that would mix both kinds.
pub fn plan_experiment(
    profile: &HorizonProfile,
    target: MemoryTarget,
    mechanism_available: bool,
) -> Result<ExperimentPlan> {
    let iv = context_intervals(profile)?;
    match target {
        MemoryTarget::Ltm => {
            if !mechanism_available {
                return Err(Error::MechanismRequired);
            }
            Ok(ExperimentPlan {
                target,
                k_min: 1,
                k_max: Some(iv.border),
                required_k_eff: Some(iv.stm_min),
                mixed_gap: None,
                border: iv.border,
                max_horizon: iv.stm_min,
            })
        }
        MemoryTarget::Stm => Ok(ExperimentPlan {
            target,
            k_min: iv.stm_min,
            k_max: None,
            required_k_eff: None,
            mixed_gap: iv.mixed,
            border: iv.border,
            max_horizon: iv.stm_min,
        }),
    }
}
