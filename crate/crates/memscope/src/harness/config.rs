//! Experiment configuration and the validation gate.
//!
//! Every experiment names the kind of memory it claims to test. Validation
//! classifies what the configured context actually tests on the configured
//! task and only lets matching experiments through; a mismatch is rejected
//! together with a corrective plan. The `allow_mixed` switch downgrades the
//! rejection to a warning for deliberate demonstration runs; the results
//! still carry the true class, never the claimed one.

use serde::{Deserialize, Serialize};

use crate::agents::{build_agent, AgentConfig, MechanismKind};
use crate::envs::{build_env, EnvConfig};
use crate::error::{Error, Result};
use crate::memory::{
    classify_context, plan_experiment, validate_mechanism_experiment, ExperimentPlan, MemoryTarget,
    MemoryTaskClass,
};
use crate::Fnv128;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Used in file names and the `config_id` column; restricted to
    /// `[A-Za-z0-9_-]`.
    pub id: String,
    pub env: EnvConfig,
    pub agent: AgentConfig,
    /// The kind of memory this experiment claims to test.
    pub claim: MemoryTarget,
    /// Training episodes per run.
    pub episodes: u32,
    #[serde(default = "default_runs")]
    pub runs: u32,
    /// Greedy evaluation replays seeds `0..eval_seeds` at every checkpoint.
    #[serde(default = "default_eval_seeds")]
    pub eval_seeds: u32,
    /// Checkpoint `i` of `eval_points` sits after `episodes * i / eval_points`
    /// training episodes; episode 0 is always evaluated as well.
    #[serde(default = "default_eval_points")]
    pub eval_points: u32,
    #[serde(default = "default_epsilon_start")]
    pub epsilon_start: f64,
    #[serde(default = "default_epsilon_end")]
    pub epsilon_end: f64,
    /// Fraction of training over which epsilon decays linearly from start to
    /// end; it stays at `epsilon_end` afterwards.
    #[serde(default = "default_epsilon_fraction")]
    pub epsilon_fraction: f64,
    /// Accept a claim/class mismatch and run anyway. The results are stamped
    /// with the true class and the validation warning; meant for
    /// demonstration runs that show what a mis-designed experiment measures.
    #[serde(default)]
    pub allow_mixed: bool,
    /// Worker threads for the run loop; 1 stays on the calling thread.
    #[serde(default = "default_workers")]
    pub workers: usize,
}

fn default_runs() -> u32 {
    3
}

fn default_eval_seeds() -> u32 {
    100
}

fn default_eval_points() -> u32 {
    20
}

fn default_epsilon_start() -> f64 {
    1.0
}

fn default_epsilon_end() -> f64 {
    0.05
}

fn default_epsilon_fraction() -> f64 {
    0.5
}

fn default_workers() -> usize {
    1
}

impl ExperimentConfig {
    /// Structural checks only; the scientific check is [`validate_config`].
    pub fn check_fields(&self) -> Result<()> {
        if self.id.is_empty()
            || !self
                .id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(Error::InvalidConfig(format!(
                "id '{}' must be non-empty and use only [A-Za-z0-9_-]",
                self.id
            )));
        }
        self.env.validate()?;
        self.agent.validate()?;
        for (name, v) in [
            ("episodes", self.episodes),
            ("runs", self.runs),
            ("eval_seeds", self.eval_seeds),
            ("eval_points", self.eval_points),
        ] {
            if v == 0 {
                return Err(Error::InvalidConfig(format!("{name} must be at least 1")));
            }
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        for (name, v) in [
            ("epsilon_start", self.epsilon_start),
            ("epsilon_end", self.epsilon_end),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be in [0, 1], got {v}"
                )));
            }
        }
        if !(self.epsilon_fraction > 0.0 && self.epsilon_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon_fraction must be in (0, 1], got {}",
                self.epsilon_fraction
            )));
        }
        Ok(())
    }

    /// Stable hex fingerprint of the full configuration, recorded in the
    /// result manifest so result sets can be traced back to exact configs.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let mut h = Fnv128::new();
        h.write(json.as_bytes());
        format!("{:032x}", h.finish())
    }
}

/// The classification facts validation stamps onto an accepted experiment.
/// Everything here is recomputed from the config, never taken on trust, and
/// is copied into every result row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stamp {
    pub claim: MemoryTarget,
    /// The true class of the configured context length on this task.
    pub class: MemoryTaskClass,
    pub k: u32,
    pub k_eff: u32,
    pub xi_min: u32,
    pub xi_max: u32,
    pub k_bar: u32,
    /// Whether the claim survived validation; false only on `allow_mixed`
    /// demonstration runs.
    pub claim_matches: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StampedConfig {
    pub config: ExperimentConfig,
    pub stamp: Stamp,
}

/// A refused experiment: what was wrong, and what a corrected design for the
/// same claim looks like.
#[derive(Debug, Clone, PartialEq)]
pub struct Rejection {
    pub reason: String,
    pub plan: Option<ExperimentPlan>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Accepted(Box<StampedConfig>),
    Rejected(Rejection),
}

/// Classify the configured context against the configured task and decide
/// whether the experiment may run.
///
/// Malformed configs (bad ranges, a latch on an environment without a clue
/// signal) are errors; well-formed configs whose claim does not hold are
/// [`Verdict::Rejected`] with a corrective plan, or accepted with warnings
/// under `allow_mixed`.
pub fn validate_config(config: &ExperimentConfig) -> Result<Verdict> {
    config.check_fields()?;
    let env = build_env(&config.env)?;
    let profile = env.horizon_profile();

    if !profile.is_memory_intensive() {
        return Ok(Verdict::Rejected(Rejection {
            reason: format!(
                "task '{}' is not memory intensive (shortest horizon {}): every event is \
                 visible at its recall point, so no memory claim can be tested on it",
                config.env.name(),
                profile.min_horizon()
            ),
            plan: None,
        }));
    }

    // Building the agent also surfaces mechanism problems (a latch without a
    // clue signal) before any training starts.
    let agent = build_agent(&config.agent, env.as_ref(), 0)?;
    let spec = agent.context_spec();
    let class = classify_context(spec.k(), &profile)?;
    // Presence of a mechanism is a property of the agent config, not of the
    // inequality k_eff > k: a latch whose reach the window already covers is
    // still installed, just useless.
    let mechanism_installed = matches!(
        &config.agent,
        AgentConfig::Window(c) if c.mechanism != MechanismKind::None
    );

    let mut warnings = Vec::new();
    let mismatch: Option<String> = match config.claim {
        MemoryTarget::Ltm => {
            if !mechanism_installed {
                Some(format!(
                    "the experiment claims to test long-term memory but the agent has no \
                     mechanism (K_eff = K = {}); the context window cannot reach any event \
                     and no success is possible, let alone attributable",
                    spec.k()
                ))
            } else {
                let check = validate_mechanism_experiment(&spec, &profile)?;
                if check.is_valid() {
                    None
                } else {
                    let detail: Vec<String> =
                        check.violations().iter().map(|v| v.to_string()).collect();
                    Some(detail.join("; "))
                }
            }
        }
        MemoryTarget::Stm => match class {
            MemoryTaskClass::StmOnly => {
                if mechanism_installed {
                    warnings.push(format!(
                        "a memory mechanism is installed (K_eff = {}) although the window \
                         K = {} already covers every horizon; success will not attribute \
                         to the window alone",
                        spec.k_eff(),
                        spec.k()
                    ));
                }
                None
            }
            other => Some(format!(
                "the experiment claims to test short-term memory but K = {} on horizons {} \
                 is classified {}",
                spec.k(),
                profile.display_compact(),
                other.describe()
            )),
        },
    };

    let claim_matches = mismatch.is_none();
    if let Some(reason) = mismatch {
        if !config.allow_mixed {
            let plan = plan_experiment(&profile, config.claim, true)?;
            return Ok(Verdict::Rejected(Rejection {
                reason,
                plan: Some(plan),
            }));
        }
        warnings.push(format!(
            "{reason}; allow_mixed is set, so the run proceeds as a demonstration and its \
             results are stamped with the true class '{class}'"
        ));
    }

    let stamp = Stamp {
        claim: config.claim,
        class,
        k: spec.k(),
        k_eff: spec.k_eff(),
        xi_min: profile.min_horizon(),
        xi_max: profile.max_horizon(),
        k_bar: profile.context_memory_border(),
        claim_matches,
        warnings,
    };
    Ok(Verdict::Accepted(Box::new(StampedConfig {
        config: config.clone(),
        stamp,
    })))
}

/// Test fixture shared by the harness test modules.
#[cfg(test)]
pub(crate) fn test_config(env: &str, agent: &str, claim: MemoryTarget) -> ExperimentConfig {
    ExperimentConfig {
        id: "test".into(),
        env: crate::envs::parse_env_spec(env).unwrap(),
        agent: crate::agents::parse_agent_spec(agent).unwrap(),
        claim,
        episodes: 100,
        runs: default_runs(),
        eval_seeds: default_eval_seeds(),
        eval_points: default_eval_points(),
        epsilon_start: default_epsilon_start(),
        epsilon_end: default_epsilon_end(),
        epsilon_fraction: default_epsilon_fraction(),
        allow_mixed: false,
        workers: 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(env: &str, agent: &str, claim: MemoryTarget) -> ExperimentConfig {
        test_config(env, agent, claim)
    }

    fn accepted(v: Verdict) -> StampedConfig {
        match v {
            Verdict::Accepted(s) => *s,
            Verdict::Rejected(r) => panic!("unexpected rejection: {}", r.reason),
        }
    }

    fn rejected(v: Verdict) -> Rejection {
        match v {
            Verdict::Rejected(r) => r,
            Verdict::Accepted(s) => panic!("unexpectedly accepted: {:?}", s.stamp),
        }
    }

    #[test]
    fn sound_ltm_experiment_is_accepted_and_stamped() {
        let cfg = config("tmaze:L=10", "window:K=4,latch", MemoryTarget::Ltm);
        let s = accepted(validate_config(&cfg).unwrap());
        assert_eq!(s.stamp.class, MemoryTaskClass::LtmOnly);
        assert_eq!(s.stamp.k, 4);
        assert_eq!(s.stamp.k_eff, 11);
        assert_eq!(s.stamp.xi_min, 11);
        assert_eq!(s.stamp.xi_max, 11);
        assert_eq!(s.stamp.k_bar, 10);
        assert!(s.stamp.claim_matches);
        assert!(s.stamp.warnings.is_empty());
    }

    #[test]
    fn sound_stm_experiment_is_accepted() {
        let cfg = config("tmaze:L=10", "window:K=11", MemoryTarget::Stm);
        let s = accepted(validate_config(&cfg).unwrap());
        assert_eq!(s.stamp.class, MemoryTaskClass::StmOnly);
        assert!(s.stamp.claim_matches);
    }

    #[test]
    fn ltm_claim_without_mechanism_is_rejected_with_plan() {
        let cfg = config("tmaze:L=10", "window:K=4", MemoryTarget::Ltm);
        let r = rejected(validate_config(&cfg).unwrap());
        assert!(r.reason.contains("no mechanism"), "{}", r.reason);
        let plan = r.plan.unwrap();
        assert_eq!(plan.k_max, Some(10));
        assert_eq!(plan.required_k_eff, Some(11));
    }

    #[test]
    fn stm_claim_with_short_window_is_rejected_with_plan() {
        let cfg = config("tmaze:L=10", "window:K=4", MemoryTarget::Stm);
        let r = rejected(validate_config(&cfg).unwrap());
        assert!(r.reason.contains("long-term memory only"), "{}", r.reason);
        assert_eq!(r.plan.unwrap().k_min, 11);
    }

    #[test]
    fn mixed_window_on_variable_task_is_rejected() {
        // Horizons {7..10}: border 6, so K=8 mixes both kinds.
        let cfg = config("minigrid:L=9,variable", "window:K=8", MemoryTarget::Stm);
        let r = rejected(validate_config(&cfg).unwrap());
        assert!(r.reason.contains("mixed"), "{}", r.reason);
        assert_eq!(r.plan.unwrap().mixed_gap, Some((6, 10)));
    }

    #[test]
    fn allow_mixed_downgrades_to_demonstration() {
        let mut cfg = config("minigrid:L=9,variable", "window:K=8", MemoryTarget::Stm);
        cfg.allow_mixed = true;
        let s = accepted(validate_config(&cfg).unwrap());
        assert_eq!(s.stamp.class, MemoryTaskClass::Mixed);
        assert!(!s.stamp.claim_matches);
        assert_eq!(s.stamp.warnings.len(), 1);
        assert!(s.stamp.warnings[0].contains("demonstration"));
    }

    #[test]
    fn ltm_claim_with_oversized_window_is_rejected() {
        // K=11 with a latch: the bare window already reaches the clue.
        let cfg = config("tmaze:L=10", "window:K=11,latch", MemoryTarget::Ltm);
        let r = rejected(validate_config(&cfg).unwrap());
        assert!(r.reason.contains("border"), "{}", r.reason);
    }

    #[test]
    fn non_memory_intensive_task_rejects_any_claim() {
        let cfg = config("control:length=5", "window:K=1", MemoryTarget::Stm);
        let r = rejected(validate_config(&cfg).unwrap());
        assert!(r.reason.contains("not memory intensive"), "{}", r.reason);
        assert!(r.plan.is_none());
    }

    #[test]
    fn stm_claim_with_redundant_mechanism_warns() {
        let cfg = config("tmaze:L=10", "window:K=11,latch", MemoryTarget::Stm);
        let s = accepted(validate_config(&cfg).unwrap());
        assert!(s.stamp.claim_matches);
        assert_eq!(s.stamp.warnings.len(), 1);
    }

    #[test]
    fn malformed_configs_are_errors_not_rejections() {
        let mut cfg = config("tmaze:L=10", "window:K=4,latch", MemoryTarget::Ltm);
        cfg.id = "bad id!".into();
        assert!(validate_config(&cfg).is_err());

        let mut cfg = config("tmaze:L=10", "window:K=4,latch", MemoryTarget::Ltm);
        cfg.episodes = 0;
        assert!(validate_config(&cfg).is_err());
    }

    #[test]
    fn non_memory_intensive_rejection_precedes_agent_checks() {
        // A latch on the control corridor is doubly wrong (no clue signal to
        // latch, nothing to test); the rejection reports the more fundamental
        // problem.
        let cfg = config("control:length=5", "window:K=1,latch", MemoryTarget::Stm);
        let r = rejected(validate_config(&cfg).unwrap());
        assert!(r.reason.contains("not memory intensive"), "{}", r.reason);
    }

    #[test]
    fn fingerprint_tracks_config_changes() {
        let a = config("tmaze:L=10", "window:K=4,latch", MemoryTarget::Ltm);
        let mut b = a.clone();
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.episodes += 1;
        assert_ne!(a.fingerprint(), b.fingerprint());
    }

    #[test]
    fn config_json_roundtrip_with_defaults() {
        let json = r#"{
            "id": "demo",
            "env": {"type": "tmaze", "corridor_length": 10},
            "agent": {"type": "window", "context_length": 4, "mechanism": "latch"},
            "claim": "ltm",
            "episodes": 5000
        }"#;
        let cfg: ExperimentConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.runs, 3);
        assert_eq!(cfg.eval_seeds, 100);
        assert_eq!(cfg.eval_points, 20);
        assert_eq!(cfg.workers, 1);
        assert!(!cfg.allow_mixed);
        let back = serde_json::to_string(&cfg).unwrap();
        let again: ExperimentConfig = serde_json::from_str(&back).unwrap();
        assert_eq!(again, cfg);
    }
}
