//! Browser bindings for the demo page in `www/`: thin JSON-string wrappers
//! around classification, planning, and a small in-browser training run.
//!
//! Every function returns a JSON string with one of three top-level shapes:
//! a result object, `{"rejected": reason}` when the design is refused on
//! scientific grounds, or `{"error": message}` for bad input.

use serde_json::json;
use wasm_bindgen::prelude::*;

use memscope::agents::{AgentConfig, MechanismKind, WindowConfig};
use memscope::envs::{EnvConfig, RewardMode, TMazeConfig};
use memscope::harness::{
    render_curve_svg, run_stamped, validate_config, ExperimentConfig, Verdict,
};
use memscope::memory::{
    classify_context, context_intervals, parse_horizon_list, plan_experiment, MemoryTarget,
};
use memscope::Error as CoreError;

fn error_json(e: impl std::fmt::Display) -> String {
    json!({ "error": e.to_string() }).to_string()
}

fn rejected_json(reason: impl std::fmt::Display) -> String {
    json!({ "rejected": reason.to_string() }).to_string()
}

/// Classify context length `k` against a horizon list ("15", "7,8,9",
/// "7..22").
#[wasm_bindgen]
pub fn classify_profile(k: u32, xi_list: &str) -> String {
    let profile = match parse_horizon_list(xi_list) {
        Ok(p) => p,
        Err(e) => return error_json(e),
    };
    let intervals = match context_intervals(&profile) {
        Ok(i) => i,
        Err(e @ CoreError::NotMemoryIntensive { .. }) => return rejected_json(e),
        Err(e) => return error_json(e),
    };
    let class = match classify_context(k, &profile) {
        Ok(c) => c,
        Err(e) => return error_json(e),
    };
    json!({
        "k": k,
        "profile": profile.display_compact(),
        "k_bar": intervals.border,
        "class": class,
        "describe": class.describe(),
        "intervals": {
            "ltm_only": [1, intervals.border],
            "mixed": intervals.mixed,
            "stm_only_min": intervals.stm_min,
        },
    })
    .to_string()
}

/// Recommend a context interval for `target` ("ltm" or "stm") on the given
/// horizon list, with or without a memory mechanism available.
#[wasm_bindgen]
pub fn plan_profile(xi_list: &str, target: &str, mechanism: bool) -> String {
    let profile = match parse_horizon_list(xi_list) {
        Ok(p) => p,
        Err(e) => return error_json(e),
    };
    let target = match target {
        "ltm" => MemoryTarget::Ltm,
        "stm" => MemoryTarget::Stm,
        other => return error_json(format!("unknown target {other:?}")),
    };
    match plan_experiment(&profile, target, mechanism) {
        Ok(plan) => json!({
            "profile": profile.display_compact(),
            "plan": plan,
            "describe": plan.describe(),
        })
        .to_string(),
        Err(e @ (CoreError::NotMemoryIntensive { .. } | CoreError::MechanismRequired)) => {
            rejected_json(e)
        }
        Err(e) => error_json(e),
    }
}

/// Train a small windowed agent on the T-Maze right in the browser and
/// report the learning curve. Any context length and mechanism combination
/// is allowed to run so the page can show failures as well as successes.
#[wasm_bindgen]
pub fn train_demo(corridor_length: u32, context_length: u32, latch: bool, episodes: u32) -> String {
    if !(2..=20).contains(&corridor_length) {
        return error_json("corridor length must be in 2..=20");
    }
    if !(1..=40).contains(&context_length) {
        return error_json("context length must be in 1..=40");
    }
    if !(100..=20_000).contains(&episodes) {
        return error_json("episodes must be in 100..=20000");
    }

    let config = ExperimentConfig {
        id: "browser-demo".to_string(),
        env: EnvConfig::Tmaze(TMazeConfig {
            corridor_length,
            reward_mode: RewardMode::Sparse,
            noise_enabled: false,
        }),
        agent: AgentConfig::Window(WindowConfig {
            context_length,
            mechanism: if latch {
                MechanismKind::Latch
            } else {
                MechanismKind::None
            },
            learning_rate: 0.05,
            discount: 1.0,
        }),
        claim: MemoryTarget::Stm,
        episodes,
        runs: 2,
        eval_seeds: 50,
        eval_points: 10,
        epsilon_start: 0.3,
        epsilon_end: 0.0,
        epsilon_fraction: 0.5,
        allow_mixed: true,
        workers: 1,
    };

    let stamped = match validate_config(&config) {
        Ok(Verdict::Accepted(stamped)) => *stamped,
        Ok(Verdict::Rejected(rejection)) => return rejected_json(rejection.reason),
        Err(e) => return error_json(e),
    };
    let result = match run_stamped(&stamped) {
        Ok(r) => r,
        Err(e) => return error_json(e),
    };

    json!({
        "class": result.stamp.class,
        "k": result.stamp.k,
        "k_eff": result.stamp.k_eff,
        "k_bar": result.stamp.k_bar,
        "xi_max": result.stamp.xi_max,
        "warnings": result.stamp.warnings,
        "curve": result.curve,
        "final_success": result.final_success,
        "final_return": result.final_return,
        "svg": render_curve_svg("browser-demo", &result.curve),
    })
    .to_string()
}
