//! The seeded training and evaluation loop.
//!
//! Seeding scheme: run `r` gets agent seed `r` and trains on environment
//! seeds `(r << 32) | episode`, so no two runs ever share a training episode
//! layout. Evaluation always replays environment seeds `0..eval_seeds`
//! greedily, with learning off; since a greedy choice consumes no randomness,
//! interleaved evaluations leave the training trajectory untouched, and the
//! whole experiment is a pure function of its config.

use rayon::prelude::*;

use crate::agents::{build_agent, Agent};
use crate::envs::{build_env, Environment};
use crate::error::{Error, Result};
use crate::harness::metrics::{learning_curve, CurvePoint, SummaryStat};
use crate::harness::{ExperimentConfig, Stamp, StampedConfig};

/// One greedy evaluation episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRecord {
    pub run: u32,
    /// Training episodes completed when this evaluation ran.
    pub eval_episode: u32,
    pub seed: u64,
    pub success: bool,
    pub ret: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub stamp: Stamp,
    /// All evaluation records, sorted by (run, eval_episode, seed).
    pub records: Vec<EvalRecord>,
    pub curve: Vec<CurvePoint>,
    pub final_success: SummaryStat,
    pub final_return: SummaryStat,
    /// With one run the standard errors above are necessarily zero; this
    /// flag lets front-ends say so instead of printing a misleading 0.
    pub single_run: bool,
}

/// The checkpoints (in completed training episodes) at which evaluation
/// runs: episode 0 plus `eval_points` evenly spaced points through training.
pub fn eval_checkpoints(episodes: u32, eval_points: u32) -> Vec<u32> {
    let mut points = vec![0];
    for i in 1..=u64::from(eval_points) {
        let at = (u64::from(episodes) * i / u64::from(eval_points)) as u32;
        if Some(&at) != points.last() {
            points.push(at);
        }
    }
    points
}

/// Epsilon for training episode `e` (0-based): linear from `epsilon_start`
/// to `epsilon_end` over the first `epsilon_fraction` of training, constant
/// afterwards.
pub fn epsilon_at(config: &ExperimentConfig, episode: u32) -> f64 {
    let cutoff = (f64::from(config.episodes) * config.epsilon_fraction).max(1.0);
    let frac = (f64::from(episode) / cutoff).min(1.0);
    config.epsilon_start + (config.epsilon_end - config.epsilon_start) * frac
}

/// Play one episode to termination; returns (return, success).
fn play_episode(
    env: &mut dyn Environment,
    agent: &mut dyn Agent,
    seed: u64,
    epsilon: f64,
    learn: bool,
) -> Result<(f64, bool)> {
    let first = env.reset(seed);
    agent.begin_episode(&first);
    let mut total = 0.0;
    for _ in 0..=env.episode_bound() {
        let action = agent.act(epsilon);
        let step = env.step(action)?;
        agent.observe_transition(action, &step, learn);
        total += step.reward;
        if step.done {
            return Ok((total, step.success));
        }
    }
    Err(Error::InvalidConfig(format!(
        "environment '{}' failed to terminate within its episode bound",
        env.name()
    )))
}

fn evaluate(
    env: &mut dyn Environment,
    agent: &mut dyn Agent,
    run: u32,
    eval_episode: u32,
    eval_seeds: u32,
) -> Result<Vec<EvalRecord>> {
    let mut records = Vec::with_capacity(eval_seeds as usize);
    for seed in 0..u64::from(eval_seeds) {
        let (ret, success) = play_episode(env, agent, seed, 0.0, false)?;
        records.push(EvalRecord {
            run,
            eval_episode,
            seed,
            success,
            ret,
        });
    }
    Ok(records)
}

fn run_single(config: &ExperimentConfig, run: u32) -> Result<Vec<EvalRecord>> {
    let mut env = build_env(&config.env)?;
    let mut agent = build_agent(&config.agent, env.as_ref(), u64::from(run))?;
    let checkpoints = eval_checkpoints(config.episodes, config.eval_points);

    let mut records = evaluate(env.as_mut(), agent.as_mut(), run, 0, config.eval_seeds)?;
    for episode in 0..config.episodes {
        let seed = (u64::from(run) << 32) | u64::from(episode);
        let epsilon = epsilon_at(config, episode);
        play_episode(env.as_mut(), agent.as_mut(), seed, epsilon, true)?;
        let completed = episode + 1;
        if checkpoints.binary_search(&completed).is_ok() {
            records.extend(evaluate(
                env.as_mut(),
                agent.as_mut(),
                run,
                completed,
                config.eval_seeds,
            )?);
        }
    }
    Ok(records)
}

/// Run a validated experiment: `runs` independent training runs, each
/// evaluated at every checkpoint. The output is identical for any worker
/// count.
pub fn run_stamped(stamped: &StampedConfig) -> Result<ExperimentResult> {
    let config = &stamped.config;
    let run_ids: Vec<u32> = (0..config.runs).collect();
    let outputs: Result<Vec<Vec<EvalRecord>>> = if config.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
        pool.install(|| run_ids.par_iter().map(|&r| run_single(config, r)).collect())
    } else {
        run_ids.iter().map(|&r| run_single(config, r)).collect()
    };

    let mut records: Vec<EvalRecord> = outputs?.into_iter().flatten().collect();
    records.sort_by_key(|a| (a.run, a.eval_episode, a.seed));

    let curve = learning_curve(&records);
    let last = curve.last().expect("at least the episode-0 checkpoint");
    Ok(ExperimentResult {
        config: config.clone(),
        stamp: stamped.stamp.clone(),
        records,
        final_success: last.success,
        final_return: last.ret,
        curve,
        single_run: config.runs == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{validate_config, Verdict};
    use crate::memory::MemoryTarget;

    fn stamped(mut config: ExperimentConfig) -> StampedConfig {
        config.episodes = 60;
        config.runs = 2;
        config.eval_seeds = 4;
        config.eval_points = 3;
        match validate_config(&config).unwrap() {
            Verdict::Accepted(s) => *s,
            Verdict::Rejected(r) => panic!("rejected: {}", r.reason),
        }
    }

    fn small_config() -> StampedConfig {
        stamped(crate::harness::config::test_config(
            "tmaze:L=2",
            "window:K=3",
            MemoryTarget::Stm,
        ))
    }

    #[test]
    fn checkpoint_layout() {
        assert_eq!(eval_checkpoints(100, 4), vec![0, 25, 50, 75, 100]);
        assert_eq!(eval_checkpoints(60, 3), vec![0, 20, 40, 60]);
        // More points than episodes: deduplicated, still ends at episodes.
        assert_eq!(eval_checkpoints(2, 4), vec![0, 1, 2]);
    }

    #[test]
    fn epsilon_schedule() {
        let mut cfg =
            crate::harness::config::test_config("tmaze:L=2", "window:K=3", MemoryTarget::Stm);
        cfg.episodes = 100;
        assert_eq!(epsilon_at(&cfg, 0), 1.0);
        assert!((epsilon_at(&cfg, 25) - 0.525).abs() < 1e-12);
        assert!((epsilon_at(&cfg, 50) - 0.05).abs() < 1e-12);
        assert!((epsilon_at(&cfg, 99) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn record_layout_and_determinism() {
        let s = small_config();
        let a = run_stamped(&s).unwrap();
        // 2 runs x 4 checkpoints (0, 20, 40, 60) x 4 seeds.
        assert_eq!(a.records.len(), 2 * 4 * 4);
        let sorted = {
            let mut r = a.records.clone();
            r.sort_by_key(|x| (x.run, x.eval_episode, x.seed));
            r
        };
        assert_eq!(a.records, sorted);

        let b = run_stamped(&s).unwrap();
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let s = small_config();
        let serial = run_stamped(&s).unwrap();
        let mut parallel_cfg = s.clone();
        parallel_cfg.config.workers = 4;
        let parallel = run_stamped(&parallel_cfg).unwrap();
        assert_eq!(serial.records, parallel.records);
    }

    #[test]
    fn short_corridor_is_learned_to_ceiling() {
        // K=3 covers the whole {3}-horizon task; a few hundred episodes take
        // the greedy policy to a perfect success rate.
        let mut cfg =
            crate::harness::config::test_config("tmaze:L=2", "window:K=3", MemoryTarget::Stm);
        cfg.episodes = 600;
        cfg.runs = 2;
        cfg.eval_seeds = 10;
        cfg.eval_points = 2;
        let s = match validate_config(&cfg).unwrap() {
            Verdict::Accepted(s) => *s,
            Verdict::Rejected(r) => panic!("rejected: {}", r.reason),
        };
        let result = run_stamped(&s).unwrap();
        assert_eq!(result.final_success.mean, 1.0);
        assert_eq!(result.final_success.sem, 0.0);
        // Episode 0 (untrained, greedy walks right and times out): failure.
        assert_eq!(result.curve[0].success.mean, 0.0);
    }

    #[test]
    fn single_run_is_flagged() {
        let mut s = small_config();
        s.config.runs = 1;
        let r = run_stamped(&s).unwrap();
        assert!(r.single_run);
        assert_eq!(r.final_success.sem, 0.0);
    }
}
