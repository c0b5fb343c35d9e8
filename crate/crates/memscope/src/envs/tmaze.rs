//! Passive T-Maze.
//!
//! A corridor of `L` cells leads to a junction. The observation at step 0
//! carries a clue (+1 or -1); at the junction the agent must turn up (for +1)
//! or down (for -1) to earn the terminal reward. Moving right advances one
//! cell; every other action in the corridor is a no-op that still consumes a
//! timestep. The episode budget is `T = L + 1` actions: exactly enough for
//! `L` moves plus the turn, so any wasted step makes success impossible.
//!
//! Observation channels: `[y, clue, flag, noise]`
//!
//! * `y`: vertical position, 0 in the corridor, +1/-1 after turning;
//! * `clue`: +1/-1 at step 0, then 0;
//! * `flag`: 1 exactly at the cell one step before the junction;
//! * `noise`: uniform over {-1, 0, 1} each step when enabled, else 0.
//!
//! One event-recall pair: the clue at step 0, the turn at step `T - 1`, so
//! the horizon profile is `{L + 1}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::envs::{ClueDetector, Environment, Obs, Step};
use crate::error::{Error, Result};
use crate::memory::HorizonProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardMode {
    /// Terminal reward only: 1 for the correct turn, 0 otherwise.
    Sparse,
    /// Sparse plus a step penalty of `-1/(T-1)` on every step, terminal and
    /// timeout steps included; a full corridor traversal accumulates exactly
    /// -1 before the turn.
    Dense,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TMazeConfig {
    pub corridor_length: u32,
    #[serde(default = "default_reward_mode")]
    pub reward_mode: RewardMode,
    #[serde(default)]
    pub noise_enabled: bool,
}

fn default_reward_mode() -> RewardMode {
    RewardMode::Sparse
}

impl Default for TMazeConfig {
    fn default() -> Self {
        Self {
            corridor_length: 10,
            reward_mode: RewardMode::Sparse,
            noise_enabled: false,
        }
    }
}

impl TMazeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.corridor_length < 2 {
            return Err(Error::InvalidConfig(format!(
                "tmaze corridor length must be at least 2, got {}",
                self.corridor_length
            )));
        }
        Ok(())
    }

    /// Episode budget `T = L + 1`.
    pub fn episode_bound(&self) -> u32 {
        self.corridor_length + 1
    }
}

// Action indices. The advancing action sits at index 0 on purpose: the
// tabular agents break Q-value ties toward the lowest index, and with zero
// slack in the episode budget a tie-break that does not advance would leave
// uniform exploration no realistic chance of ever reaching the junction.
const RIGHT: usize = 0;
const UP: usize = 1;
const DOWN: usize = 2;
const ACTION_NAMES: [&str; 4] = ["right", "up", "down", "left"];

struct EpisodeState {
    pos: u32,
    t: u32,
    clue: i16,
    y: i16,
    done: bool,
    rng: ChaCha8Rng,
}

pub struct TMaze {
    config: TMazeConfig,
    state: Option<EpisodeState>,
}

impl TMaze {
    pub fn new(config: TMazeConfig) -> Self {
        Self {
            config,
            state: None,
        }
    }

    fn objective(&self) -> (u32, u32) {
        let l = self.config.corridor_length;
        (l, l + 1) // (junction position, episode budget T)
    }

    fn observe(&mut self) -> Obs {
        let flag_pos = self.config.corridor_length - 1;
        let noise_enabled = self.config.noise_enabled;
        let state = self.state.as_mut().expect("observe requires an episode");
        let clue = if state.t == 0 { state.clue } else { 0 };
        let flag = i16::from(state.pos == flag_pos && state.y == 0);
        let noise = if noise_enabled {
            state.rng.gen_range(-1i16..=1)
        } else {
            0
        };
        Obs::from_slice(&[state.y, clue, flag, noise])
    }
}

impl Environment for TMaze {
    fn name(&self) -> &'static str {
        "tmaze"
    }

    fn reset(&mut self, seed: u64) -> Obs {
        // Even seeds get clue +1, odd seeds -1. Deriving the clue from seed
        // parity instead of an RNG draw keeps any contiguous block of seeds
        // exactly balanced, so success rates over a fixed evaluation seed set
        // have no sampling skew.
        let clue = if seed.is_multiple_of(2) { 1 } else { -1 };
        self.state = Some(EpisodeState {
            pos: 0,
            t: 0,
            clue,
            y: 0,
            done: false,
            rng: ChaCha8Rng::seed_from_u64(seed),
        });
        self.observe()
    }

    fn step(&mut self, action: usize) -> Result<Step> {
        if action >= 4 {
            return Err(Error::InvalidAction {
                action,
                num_actions: 4,
            });
        }
        let (junction, budget) = self.objective();
        let reward_mode = self.config.reward_mode;
        let (reward, done, success) = {
            let state = self.state.as_mut().ok_or(Error::EpisodeNotStarted)?;
            if state.done {
                return Err(Error::EpisodeFinished);
            }

            state.t += 1;
            let mut reward = 0.0;
            let mut success = false;
            match action {
                RIGHT if state.pos < junction => state.pos += 1,
                UP | DOWN if state.pos == junction => {
                    success = (action == UP) == (state.clue > 0);
                    state.y = if action == UP { 1 } else { -1 };
                    reward = f64::from(success);
                    state.done = true;
                }
                // Everything else cannot advance: a no-op that costs the step.
                _ => {}
            }
            if !state.done && state.t >= budget {
                state.done = true;
            }
            if reward_mode == RewardMode::Dense {
                reward -= 1.0 / f64::from(budget - 1);
            }
            (reward, state.done, success)
        };
        let obs = self.observe();
        Ok(Step {
            obs,
            reward,
            done,
            success,
        })
    }

    fn num_actions(&self) -> usize {
        4
    }

    fn action_name(&self, action: usize) -> &'static str {
        ACTION_NAMES.get(action).copied().unwrap_or("?")
    }

    fn horizon_profile(&self) -> HorizonProfile {
        HorizonProfile::single(self.config.episode_bound()).expect("episode bound is at least 3")
    }

    fn episode_bound(&self) -> u32 {
        self.config.episode_bound()
    }

    fn clue_detector(&self) -> Option<ClueDetector> {
        Some(ClueDetector::Channel { index: 1 })
    }

    fn realized_horizon(&self) -> Option<u32> {
        self.state.as_ref().map(|_| self.config.episode_bound())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maze(l: u32) -> TMaze {
        TMaze::new(TMazeConfig {
            corridor_length: l,
            ..TMazeConfig::default()
        })
    }

    /// Walk the corridor and turn; returns (terminal step, obs trace).
    fn run(env: &mut TMaze, seed: u64, actions: &[usize]) -> Vec<Step> {
        env.reset(seed);
        actions.iter().map(|&a| env.step(a).unwrap()).collect()
    }

    #[test]
    fn reset_observation_carries_clue() {
        let mut env = maze(10);
        let obs = env.reset(0);
        assert_eq!(obs.channels(), &[0, 1, 0, 0]);
        let obs = env.reset(1);
        assert_eq!(obs.channels(), &[0, -1, 0, 0]);
    }

    #[test]
    fn oracle_path_earns_reward() {
        let mut env = maze(10);
        // Clue +1: ten rights to reach the junction, then up.
        let mut actions = vec![RIGHT; 10];
        actions.push(UP);
        let steps = run(&mut env, 0, &actions);
        let last = steps.last().unwrap();
        assert!(last.done && last.success);
        assert_eq!(last.reward, 1.0);
        assert_eq!(env.realized_horizon(), Some(11));

        // Clue -1: same corridor, turn down.
        let mut actions = vec![RIGHT; 10];
        actions.push(DOWN);
        let steps = run(&mut env, 1, &actions);
        let last = steps.last().unwrap();
        assert!(last.done && last.success);
        assert_eq!(last.reward, 1.0);
    }

    #[test]
    fn wrong_turn_earns_nothing() {
        let mut env = maze(10);
        let mut actions = vec![RIGHT; 10];
        actions.push(DOWN); // clue is +1 on even seeds
        let last = run(&mut env, 0, &actions).pop().unwrap();
        assert!(last.done && !last.success);
        assert_eq!(last.reward, 0.0);
    }

    #[test]
    fn any_wasted_step_is_fatal() {
        let mut env = maze(10);
        // One no-op (left) first: the budget T = 11 runs out before the turn.
        let mut actions = vec![3];
        actions.extend(vec![RIGHT; 10]);
        let steps = run(&mut env, 0, &actions);
        let last = steps.last().unwrap();
        assert!(last.done && !last.success);
        assert_eq!(last.reward, 0.0);
        assert_eq!(steps.len(), 11); // episode length never exceeds T
        assert!(env.step(RIGHT).is_err());
    }

    #[test]
    fn up_down_before_junction_are_noops() {
        let mut env = maze(10);
        env.reset(0);
        let s = env.step(UP).unwrap();
        assert!(!s.done);
        assert_eq!(s.obs.channels()[0], 0); // still in the corridor
    }

    #[test]
    fn flag_marks_the_cell_before_the_junction() {
        let mut env = maze(10);
        let mut actions = vec![RIGHT; 10];
        actions.push(UP);
        let steps = run(&mut env, 0, &actions);
        let flags: Vec<i16> = steps.iter().map(|s| s.obs.channels()[2]).collect();
        // Visible exactly once on the oracle path, after the ninth move.
        assert_eq!(flags.iter().filter(|&&f| f == 1).count(), 1);
        assert_eq!(flags[8], 1);
    }

    #[test]
    fn dense_mode_penalty() {
        let mut env = TMaze::new(TMazeConfig {
            corridor_length: 10,
            reward_mode: RewardMode::Dense,
            noise_enabled: false,
        });
        let mut actions = vec![RIGHT; 10];
        actions.push(UP);
        let steps = run(&mut env, 0, &actions);
        // Per-step penalty is -1/(T-1) = -0.1; the ten corridor steps sum to
        // exactly -1; the terminal step carries its penalty too.
        let corridor: f64 = steps[..10].iter().map(|s| s.reward).sum();
        assert!((corridor + 1.0).abs() < 1e-12);
        assert!((steps[10].reward - 0.9).abs() < 1e-12);
        let total: f64 = steps.iter().map(|s| s.reward).sum();
        assert!((total - (1.0 - 11.0 * 0.1)).abs() < 1e-12);
    }

    #[test]
    fn noise_channel() {
        let mut quiet = maze(10);
        quiet.reset(7);
        for _ in 0..5 {
            let s = quiet.step(RIGHT).unwrap();
            assert_eq!(s.obs.channels()[3], 0);
        }

        let mut noisy = TMaze::new(TMazeConfig {
            corridor_length: 10,
            reward_mode: RewardMode::Sparse,
            noise_enabled: true,
        });
        let a = run(&mut noisy, 7, &[RIGHT; 5]);
        let b = run(&mut noisy, 7, &[RIGHT; 5]);
        assert_eq!(a, b, "same seed, same actions, same noise");
        for s in &a {
            assert!((-1..=1).contains(&s.obs.channels()[3]));
        }
    }

    #[test]
    fn determinism_across_instances() {
        let mut e1 = maze(6);
        let mut e2 = maze(6);
        let acts = [RIGHT, 3, RIGHT, UP, RIGHT, RIGHT];
        let t1 = run(&mut e1, 42, &acts);
        let t2 = run(&mut e2, 42, &acts);
        assert_eq!(t1, t2);
    }

    #[test]
    fn step_guards() {
        let mut env = maze(4);
        assert!(matches!(env.step(0), Err(Error::EpisodeNotStarted)));
        env.reset(0);
        assert!(matches!(
            env.step(9),
            Err(Error::InvalidAction { action: 9, .. })
        ));
    }

    #[test]
    fn profile_and_detector() {
        let env = maze(10);
        assert_eq!(env.horizon_profile().horizons(), &[11]);
        assert_eq!(env.episode_bound(), 11);
        assert_eq!(
            env.clue_detector(),
            Some(ClueDetector::Channel { index: 1 })
        );
        assert!(env.horizon_profile().is_memory_intensive());
    }
}
