//! Fully observed corridor, the sanity-check control task.
//!
//! The observation is the agent's exact position, so every decision can be
//! made from the current observation alone: the horizon profile is `{1}` and
//! no memory of any kind is needed. Useful as a negative control next to the
//! memory tasks, and as the "classify refuses" example, since a profile of
//! all ones has no memory requirement to analyze.

use serde::{Deserialize, Serialize};

use crate::envs::{ClueDetector, Environment, Obs, Step};
use crate::error::{Error, Result};
use crate::memory::HorizonProfile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlConfig {
    /// Number of forward moves from start to goal.
    pub length: u32,
}

impl Default for ControlConfig {
    fn default() -> Self {
        Self { length: 5 }
    }
}

impl ControlConfig {
    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::InvalidConfig(
                "control corridor length must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

const FORWARD: usize = 0;
const BACK: usize = 1;
const ACTION_NAMES: [&str; 2] = ["forward", "back"];

struct EpisodeState {
    pos: u32,
    t: u32,
    done: bool,
}

pub struct ControlCorridor {
    config: ControlConfig,
    state: Option<EpisodeState>,
}

impl ControlCorridor {
    pub fn new(config: ControlConfig) -> Self {
        Self {
            config,
            state: None,
        }
    }

    fn observe(&self) -> Obs {
        let state = self.state.as_ref().expect("observe requires an episode");
        Obs::from_slice(&[state.pos as i16])
    }
}

impl Environment for ControlCorridor {
    fn name(&self) -> &'static str {
        "control"
    }

    fn reset(&mut self, _seed: u64) -> Obs {
        self.state = Some(EpisodeState {
            pos: 0,
            t: 0,
            done: false,
        });
        self.observe()
    }

    fn step(&mut self, action: usize) -> Result<Step> {
        if action >= 2 {
            return Err(Error::InvalidAction {
                action,
                num_actions: 2,
            });
        }
        let goal = self.config.length;
        let budget = self.episode_bound();
        let (reward, done, success) = {
            let state = self.state.as_mut().ok_or(Error::EpisodeNotStarted)?;
            if state.done {
                return Err(Error::EpisodeFinished);
            }
            state.t += 1;
            match action {
                FORWARD if state.pos < goal => state.pos += 1,
                BACK if state.pos > 0 => state.pos -= 1,
                _ => {}
            }
            let success = state.pos == goal;
            state.done = success || state.t >= budget;
            (f64::from(success), state.done, success)
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
        2
    }

    fn action_name(&self, action: usize) -> &'static str {
        ACTION_NAMES.get(action).copied().unwrap_or("?")
    }

    fn horizon_profile(&self) -> HorizonProfile {
        HorizonProfile::single(1).expect("1 is a valid horizon")
    }

    fn episode_bound(&self) -> u32 {
        4 * self.config.length
    }

    fn clue_detector(&self) -> Option<ClueDetector> {
        None
    }

    fn realized_horizon(&self) -> Option<u32> {
        self.state.as_ref().map(|_| 1)
    }
}
