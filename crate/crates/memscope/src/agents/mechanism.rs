//! Memory mechanisms: per-episode state that outlives the context window.
//!
//! A mechanism widens what the context key can depend on without widening the
//! window. Both built-in mechanisms reach the episode bound `T`: once
//! something enters them at any step, it stays visible to every later
//! decision of the episode.

use serde::{Deserialize, Serialize};

use crate::envs::{ClueDetector, Environment, Obs};
use crate::error::{Error, Result};
use crate::Fnv128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MechanismKind {
    #[default]
    None,
    /// Write-once slot: stores the first clue signal of the episode.
    Latch,
    /// Running digest of every observation and action so far.
    FullHistory,
}

impl std::fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MechanismKind::None => "none",
            MechanismKind::Latch => "latch",
            MechanismKind::FullHistory => "full_history",
        })
    }
}

#[derive(Debug, Clone)]
enum State {
    Latch {
        detector: ClueDetector,
        slot: Option<i16>,
    },
    FullHistory {
        digest: Fnv128,
    },
}

/// An installed mechanism, bound to one environment's clue detector and
/// episode bound.
#[derive(Debug, Clone)]
pub struct Mechanism {
    state: State,
    reach: u32,
}

/// A latch for `env`: remembers the first clue signal it observes. Requires
/// the environment to declare a clue detector.
pub fn latch_mechanism(env: &dyn Environment) -> Result<Mechanism> {
    let detector = env.clue_detector().ok_or(Error::NoClueSignal)?;
    Ok(Mechanism {
        state: State::Latch {
            detector,
            slot: None,
        },
        reach: env.episode_bound(),
    })
}

/// A whole-episode digest for `env`: every observation and action feeds a
/// running hash, so any two distinct histories get distinct keys.
pub fn full_history_mechanism(env: &dyn Environment) -> Mechanism {
    Mechanism {
        state: State::FullHistory {
            digest: Fnv128::new(),
        },
        reach: env.episode_bound(),
    }
}

impl Mechanism {
    pub fn kind(&self) -> MechanismKind {
        match self.state {
            State::Latch { .. } => MechanismKind::Latch,
            State::FullHistory { .. } => MechanismKind::FullHistory,
        }
    }

    /// How many steps back this mechanism can carry information: the episode
    /// bound of the environment it was built for.
    pub fn reach(&self) -> u32 {
        self.reach
    }

    pub(crate) fn reset(&mut self) {
        match &mut self.state {
            State::Latch { slot, .. } => *slot = None,
            State::FullHistory { digest } => *digest = Fnv128::new(),
        }
    }

    pub(crate) fn ingest_obs(&mut self, obs: &Obs) {
        match &mut self.state {
            State::Latch { detector, slot } => {
                if slot.is_none() {
                    *slot = detector.signal(obs);
                }
            }
            State::FullHistory { digest } => {
                digest.write_u32(obs.channels().len() as u32);
                for &c in obs.channels() {
                    digest.write_i16(c);
                }
            }
        }
    }

    pub(crate) fn ingest_action(&mut self, action: usize) {
        match &mut self.state {
            State::Latch { .. } => {}
            State::FullHistory { digest } => digest.write_u32(action as u32),
        }
    }

    /// Fold the mechanism state into a context key.
    pub(crate) fn write_key(&self, h: &mut Fnv128) {
        match &self.state {
            State::Latch { slot, .. } => {
                h.write_u8(1);
                // Clue signals are non-zero by construction, so 0 encodes
                // "nothing latched yet" unambiguously.
                h.write_i16(slot.unwrap_or(0));
            }
            State::FullHistory { digest } => {
                h.write_u8(2);
                h.write_u128(digest.finish());
            }
        }
    }
}
