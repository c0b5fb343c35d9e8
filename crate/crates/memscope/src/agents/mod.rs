//! Tabular agents with an explicit, inspectable context.
//!
//! The central agent keeps a sliding window: the current observation plus the
//! last `K - 1` (observation, action, reward) triplets. That window, together
//! with the state of an optional memory mechanism, is hashed into a 128-bit
//! key, and a Q-table over those keys drives an epsilon-greedy policy. What
//! the agent can and cannot remember is therefore exact: nothing outside the
//! window reaches the key unless a mechanism carries it.
//!
//! Mechanisms extend the effective context beyond the window without widening
//! the window itself: a latch stores the first clue it sees for the whole
//! episode, a full-history digest folds every observation and action into a
//! running hash. Both reach the episode bound `T`.

mod mechanism;
mod random;
mod window;

pub use mechanism::{full_history_mechanism, latch_mechanism, Mechanism, MechanismKind};
pub use random::RandomAgent;
pub use window::WindowAgent;

use serde::{Deserialize, Serialize};

use crate::envs::{Environment, Obs, Step};
use crate::error::{Error, Result};
use crate::memory::ContextSpec;

/// One remembered transition: the observation at which `action` was taken and
/// the reward that followed.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionRecord {
    pub obs: Obs,
    pub action: usize,
    pub reward: f64,
}

pub trait Agent {
    /// Short human-readable label, e.g. `window(k=4)+latch`.
    fn name(&self) -> String;

    /// The context length `K` and effective context `K_eff` this agent
    /// actually has, for stamping onto results.
    fn context_spec(&self) -> ContextSpec;

    /// Start a fresh episode from its first observation. Clears the window
    /// and resets any mechanism; learned Q-values persist across episodes.
    fn begin_episode(&mut self, obs: &Obs);

    /// Choose an action. With probability `epsilon` a uniformly random one;
    /// otherwise greedy over the Q-values of the current context key, ties
    /// broken toward the lowest action index. `epsilon = 0` consumes no
    /// randomness at all, so interleaved greedy evaluations never perturb the
    /// training stream.
    fn act(&mut self, epsilon: f64) -> usize;

    /// Record the outcome of `action` and, when `learn` is set, apply one
    /// Q-learning update.
    fn observe_transition(&mut self, action: usize, step: &Step, learn: bool);
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowConfig {
    /// Context length `K`: the current observation plus `K - 1` previous
    /// transitions.
    pub context_length: u32,
    #[serde(default)]
    pub mechanism: MechanismKind,
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    #[serde(default = "default_discount")]
    pub discount: f64,
}

fn default_learning_rate() -> f64 {
    0.1
}

fn default_discount() -> f64 {
    1.0
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self {
            context_length: 1,
            mechanism: MechanismKind::None,
            learning_rate: default_learning_rate(),
            discount: default_discount(),
        }
    }
}

impl WindowConfig {
    pub fn validate(&self) -> Result<()> {
        if self.context_length == 0 {
            return Err(Error::InvalidContextLength);
        }
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be in (0, 1], got {}",
                self.learning_rate
            )));
        }
        if !(0.0..=1.0).contains(&self.discount) {
            return Err(Error::InvalidConfig(format!(
                "discount must be in [0, 1], got {}",
                self.discount
            )));
        }
        Ok(())
    }
}

/// Configuration for any registered agent; the JSON form is tagged by `type`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AgentConfig {
    Window(WindowConfig),
    Random,
}

impl AgentConfig {
    pub fn validate(&self) -> Result<()> {
        match self {
            AgentConfig::Window(c) => c.validate(),
            AgentConfig::Random => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            AgentConfig::Window(c) => match c.mechanism {
                MechanismKind::None => format!("window(k={})", c.context_length),
                kind => format!("window(k={})+{kind}", c.context_length),
            },
            AgentConfig::Random => "random".into(),
        }
    }
}

/// Instantiate an agent against a concrete environment. The environment
/// supplies the action count, the episode bound that mechanisms reach, and
/// the clue detector a latch needs; asking for a latch on an environment
/// without a clue signal is an error.
pub fn build_agent(
    config: &AgentConfig,
    env: &dyn Environment,
    seed: u64,
) -> Result<Box<dyn Agent>> {
    config.validate()?;
    Ok(match config {
        AgentConfig::Window(c) => {
            let mechanism = match c.mechanism {
                MechanismKind::None => None,
                MechanismKind::Latch => Some(latch_mechanism(env)?),
                MechanismKind::FullHistory => Some(full_history_mechanism(env)),
            };
            Box::new(WindowAgent::new(
                c.clone(),
                env.num_actions(),
                mechanism,
                seed,
            ))
        }
        AgentConfig::Random => Box::new(RandomAgent::new(env.num_actions(), seed)),
    })
}

/// Parse the compact command-line form.
///
/// Examples: `window:K=4`, `window:K=4,latch`, `window:K=1,lr=0.2,gamma=0.99`,
/// `random`.
pub fn parse_agent_spec(spec: &str) -> Result<AgentConfig> {
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n.trim(), Some(r)),
        None => (spec.trim(), None),
    };
    let items: Vec<&str> = rest
        .map(|r| {
            r.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect()
        })
        .unwrap_or_default();
    let bad = |msg: String| Error::InvalidConfig(msg);

    match name {
        "window" => {
            let mut cfg = WindowConfig::default();
            for item in items {
                match item.split_once('=') {
                    Some(("K", v)) => {
                        cfg.context_length = v
                            .parse::<u32>()
                            .map_err(|_| bad(format!("K={v}: expected a positive integer")))?
                    }
                    Some(("lr", v)) => {
                        cfg.learning_rate = v
                            .parse::<f64>()
                            .map_err(|_| bad(format!("lr={v}: expected a number")))?
                    }
                    Some(("gamma", v)) => {
                        cfg.discount = v
                            .parse::<f64>()
                            .map_err(|_| bad(format!("gamma={v}: expected a number")))?
                    }
                    None if item == "latch" => cfg.mechanism = MechanismKind::Latch,
                    None if item == "full_history" => cfg.mechanism = MechanismKind::FullHistory,
                    _ => return Err(bad(format!("unknown window agent option '{item}'"))),
                }
            }
            cfg.validate()?;
            Ok(AgentConfig::Window(cfg))
        }
        "random" => {
            if !items.is_empty() {
                return Err(bad("the random agent takes no options".into()));
            }
            Ok(AgentConfig::Random)
        }
        other => Err(bad(format!(
            "unknown agent '{other}' (known: window, random)"
        ))),
    }
}
