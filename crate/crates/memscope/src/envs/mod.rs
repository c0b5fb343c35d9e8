//! Benchmark environments with declared horizon profiles.
//!
//! Each environment is a small, discrete, seeded simulator. Resetting with
//! the same seed always reproduces the same episode layout, and stepping is a
//! pure function of (config, seed, action sequence); there is no hidden
//! global randomness. Besides the usual reset/step interface, an environment
//! declares:
//!
//! * its horizon profile: the correlation horizons of the event-recall pairs
//!   it generates, the input to all classification;
//! * an episode bound `T`: no episode outlives it;
//! * optionally a clue signal, which tells mechanisms what counts as "the
//!   thing to remember" in an observation.

mod control;
mod minigrid;
mod tmaze;

pub use control::ControlConfig;
pub use minigrid::{CorridorMode, MinigridConfig};
pub use tmaze::{RewardMode, TMazeConfig};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::memory::HorizonProfile;

/// A discrete observation: a short vector of small integer channels. The
/// meaning of each channel is environment-specific and documented on the
/// environment; agents only ever hash or compare observations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Obs(pub SmallVec<[i16; 12]>);

impl Obs {
    pub fn from_slice(channels: &[i16]) -> Self {
        Obs(SmallVec::from_slice(channels))
    }

    pub fn channels(&self) -> &[i16] {
        &self.0
    }
}

/// Result of one environment step.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub obs: Obs,
    pub reward: f64,
    pub done: bool,
    /// Meaningful only on terminal steps: whether the episode counts as a
    /// task success. Kept separate from reward so shaped rewards do not blur
    /// the success metric.
    pub success: bool,
}

/// How to recognise the to-be-remembered signal in a raw observation.
/// Declared by environments, consumed by memory mechanisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ClueDetector {
    /// The clue lives in one channel and is non-zero exactly when present.
    Channel { index: usize },
    /// The clue is an object code visible somewhere in the given channel
    /// range; it only counts when exactly one object cell is in view (a view
    /// showing both candidate objects identifies nothing).
    SingleObjectCell {
        codes: (i16, i16),
        first_channel: usize,
    },
}

impl ClueDetector {
    /// Extract the clue value from an observation, if this observation
    /// carries one.
    pub fn signal(&self, obs: &Obs) -> Option<i16> {
        match *self {
            ClueDetector::Channel { index } => {
                let v = *obs.channels().get(index)?;
                (v != 0).then_some(v)
            }
            ClueDetector::SingleObjectCell {
                codes,
                first_channel,
            } => {
                let cells = obs.channels().get(first_channel..)?;
                let mut seen = None;
                let mut count = 0usize;
                for &c in cells {
                    if c == codes.0 || c == codes.1 {
                        count += 1;
                        seen = Some(c);
                    }
                }
                (count == 1).then(|| seen.unwrap())
            }
        }
    }
}

pub trait Environment {
    fn name(&self) -> &'static str;

    /// Start a new episode. The seed fully determines the episode layout
    /// (clue values, corridor length, noise stream).
    fn reset(&mut self, seed: u64) -> Obs;

    /// Advance one step. Errors before the first reset, after a terminal
    /// step, and on out-of-range action indices.
    fn step(&mut self, action: usize) -> Result<Step>;

    fn num_actions(&self) -> usize;

    fn action_name(&self, action: usize) -> &'static str;

    /// The horizons of every event-recall pair this configuration can
    /// generate.
    fn horizon_profile(&self) -> HorizonProfile;

    /// Upper bound on episode length; also the reach a whole-episode memory
    /// mechanism provides.
    fn episode_bound(&self) -> u32;

    /// How mechanisms can recognise the clue, if this environment has one.
    fn clue_detector(&self) -> Option<ClueDetector>;

    /// The correlation horizon of the episode started by the last reset
    /// (fixed-layout environments always report the same value). `None`
    /// before the first reset.
    fn realized_horizon(&self) -> Option<u32>;
}

/// Configuration for any registered environment; the JSON form is tagged by
/// `type`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EnvConfig {
    Tmaze(TMazeConfig),
    Minigrid(MinigridConfig),
    Control(ControlConfig),
}

impl EnvConfig {
    pub fn validate(&self) -> Result<()> {
        match self {
            EnvConfig::Tmaze(c) => c.validate(),
            EnvConfig::Minigrid(c) => c.validate(),
            EnvConfig::Control(c) => c.validate(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EnvConfig::Tmaze(_) => "tmaze",
            EnvConfig::Minigrid(_) => "minigrid",
            EnvConfig::Control(_) => "control",
        }
    }
}

/// Instantiate an environment from its config, validating it first.
pub fn build_env(config: &EnvConfig) -> Result<Box<dyn Environment>> {
    config.validate()?;
    Ok(match config {
        EnvConfig::Tmaze(c) => Box::new(tmaze::TMaze::new(c.clone())),
        EnvConfig::Minigrid(c) => Box::new(minigrid::Minigrid::new(c.clone())),
        EnvConfig::Control(c) => Box::new(control::ControlCorridor::new(c.clone())),
    })
}

/// Parse the compact command-line form `name:key=val,flag,...`.
///
/// Examples: `tmaze:L=10`, `tmaze:L=10,dense,noise`, `minigrid:L=21,fixed`,
/// `minigrid:L=9,variable`, `control:length=5`.
pub fn parse_env_spec(spec: &str) -> Result<EnvConfig> {
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
    let parse_u32 = |key: &str, val: &str| -> Result<u32> {
        val.parse::<u32>()
            .map_err(|_| bad(format!("{key}={val}: expected a non-negative integer")))
    };

    match name {
        "tmaze" => {
            let mut cfg = TMazeConfig::default();
            for item in items {
                match item.split_once('=') {
                    Some(("L", v)) => cfg.corridor_length = parse_u32("L", v)?,
                    Some(("reward", "sparse")) => cfg.reward_mode = RewardMode::Sparse,
                    Some(("reward", "dense")) => cfg.reward_mode = RewardMode::Dense,
                    Some(("noise", v)) => {
                        cfg.noise_enabled = v
                            .parse::<bool>()
                            .map_err(|_| bad(format!("noise={v}: expected true or false")))?
                    }
                    None if item == "sparse" => cfg.reward_mode = RewardMode::Sparse,
                    None if item == "dense" => cfg.reward_mode = RewardMode::Dense,
                    None if item == "noise" => cfg.noise_enabled = true,
                    _ => return Err(bad(format!("unknown tmaze option '{item}'"))),
                }
            }
            Ok(EnvConfig::Tmaze(cfg))
        }
        "minigrid" => {
            let mut cfg = MinigridConfig::default();
            for item in items {
                match item.split_once('=') {
                    Some(("L", v)) => cfg.map_size = parse_u32("L", v)?,
                    Some(("mode", "fixed")) => cfg.corridor_mode = CorridorMode::Fixed,
                    Some(("mode", "variable")) => cfg.corridor_mode = CorridorMode::Variable,
                    Some(("time_limit", v)) => cfg.time_limit = parse_u32("time_limit", v)?,
                    Some(("object_a", v)) => cfg.object_pair.0 = parse_u32("object_a", v)? as i16,
                    Some(("object_b", v)) => cfg.object_pair.1 = parse_u32("object_b", v)? as i16,
                    None if item == "fixed" => cfg.corridor_mode = CorridorMode::Fixed,
                    None if item == "variable" => cfg.corridor_mode = CorridorMode::Variable,
                    _ => return Err(bad(format!("unknown minigrid option '{item}'"))),
                }
            }
            Ok(EnvConfig::Minigrid(cfg))
        }
        "control" => {
            let mut cfg = ControlConfig::default();
            for item in items {
                match item.split_once('=') {
                    Some(("length", v)) => cfg.length = parse_u32("length", v)?,
                    _ => return Err(bad(format!("unknown control option '{item}'"))),
                }
            }
            Ok(EnvConfig::Control(cfg))
        }
        other => Err(bad(format!(
            "unknown environment '{other}' (known: tmaze, minigrid, control)"
        ))),
    }
}

/// Catalog entry for `envs list`.
#[derive(Debug, Clone, Serialize)]
pub struct EnvDescriptor {
    pub name: &'static str,
    pub summary: &'static str,
    pub spec_grammar: &'static str,
    /// Horizon profile of the default configuration, compact form.
    pub default_profile: String,
    pub default_config: EnvConfig,
}

pub fn registered_envs() -> Vec<EnvDescriptor> {
    let entries: [(&'static str, &'static str, &'static str, EnvConfig); 4] = [
        (
            "tmaze",
            "Passive T-Maze: a clue at step 0 decides which way to turn at the junction, exactly L steps later; the episode budget leaves no slack",
            "tmaze:L=<len>[,sparse|dense][,noise]",
            EnvConfig::Tmaze(TMazeConfig::default()),
        ),
        (
            "minigrid",
            "Grid maze with an object room at the corridor base and a matching object to find at the junction; fixed corridor length L or per-episode variable length",
            "minigrid:L=<size>[,fixed|variable][,time_limit=<n>]",
            EnvConfig::Minigrid(MinigridConfig::default()),
        ),
        (
            "minigrid (variable)",
            "Same maze with the corridor start resampled each episode, spreading the horizon over a whole range",
            "minigrid:L=<size>,variable",
            EnvConfig::Minigrid(MinigridConfig {
                corridor_mode: CorridorMode::Variable,
                ..MinigridConfig::default()
            }),
        ),
        (
            "control",
            "Fully observed corridor; every decision depends only on the current observation (horizon 1), so memory classification refuses it",
            "control[:length=<n>]",
            EnvConfig::Control(ControlConfig::default()),
        ),
    ];
    entries
        .into_iter()
        .map(|(name, summary, spec_grammar, default_config)| {
            let profile = build_env(&default_config)
                .expect("default config is valid")
                .horizon_profile();
            EnvDescriptor {
                name,
                summary,
                spec_grammar,
                default_profile: profile.display_compact(),
                default_config,
            }
        })
        .collect()
}
