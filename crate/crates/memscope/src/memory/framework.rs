use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a single inner-loop episode is itself partially observed (history
/// matters within the episode) or fully observed (it does not).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerLoopKind {
    Mdp,
    Pomdp,
}

/// How an experiment is organised: how many distinct environments the agent
/// faces, how many episodes it gets in each, and what a single episode looks
/// like from the inside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TaskSetting {
    n_envs: u32,
    n_episodes: u32,
    inner_loop: InnerLoopKind,
}

impl TaskSetting {
    pub fn new(n_envs: u32, n_episodes: u32, inner_loop: InnerLoopKind) -> Result<Self> {
        if n_envs < 1 || n_episodes < 1 {
            return Err(Error::InvalidConfig(
                "a task setting needs at least one environment and one episode".into(),
            ));
        }
        Ok(Self {
            n_envs,
            n_episodes,
            inner_loop,
        })
    }

    pub fn n_envs(&self) -> u32 {
        self.n_envs
    }

    pub fn n_episodes(&self) -> u32 {
        self.n_episodes
    }

    pub fn inner_loop(&self) -> InnerLoopKind {
        self.inner_loop
    }
}

/// The kind of memory an experiment setting exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemoryKind {
    /// Remembering facts observed earlier: what the clue was.
    Declarative,
    /// Remembering how to act, distilled across episodes: what worked.
    Procedural,
}

/// Which experimental framework a setting belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameworkClass {
    /// One environment, one episode: memory-constrained decision making.
    MemoryDm,
    /// Repeated episodes with partially observed inner loops: memory works in
    /// both the inner and the outer loop.
    MetaRlInnerOuterMemory,
    /// Repeated episodes whose inner loops are fully observed: only the outer
    /// loop exercises memory.
    MetaRlOuterOnly,
}

/// The conventional name of the setting, derived from the two counts alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskFamily {
    MemoryDm,
    SingleTaskMetaRl,
    MultiTaskZeroShotMetaRl,
    MultiTaskMetaRl,
}

impl fmt::Display for TaskFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TaskFamily::MemoryDm => "Memory DM",
            TaskFamily::SingleTaskMetaRl => "Single-task Meta-RL",
            TaskFamily::MultiTaskZeroShotMetaRl => "Multi-task 0-shot Meta-RL",
            TaskFamily::MultiTaskMetaRl => "Multi-task Meta-RL",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrameworkLabel {
    pub class: FrameworkClass,
    pub memory: MemoryKind,
    pub family: TaskFamily,
}

impl fmt::Display for FrameworkLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let class = match self.class {
            FrameworkClass::MemoryDm => "memory decision-making",
            FrameworkClass::MetaRlInnerOuterMemory => "meta-RL, inner + outer loop memory",
            FrameworkClass::MetaRlOuterOnly => "meta-RL, outer loop memory only",
        };
        let memory = match self.memory {
            MemoryKind::Declarative => "declarative",
            MemoryKind::Procedural => "procedural",
        };
        write!(f, "{} ({class}; {memory} memory)", self.family)
    }
}

/// Label a task setting. A single environment with a single episode is memory
/// decision-making and exercises declarative memory. Everything with repeated
/// exposure is meta-RL and exercises procedural memory; whether its inner loop
/// also exercises memory depends on the inner loop being partially observed.
pub fn classify_framework(setting: &TaskSetting) -> FrameworkLabel {
    let family = match (setting.n_envs() > 1, setting.n_episodes() > 1) {
        (false, false) => TaskFamily::MemoryDm,
        (false, true) => TaskFamily::SingleTaskMetaRl,
        (true, false) => TaskFamily::MultiTaskZeroShotMetaRl,
        (true, true) => TaskFamily::MultiTaskMetaRl,
    };
    if family == TaskFamily::MemoryDm {
        return FrameworkLabel {
            class: FrameworkClass::MemoryDm,
            memory: MemoryKind::Declarative,
            family,
        };
    }
    let class = match setting.inner_loop() {
        InnerLoopKind::Pomdp => FrameworkClass::MetaRlInnerOuterMemory,
        InnerLoopKind::Mdp => FrameworkClass::MetaRlOuterOnly,
    };
    FrameworkLabel {
        class,
        memory: MemoryKind::Procedural,
        family,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FrameworkClass::*;
    use InnerLoopKind::*;
    use MemoryKind::*;
    use TaskFamily::*;

    #[test]
    fn framework_table() {
        // The full seven-row grid of settings and their labels.
        let rows: [(
            u32,
            u32,
            InnerLoopKind,
            FrameworkClass,
            MemoryKind,
            TaskFamily,
        ); 7] = [
            (
                1,
                1,
                Pomdp,
                FrameworkClass::MemoryDm,
                Declarative,
                TaskFamily::MemoryDm,
            ),
            (
                1,
                8,
                Pomdp,
                MetaRlInnerOuterMemory,
                Procedural,
                SingleTaskMetaRl,
            ),
            (
                6,
                1,
                Pomdp,
                MetaRlInnerOuterMemory,
                Procedural,
                MultiTaskZeroShotMetaRl,
            ),
            (
                6,
                8,
                Pomdp,
                MetaRlInnerOuterMemory,
                Procedural,
                MultiTaskMetaRl,
            ),
            (1, 8, Mdp, MetaRlOuterOnly, Procedural, SingleTaskMetaRl),
            (
                6,
                1,
                Mdp,
                MetaRlOuterOnly,
                Procedural,
                MultiTaskZeroShotMetaRl,
            ),
            (6, 8, Mdp, MetaRlOuterOnly, Procedural, MultiTaskMetaRl),
        ];
        for (n_envs, n_eps, inner, class, memory, family) in rows {
            let label = classify_framework(&TaskSetting::new(n_envs, n_eps, inner).unwrap());
            assert_eq!(label.class, class, "envs={n_envs} eps={n_eps} {inner:?}");
            assert_eq!(label.memory, memory);
            assert_eq!(label.family, family);
        }
    }

    #[test]
    fn zero_counts_rejected() {
        assert!(TaskSetting::new(0, 1, Pomdp).is_err());
        assert!(TaskSetting::new(1, 0, Mdp).is_err());
    }

    #[test]
    fn display_names() {
        let l = classify_framework(&TaskSetting::new(6, 1, Mdp).unwrap());
        assert_eq!(
            l.to_string(),
            "Multi-task 0-shot Meta-RL (meta-RL, outer loop memory only; procedural memory)"
        );
    }
}
