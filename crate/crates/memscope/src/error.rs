use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Recall cannot precede the end of the event it refers to.
    #[error("recall step {recall} precedes the end of the event (start {event_start}, duration {duration})")]
    RecallBeforeEvent {
        event_start: u32,
        duration: u32,
        recall: u32,
    },

    /// A correlation horizon of zero cannot be produced by any valid
    /// event-recall pair.
    #[error("correlation horizons must be at least 1, got {0}")]
    InvalidHorizon(u32),

    /// A task with no event-recall pairs offers nothing to remember.
    #[error("horizon profile is empty: the environment is not suitable for memory testing")]
    EmptyProfile,

    /// Context-window classification is only meaningful when every decision
    /// requires at least one step of history.
    #[error("environment is not memory-intensive (minimum correlation horizon is {min_horizon}); there is no long-term/short-term split to test")]
    NotMemoryIntensive { min_horizon: u32 },

    #[error("context length must be at least 1")]
    InvalidContextLength,

    #[error("effective context {k_eff} is smaller than the base context {k}")]
    EffectiveBelowContext { k: u32, k_eff: u32 },

    #[error("a long-term memory experiment needs a memory mechanism: without one the agent cannot act on information beyond its context window")]
    MechanismRequired,

    #[error("the latch mechanism needs an environment that declares a clue signal")]
    NoClueSignal,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("episode not started: call reset before step")]
    EpisodeNotStarted,

    #[error("episode already finished: call reset to start a new one")]
    EpisodeFinished,

    #[error("invalid action index {action}: environment has {num_actions} actions")]
    InvalidAction { action: usize, num_actions: usize },

    #[error("no results found under {0}")]
    NoResults(String),

    #[error("malformed results file {path}: {detail}")]
    MalformedResults { path: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
