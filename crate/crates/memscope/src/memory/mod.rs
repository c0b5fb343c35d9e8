//! The memory algebra: correlation horizons, the context-memory border, and
//! the classification of what a given context length can and cannot test.
//!
//! Everything in this module is pure arithmetic over small integers. The
//! quantities involved:
//!
//! * an *event-recall pair* ties an event window (start step, duration) to the
//!   later step at which an agent must act on it;
//! * the *correlation horizon* of a pair is the number of context steps a
//!   purely history-windowed agent needs for the event to still be in view at
//!   the recall step;
//! * a *horizon profile* collects the horizons of every pair a task contains,
//!   and the *context-memory border* derived from it splits context lengths
//!   into a long-term-memory-only range, a mixed range, and a
//!   short-term-memory-only range.

mod classify;
mod framework;
mod horizon;
mod plan;

pub use classify::{
    classify_context, context_intervals, validate_mechanism_experiment, ContextIntervals,
    ContextSpec, MechanismCheck, MechanismViolation, MemoryTaskClass,
};
pub use framework::{
    classify_framework, FrameworkClass, FrameworkLabel, InnerLoopKind, MemoryKind, TaskFamily,
    TaskSetting,
};
pub use horizon::{parse_horizon_list, EventRecallPair, EventWindow, HorizonProfile, RecallPoint};
pub use plan::{plan_experiment, ExperimentPlan, MemoryTarget};
