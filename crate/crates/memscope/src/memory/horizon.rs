use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A thing that happens in an episode and later has to be remembered: it
/// begins at step `start` and spans `duration` additional steps. A duration of
/// zero means the event is instantaneous, fully contained in the observation
/// at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventWindow {
    pub start: u32,
    pub duration: u32,
}

impl EventWindow {
    pub fn new(start: u32, duration: u32) -> Self {
        Self { start, duration }
    }

    /// First step at which the event is fully observed.
    pub fn end(&self) -> u32 {
        self.start + self.duration
    }
}

/// The step at which the remembered information must influence a decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RecallPoint {
    pub step: u32,
}

impl RecallPoint {
    pub fn new(step: u32) -> Self {
        Self { step }
    }
}

/// An event window together with the recall point that depends on it.
///
/// Construction checks that the recall point does not precede the end of the
/// event, so every constructed pair has a correlation horizon of at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventRecallPair {
    event: EventWindow,
    recall: RecallPoint,
}

impl EventRecallPair {
    pub fn new(event: EventWindow, recall: RecallPoint) -> Result<Self> {
        if (recall.step as u64) < event.start as u64 + event.duration as u64 {
            return Err(Error::RecallBeforeEvent {
                event_start: event.start,
                duration: event.duration,
                recall: recall.step,
            });
        }
        Ok(Self { event, recall })
    }

    /// Shorthand for `new(EventWindow::new(start, duration), RecallPoint::new(recall))`.
    pub fn from_steps(start: u32, duration: u32, recall: u32) -> Result<Self> {
        Self::new(EventWindow::new(start, duration), RecallPoint::new(recall))
    }

    pub fn event(&self) -> EventWindow {
        self.event
    }

    pub fn recall(&self) -> RecallPoint {
        self.recall
    }

    /// Number of context steps needed for the start of the event to still be
    /// inside a sliding window ending at the recall step:
    /// `recall - start - duration + 1`.
    ///
    /// A horizon of 1 means the information is available in the very
    /// observation the decision is made on; anything larger requires history.
    pub fn correlation_horizon(&self) -> u32 {
        let h = self.recall.step as u64 - self.event.start as u64 - self.event.duration as u64 + 1;
        debug_assert!(h >= 1);
        h as u32
    }
}

/// The multiset of correlation horizons of every event-recall pair a task
/// contains. Stored sorted; duplicates are kept because two pairs with the
/// same horizon are still two pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HorizonProfile {
    horizons: Vec<u32>,
}

impl HorizonProfile {
    /// Build a profile from raw horizon values. Empty input and zero horizons
    /// are rejected: a task with no event-recall pairs has nothing to
    /// remember, and no valid pair can produce a horizon below 1.
    pub fn new<I: IntoIterator<Item = u32>>(horizons: I) -> Result<Self> {
        let mut horizons: Vec<u32> = horizons.into_iter().collect();
        if horizons.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if let Some(&bad) = horizons.iter().find(|&&h| h == 0) {
            return Err(Error::InvalidHorizon(bad));
        }
        horizons.sort_unstable();
        Ok(Self { horizons })
    }

    pub fn single(horizon: u32) -> Result<Self> {
        Self::new([horizon])
    }

    /// Profile holding every horizon in `lo..=hi` once.
    pub fn range_inclusive(lo: u32, hi: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyProfile);
        }
        Self::new(lo..=hi)
    }

    pub fn from_pairs(pairs: &[EventRecallPair]) -> Result<Self> {
        Self::new(pairs.iter().map(|p| p.correlation_horizon()))
    }

    pub fn min_horizon(&self) -> u32 {
        self.horizons[0]
    }

    pub fn max_horizon(&self) -> u32 {
        *self.horizons.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.horizons.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn horizons(&self) -> &[u32] {
        &self.horizons
    }

    pub fn contains(&self, horizon: u32) -> bool {
        self.horizons.binary_search(&horizon).is_ok()
    }

    /// A task is memory-intensive when no decision can be made from the
    /// current observation alone, i.e. every correlation horizon exceeds 1.
    pub fn is_memory_intensive(&self) -> bool {
        self.min_horizon() > 1
    }

    /// When every horizon equals 1 the task is an MDP in disguise: the current
    /// observation always suffices.
    pub fn is_mdp(&self) -> bool {
        self.max_horizon() == 1
    }

    /// Largest context length that still leaves *every* pair out of reach of
    /// the window: `min - 1`. Context lengths at or below the border can only
    /// be solved by long-term memory; above it, at least one pair fits in the
    /// window.
    pub fn context_memory_border(&self) -> u32 {
        self.min_horizon() - 1
    }

    /// Compact display form: `{11}` or `{7..22}` or `{3, 5, 9}`.
    pub fn display_compact(&self) -> String {
        let h = &self.horizons;
        let contiguous_run = h.len() > 2 && h.windows(2).all(|w| w[1] == w[0] + 1);
        if contiguous_run {
            format!("{{{}..{}}}", h[0], h[h.len() - 1])
        } else {
            let items: Vec<String> = h.iter().map(|x| x.to_string()).collect();
            format!("{{{}}}", items.join(", "))
        }
    }
}

/// Parse a horizon list written as comma-separated values and inclusive
/// ranges: `"15"`, `"7,8,9"`, `"7..22"`, or mixtures like `"3,5..9"`.
pub fn parse_horizon_list(list: &str) -> Result<HorizonProfile> {
    let mut horizons = Vec::new();
    for token in list.split(',') {
        let token = token.trim();
        if let Some((lo, hi)) = token.split_once("..") {
            let lo: u32 = lo
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad range start in {token:?}")))?;
            let hi: u32 = hi
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad range end in {token:?}")))?;
            if lo > hi {
                return Err(Error::InvalidConfig(format!("empty range {lo}..{hi}")));
            }
            horizons.extend(lo..=hi);
        } else {
            horizons.push(
                token
                    .parse()
                    .map_err(|_| Error::InvalidConfig(format!("bad horizon {token:?}")))?,
            );
        }
    }
    HorizonProfile::new(horizons)
}
