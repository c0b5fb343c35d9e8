use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::memory::HorizonProfile;

/// What a given context length can test on a given task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemoryTaskClass {
    /// Every event-recall pair lies beyond the window: success requires a
    /// memory mechanism, so the task probes long-term memory only.
    LtmOnly,
    /// Some pairs fit in the window and some do not; results would conflate
    /// the two kinds of memory.
    Mixed,
    /// Every pair fits in the window: the task probes short-term memory only.
    StmOnly,
}

impl fmt::Display for MemoryTaskClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MemoryTaskClass::LtmOnly => "ltm_only",
            MemoryTaskClass::Mixed => "mixed",
            MemoryTaskClass::StmOnly => "stm_only",
        };
        f.write_str(s)
    }
}

impl MemoryTaskClass {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ltm_only" => Some(Self::LtmOnly),
            "mixed" => Some(Self::Mixed),
            "stm_only" => Some(Self::StmOnly),
            _ => None,
        }
    }

    /// Prose form for human-facing output.
    pub fn describe(&self) -> &'static str {
        match self {
            MemoryTaskClass::LtmOnly => "long-term memory only",
            MemoryTaskClass::Mixed => "mixed (conflates long- and short-term memory)",
            MemoryTaskClass::StmOnly => "short-term memory only",
        }
    }
}

/// An agent's context: the window length `k` it conditions on directly, and
/// the effective length `k_eff` after any memory mechanism extends its reach.
/// Without a mechanism `k_eff == k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContextSpec {
    k: u32,
    k_eff: u32,
}

impl ContextSpec {
    pub fn new(k: u32, k_eff: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidContextLength);
        }
        if k_eff < k {
            return Err(Error::EffectiveBelowContext { k, k_eff });
        }
        Ok(Self { k, k_eff })
    }

    /// Plain sliding window, no mechanism.
    pub fn window(k: u32) -> Result<Self> {
        Self::new(k, k)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn k_eff(&self) -> u32 {
        self.k_eff
    }

    pub fn has_mechanism(&self) -> bool {
        self.k_eff > self.k
    }
}

/// Classify what context length `k` tests on a task with the given profile.
///
/// With border `b = min - 1` and `m = max`:
/// `[1, b]` is long-term-only, `(b, m)` is mixed, `[m, inf)` is short-term-only.
/// When the profile holds a single distinct horizon the mixed band is empty.
pub fn classify_context(k: u32, profile: &HorizonProfile) -> Result<MemoryTaskClass> {
    if k < 1 {
        return Err(Error::InvalidContextLength);
    }
    if !profile.is_memory_intensive() {
        return Err(Error::NotMemoryIntensive {
            min_horizon: profile.min_horizon(),
        });
    }
    let border = profile.context_memory_border();
    let max = profile.max_horizon();
    Ok(if k <= border {
        MemoryTaskClass::LtmOnly
    } else if k < max {
        MemoryTaskClass::Mixed
    } else {
        MemoryTaskClass::StmOnly
    })
}

/// The three context-length bands of a profile, for display and planning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextIntervals {
    /// Upper end of the long-term-only band `[1, border]`.
    pub border: u32,
    /// Exclusive bounds of the mixed band, `None` when it is empty.
    pub mixed: Option<(u32, u32)>,
    /// Lower end of the short-term-only band `[stm_min, inf)`.
    pub stm_min: u32,
}

pub fn context_intervals(profile: &HorizonProfile) -> Result<ContextIntervals> {
    if !profile.is_memory_intensive() {
        return Err(Error::NotMemoryIntensive {
            min_horizon: profile.min_horizon(),
        });
    }
    let border = profile.context_memory_border();
    let max = profile.max_horizon();
    let mixed = if border + 1 < max {
        Some((border, max))
    } else {
        None
    };
    Ok(ContextIntervals {
        border,
        mixed,
        stm_min: max,
    })
}

/// Why a context spec fails the mechanism-experiment condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MechanismViolation {
    /// `k` exceeds the border, so even the bare window can reach some pairs
    /// and a success would not isolate the mechanism.
    ContextAboveBorder { k: u32, border: u32 },
    /// The mechanism's reach falls short of the longest horizon, so some
    /// pairs stay unreachable even with it.
    HorizonBeyondEffective { max_horizon: u32, k_eff: u32 },
}

impl fmt::Display for MechanismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MechanismViolation::ContextAboveBorder { k, border } => write!(
                f,
                "context K={k} exceeds the context-memory border {border}; the bare window already reaches some events"
            ),
            MechanismViolation::HorizonBeyondEffective { max_horizon, k_eff } => write!(
                f,
                "effective context K_eff={k_eff} does not cover the longest horizon {max_horizon}"
            ),
        }
    }
}

/// Verdict of [`validate_mechanism_experiment`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MechanismCheck {
    violations: Vec<MechanismViolation>,
}

impl MechanismCheck {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[MechanismViolation] {
        &self.violations
    }
}

/// A mechanism experiment is sound when the bare window reaches nothing
/// (`k <= border`) while the mechanism reaches everything
/// (`max horizon <= k_eff`). Only then does task success cleanly attribute to
/// the mechanism. Both inequalities are checked over the whole profile; a
/// failed verdict reports every violated one.
pub fn validate_mechanism_experiment(
    context: &ContextSpec,
    profile: &HorizonProfile,
) -> Result<MechanismCheck> {
    if !profile.is_memory_intensive() {
        return Err(Error::NotMemoryIntensive {
            min_horizon: profile.min_horizon(),
        });
    }
    let border = profile.context_memory_border();
    let max = profile.max_horizon();
    let mut violations = Vec::new();
    if context.k() > border {
        violations.push(MechanismViolation::ContextAboveBorder {
            k: context.k(),
            border,
        });
    }
    if max > context.k_eff() {
        violations.push(MechanismViolation::HorizonBeyondEffective {
            max_horizon: max,
            k_eff: context.k_eff(),
        });
    }
    Ok(MechanismCheck { violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(h: &[u32]) -> HorizonProfile {
        HorizonProfile::new(h.iter().copied()).unwrap()
    }

    #[test]
    fn context_spec_invariants() {
        assert!(ContextSpec::new(0, 5).is_err());
        assert!(ContextSpec::new(5, 4).is_err());
        let c = ContextSpec::new(4, 11).unwrap();
        assert!(c.has_mechanism());
        assert!(!ContextSpec::window(4).unwrap().has_mechanism());
    }

    #[test]
    fn classify_triptych() {
        // Window as long as the horizon: pure short-term test.
        assert_eq!(
            classify_context(15, &profile(&[15])).unwrap(),
            MemoryTaskClass::StmOnly
        );
        // Window well short of the horizon: pure long-term test.
        assert_eq!(
            classify_context(5, &profile(&[15])).unwrap(),
            MemoryTaskClass::LtmOnly
        );
        // Same short window on a task whose horizon matches it: short-term again.
        assert_eq!(
            classify_context(5, &profile(&[5])).unwrap(),
            MemoryTaskClass::StmOnly
        );
    }

    #[test]
    fn classify_mixed_band() {
        let p = HorizonProfile::range_inclusive(7, 22).unwrap();
        assert_eq!(classify_context(14, &p).unwrap(), MemoryTaskClass::Mixed);
        // Boundaries: the border itself is still LTM-only, the max horizon is
        // already STM-only.
        assert_eq!(classify_context(6, &p).unwrap(), MemoryTaskClass::LtmOnly);
        assert_eq!(classify_context(7, &p).unwrap(), MemoryTaskClass::Mixed);
        assert_eq!(classify_context(21, &p).unwrap(), MemoryTaskClass::Mixed);
        assert_eq!(classify_context(22, &p).unwrap(), MemoryTaskClass::StmOnly);
    }

    #[test]
    fn single_horizon_has_no_mixed_band() {
        let p = profile(&[11]);
        for k in 1..=10 {
            assert_eq!(classify_context(k, &p).unwrap(), MemoryTaskClass::LtmOnly);
        }
        for k in 11..=30 {
            assert_eq!(classify_context(k, &p).unwrap(), MemoryTaskClass::StmOnly);
        }
        assert_eq!(context_intervals(&p).unwrap().mixed, None);
    }

    #[test]
    fn classify_refuses_non_memory_intensive() {
        let p = profile(&[1, 1]);
        assert!(matches!(
            classify_context(3, &p).unwrap_err(),
            Error::NotMemoryIntensive { min_horizon: 1 }
        ));
    }

    #[test]
    fn intervals_for_range_profile() {
        let iv = context_intervals(&HorizonProfile::range_inclusive(7, 22).unwrap()).unwrap();
        assert_eq!(iv.border, 6);
        assert_eq!(iv.mixed, Some((6, 22)));
        assert_eq!(iv.stm_min, 22);
    }

    #[test]
    fn mechanism_condition() {
        let p = profile(&[11]);
        let ok = validate_mechanism_experiment(&ContextSpec::new(4, 12).unwrap(), &p).unwrap();
        assert!(ok.is_valid());

        let short = validate_mechanism_experiment(&ContextSpec::new(4, 8).unwrap(), &p).unwrap();
        assert_eq!(
            short.violations(),
            &[MechanismViolation::HorizonBeyondEffective {
                max_horizon: 11,
                k_eff: 8
            }]
        );

        let wide = validate_mechanism_experiment(&ContextSpec::new(12, 20).unwrap(), &p).unwrap();
        assert_eq!(
            wide.violations(),
            &[MechanismViolation::ContextAboveBorder { k: 12, border: 10 }]
        );

        // Both inequalities can fail at once.
        let both =
            validate_mechanism_experiment(&ContextSpec::new(12, 12).unwrap(), &profile(&[11, 40]))
                .unwrap();
        assert_eq!(both.violations().len(), 2);
    }

    #[test]
    fn valid_mechanism_implies_clean_classes() {
        // The two inequalities are exactly "k is LTM-only" and "k_eff is
        // STM-only"; spot-check the implication on a handful of profiles.
        for (k, k_eff, horizons) in [
            (4u32, 12u32, vec![11u32]),
            (6, 22, vec![7, 12, 22]),
            (1, 2, vec![2]),
        ] {
            let p = profile(&horizons);
            let check =
                validate_mechanism_experiment(&ContextSpec::new(k, k_eff).unwrap(), &p).unwrap();
            assert!(check.is_valid());
            assert_eq!(classify_context(k, &p).unwrap(), MemoryTaskClass::LtmOnly);
            assert_eq!(
                classify_context(k_eff, &p).unwrap(),
                MemoryTaskClass::StmOnly
            );
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn mi_profile() -> impl Strategy<Value = HorizonProfile> {
            proptest::collection::vec(2u32..300, 1..10)
                .prop_map(|v| HorizonProfile::new(v).unwrap())
        }

        proptest! {
            #[test]
            fn class_is_monotone_in_k(profile in mi_profile(), k in 1u32..399) {
                let rank = |c: MemoryTaskClass| match c {
                    MemoryTaskClass::LtmOnly => 0,
                    MemoryTaskClass::Mixed => 1,
                    MemoryTaskClass::StmOnly => 2,
                };
                let here = rank(classify_context(k, &profile).unwrap());
                let next = rank(classify_context(k + 1, &profile).unwrap());
                prop_assert!(here <= next, "class went backwards at k={}", k);
            }

            #[test]
            fn mechanism_check_matches_the_two_inequalities(
                profile in mi_profile(),
                k in 1u32..400,
                extra in 0u32..400,
            ) {
                let spec = ContextSpec::new(k, k + extra).unwrap();
                let check = validate_mechanism_experiment(&spec, &profile).unwrap();
                let sound = k <= profile.context_memory_border()
                    && profile.max_horizon() <= k + extra;
                prop_assert_eq!(check.is_valid(), sound);
            }

            // Two independent renderings of the same partition: the per-k
            // classifier and the interval report must agree everywhere, and
            // every k must land in exactly one band.
            #[test]
            fn intervals_agree_with_classifier(profile in mi_profile()) {
                let iv = context_intervals(&profile).unwrap();
                for k in 1..=(profile.max_horizon() + 5) {
                    let class = classify_context(k, &profile).unwrap();
                    let in_ltm = k <= iv.border;
                    let in_mixed = iv.mixed.is_some_and(|(lo, hi)| k > lo && k < hi);
                    let in_stm = k >= iv.stm_min;
                    prop_assert_eq!(
                        u32::from(in_ltm) + u32::from(in_mixed) + u32::from(in_stm),
                        1,
                        "k={} lands in {} bands", k,
                        u32::from(in_ltm) + u32::from(in_mixed) + u32::from(in_stm)
                    );
                    let expected = if in_ltm {
                        MemoryTaskClass::LtmOnly
                    } else if in_mixed {
                        MemoryTaskClass::Mixed
                    } else {
                        MemoryTaskClass::StmOnly
                    };
                    prop_assert_eq!(class, expected, "k={}", k);
                }
            }
        }
    }
}
