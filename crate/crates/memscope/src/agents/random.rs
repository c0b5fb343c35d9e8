//! Uniform random baseline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::agents::Agent;
use crate::envs::{Obs, Step};
use crate::memory::ContextSpec;

pub struct RandomAgent {
    num_actions: usize,
    rng: ChaCha8Rng,
}

impl RandomAgent {
    pub fn new(num_actions: usize, seed: u64) -> Self {
        Self {
            num_actions,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Agent for RandomAgent {
    fn name(&self) -> String {
        "random".into()
    }

    fn context_spec(&self) -> ContextSpec {
        // It conditions on nothing, which for bookkeeping purposes is the
        // same as conditioning on the current observation only.
        ContextSpec::window(1).expect("1 is a valid context length")
    }

    fn begin_episode(&mut self, _obs: &Obs) {}

    fn act(&mut self, _epsilon: f64) -> usize {
        self.rng.gen_range(0..self.num_actions)
    }

    fn observe_transition(&mut self, _action: usize, _step: &Step, _learn: bool) {}
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_in_range_and_seeded() {
        let draw = |seed: u64| -> Vec<usize> {
            let mut agent = RandomAgent::new(3, seed);
            (0..50).map(|_| agent.act(0.0)).collect()
        };
        let a = draw(1);
        assert_eq!(a, draw(1));
        assert_ne!(a, draw(2));
        assert!(a.iter().all(|&x| x < 3));
        // All three actions show up in 50 draws.
        for target in 0..3 {
            assert!(a.contains(&target));
        }
    }
}
