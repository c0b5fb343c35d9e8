//! Grid-maze memory task.
//!
//! A vertical corridor leads up to a T-junction whose two arm cells hold one
//! object each (codes `object_pair`, in seed-dependent arrangement). A
//! one-cell object room sits beside the corridor base and holds a copy of one
//! of the two objects: the clue. The agent starts at the corridor base facing
//! the junction, with the object room cell inside its initial view, walks the
//! corridor, and must step onto the junction arm holding the matching object.
//!
//! ```text
//!   #####
//!   #A.B#   junction row: arm, junction, arm
//!   #.|.#
//!    ...    corridor, length l
//!   #C^.#   base row: object room C beside the start cell
//!   #####
//! ```
//!
//! Fixed mode uses corridor length `l = map_size` every episode; variable
//! mode resamples `l` between [`MIN_VARIABLE_CORRIDOR`] and `map_size` per
//! episode. Seeing the clue at step 0 and deciding at the junction `l` steps
//! later gives one event-recall pair per episode with horizon `l + 1`, so the
//! profile is `{map_size + 1}` fixed or `{7 .. map_size + 1}` variable.
//!
//! Observation channels: `[heading, v0, .., v8]`: heading 0..3, then the
//! 3x3 egocentric view row-major from the far row to the agent's own row,
//! rotated so "ahead" is always the top row. Cell codes: 0 floor, 1 wall,
//! object codes as configured.
//!
//! Success ends the episode with reward `1 - 0.9 * t / T`; stepping onto the
//! wrong object or exhausting the `time_limit` ends it with 0.

use serde::{Deserialize, Serialize};

use crate::envs::{ClueDetector, Environment, Obs, Step};
use crate::error::{Error, Result};
use crate::memory::HorizonProfile;

/// Shortest corridor variable mode will sample; its horizon `7` is the lower
/// end of the variable-mode profile.
pub const MIN_VARIABLE_CORRIDOR: u32 = 6;

const VIEW: usize = 3;
const FLOOR: i16 = 0;
const WALL: i16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorridorMode {
    Fixed,
    Variable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinigridConfig {
    /// Corridor length in fixed mode and the upper sampling bound in variable
    /// mode. Odd, at least 3 (at least 7 for variable mode).
    pub map_size: u32,
    #[serde(default = "default_mode")]
    pub corridor_mode: CorridorMode,
    #[serde(default = "default_time_limit")]
    pub time_limit: u32,
    /// Cell codes of the two candidate objects; 0 and 1 are reserved.
    #[serde(default = "default_objects")]
    pub object_pair: (i16, i16),
}

fn default_mode() -> CorridorMode {
    CorridorMode::Fixed
}

fn default_time_limit() -> u32 {
    95
}

fn default_objects() -> (i16, i16) {
    (2, 3)
}

impl Default for MinigridConfig {
    fn default() -> Self {
        Self {
            map_size: 21,
            corridor_mode: CorridorMode::Fixed,
            time_limit: default_time_limit(),
            object_pair: default_objects(),
        }
    }
}

impl MinigridConfig {
    pub fn validate(&self) -> Result<()> {
        let l = self.map_size;
        if l < 3 || l.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "minigrid map size must be an odd integer of at least 3, got {l}"
            )));
        }
        if self.corridor_mode == CorridorMode::Variable && l < MIN_VARIABLE_CORRIDOR + 1 {
            return Err(Error::InvalidConfig(format!(
                "variable corridor mode needs map size of at least {}, got {l}",
                MIN_VARIABLE_CORRIDOR + 1
            )));
        }
        if self.time_limit < l + 3 {
            return Err(Error::InvalidConfig(format!(
                "time limit {} leaves no room to finish a corridor of length {l}",
                self.time_limit
            )));
        }
        let (a, b) = self.object_pair;
        if a == b || a < 2 || b < 2 {
            return Err(Error::InvalidConfig(format!(
                "object pair must be two distinct codes of at least 2, got ({a}, {b})"
            )));
        }
        Ok(())
    }
}

struct EpisodeState {
    grid: Vec<i16>, // row-major, 5 columns x (map_size + 3) rows
    x: i32,
    y: i32,
    dir: u8, // 0 up, 1 right, 2 down, 3 left
    t: u32,
    corridor_len: u32,
    clue: i16,
    done: bool,
}

pub struct Minigrid {
    config: MinigridConfig,
    state: Option<EpisodeState>,
}

// Forward first: the tabular agents break Q-ties toward index 0, and an
// agent that defaults to walking ahead explores corridors at a usable rate.
const FORWARD: usize = 0;
const TURN_LEFT: usize = 1;
const TURN_RIGHT: usize = 2;
const ACTION_NAMES: [&str; 3] = ["forward", "turn_left", "turn_right"];

const GRID_W: i32 = 5;
const CX: i32 = 2;

impl Minigrid {
    pub fn new(config: MinigridConfig) -> Self {
        Self {
            config,
            state: None,
        }
    }

    fn grid_h(&self) -> i32 {
        self.config.map_size as i32 + 3
    }

    fn cell(&self, x: i32, y: i32) -> i16 {
        if x < 0 || y < 0 || x >= GRID_W || y >= self.grid_h() {
            return WALL;
        }
        self.state.as_ref().unwrap().grid[(y * GRID_W + x) as usize]
    }

    fn observe(&self) -> Obs {
        let state = self.state.as_ref().expect("observe requires an episode");
        let (x, y, dir) = (state.x, state.y, state.dir);
        let mut channels = [0i16; 1 + VIEW * VIEW];
        channels[0] = dir as i16;
        for row in 0..VIEW {
            for col in 0..VIEW {
                let lateral = col as i32 - 1;
                let depth = 2 - row as i32;
                let (wx, wy) = match dir {
                    0 => (x + lateral, y - depth),
                    1 => (x + depth, y + lateral),
                    2 => (x - lateral, y + depth),
                    _ => (x - depth, y - lateral),
                };
                channels[1 + row * VIEW + col] = self.cell(wx, wy);
            }
        }
        Obs::from_slice(&channels)
    }

    fn arm_cells() -> [(i32, i32); 2] {
        [(CX - 1, 1), (CX + 1, 1)] // left, right
    }
}

impl Environment for Minigrid {
    fn name(&self) -> &'static str {
        "minigrid"
    }

    fn reset(&mut self, seed: u64) -> Obs {
        let (obj_a, obj_b) = self.config.object_pair;
        // Layout bits come straight from the seed so that contiguous
        // evaluation seed blocks cover clue and arrangement combinations
        // evenly: bit 0 picks the clue object, bit 1 the arm arrangement,
        // the remaining bits the corridor length in variable mode.
        let clue = if seed & 1 == 0 { obj_a } else { obj_b };
        let left_arm = if seed & 2 == 0 { obj_a } else { obj_b };
        let right_arm = if left_arm == obj_a { obj_b } else { obj_a };
        let corridor_len = match self.config.corridor_mode {
            CorridorMode::Fixed => self.config.map_size,
            CorridorMode::Variable => {
                let span = (self.config.map_size - MIN_VARIABLE_CORRIDOR + 1) as u64;
                MIN_VARIABLE_CORRIDOR + ((seed >> 2) % span) as u32
            }
        };

        let h = self.grid_h();
        let mut grid = vec![WALL; (GRID_W * h) as usize];
        let mut set = |x: i32, y: i32, v: i16| grid[(y * GRID_W + x) as usize] = v;
        let base = 1 + corridor_len as i32;
        for y in 1..=base {
            set(CX, y, FLOOR);
        }
        set(CX - 1, 1, left_arm);
        set(CX + 1, 1, right_arm);
        set(CX - 1, base, clue); // the object room beside the start cell

        self.state = Some(EpisodeState {
            grid,
            x: CX,
            y: base,
            dir: 0,
            t: 0,
            corridor_len,
            clue,
            done: false,
        });
        self.observe()
    }

    fn step(&mut self, action: usize) -> Result<Step> {
        if action >= 3 {
            return Err(Error::InvalidAction {
                action,
                num_actions: 3,
            });
        }
        let time_limit = self.config.time_limit;
        let grid_h = self.grid_h();
        let (reward, done, success) = {
            let state = self.state.as_mut().ok_or(Error::EpisodeNotStarted)?;
            if state.done {
                return Err(Error::EpisodeFinished);
            }
            state.t += 1;
            let mut reward = 0.0;
            let mut success = false;
            match action {
                TURN_LEFT => state.dir = (state.dir + 3) % 4,
                TURN_RIGHT => state.dir = (state.dir + 1) % 4,
                _ => {
                    debug_assert_eq!(action, FORWARD);
                    let (dx, dy) = match state.dir {
                        0 => (0, -1),
                        1 => (1, 0),
                        2 => (0, 1),
                        _ => (-1, 0),
                    };
                    let (tx, ty) = (state.x + dx, state.y + dy);
                    let in_bounds = tx >= 0 && ty >= 0 && tx < GRID_W && ty < grid_h;
                    let target = if in_bounds {
                        state.grid[(ty * GRID_W + tx) as usize]
                    } else {
                        WALL
                    };
                    let on_arm = Self::arm_cells().contains(&(tx, ty));
                    if on_arm {
                        state.done = true;
                        success = target == state.clue;
                        if success {
                            reward = 1.0 - 0.9 * f64::from(state.t) / f64::from(time_limit);
                        }
                        state.x = tx;
                        state.y = ty;
                    } else if target == FLOOR {
                        state.x = tx;
                        state.y = ty;
                    }
                    // Walls and the object room block without ending the step.
                }
            }
            if !state.done && state.t >= time_limit {
                state.done = true;
            }
            (reward, state.done, success)
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
        3
    }

    fn action_name(&self, action: usize) -> &'static str {
        ACTION_NAMES.get(action).copied().unwrap_or("?")
    }

    fn horizon_profile(&self) -> HorizonProfile {
        let top = self.config.map_size + 1;
        match self.config.corridor_mode {
            CorridorMode::Fixed => HorizonProfile::single(top),
            CorridorMode::Variable => {
                HorizonProfile::range_inclusive(MIN_VARIABLE_CORRIDOR + 1, top)
            }
        }
        .expect("validated config yields a non-empty profile")
    }

    fn episode_bound(&self) -> u32 {
        self.config.time_limit
    }

    fn clue_detector(&self) -> Option<ClueDetector> {
        Some(ClueDetector::SingleObjectCell {
            codes: self.config.object_pair,
            first_channel: 1,
        })
    }

    fn realized_horizon(&self) -> Option<u32> {
        self.state.as_ref().map(|s| s.corridor_len + 1)
    }
}
