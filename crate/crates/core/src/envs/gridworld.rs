use rand::RngCore;

use super::{EnvResponse, Environment};
use crate::domain::{ActionId, StateId};
use crate::error::{Error, Result};

const STATES: [&str; 4] = ["s1", "s2", "s3", "s4"];
const ACTIONS: [&str; 4] = ["up", "down", "left", "right"];

/// The 2x2 maze:
///
/// ```text
/// +----+----+
/// | s1 | s4 |
/// +    +----+
/// | s2   s3 |
/// +---------+
/// ```
///
/// A wall separates s1 from s4, so the goal s4 is only reachable by moving up
/// from s3. Every move costs -1; entering s4 from elsewhere pays +10. Moves
/// into walls leave the agent in place. s4 absorbs: all of its actions
/// self-loop at -1.
pub fn gridworld_step(state: &str, action: &str) -> Result<EnvResponse> {
    if !STATES.contains(&state) {
        return Err(Error::UnknownState(state.to_owned()));
    }
    if !ACTIONS.contains(&action) {
        return Err(Error::UnknownAction(action.to_owned()));
    }
    let next = match (state, action) {
        ("s1", "down") => "s2",
        ("s2", "up") => "s1",
        ("s2", "right") => "s3",
        ("s3", "left") => "s2",
        ("s3", "up") => "s4",
        (same, _) => same,
    };
    let reward = if next == "s4" && state != "s4" { 10.0 } else { -1.0 };
    EnvResponse::new(StateId::new(next)?, reward)
}

#[derive(Debug, Clone)]
pub struct Gridworld {
    states: Vec<StateId>,
    actions: Vec<ActionId>,
}

impl Gridworld {
    pub const NAME: &'static str = "gridworld-2x2";

    pub fn new() -> Self {
        Self {
            states: STATES.iter().map(|s| StateId::new(*s).unwrap()).collect(),
            actions: ACTIONS.iter().map(|a| ActionId::new(*a).unwrap()).collect(),
        }
    }
}

impl Default for Gridworld {
    fn default() -> Self {
        Self::new()
    }
}

impl Environment for Gridworld {
    fn name(&self) -> &str {
        Self::NAME
    }

    fn states(&self) -> &[StateId] {
        &self.states
    }

    fn actions(&self) -> &[ActionId] {
        &self.actions
    }

    fn step(&self, state: &StateId, action: &ActionId, _rng: &mut dyn RngCore) -> Result<EnvResponse> {
        gridworld_step(state.as_str(), action.as_str())
    }

    fn transitions(&self, state: &StateId, action: &ActionId) -> Option<Result<Vec<(f64, EnvResponse)>>> {
        Some(gridworld_step(state.as_str(), action.as_str()).map(|r| vec![(1.0, r)]))
    }
}
