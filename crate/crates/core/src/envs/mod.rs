//! Environments that experience can be sampled from.
//!
//! An environment maps a `(state, action)` pair to the next state and a
//! reward. Stochastic environments draw from the random stream passed to
//! [`Environment::step`]; deterministic ones ignore it. Environments that can
//! enumerate their outcome distribution also implement
//! [`Environment::transitions`], which lets the value-iteration oracle build an
//! exact model of them.

use rand::RngCore;

use crate::domain::{ActionId, StateId};
use crate::error::{Error, Result};

mod function;
mod gridworld;
pub mod tictactoe;

pub use function::FnEnvironment;
pub use gridworld::{gridworld_step, Gridworld};
pub use tictactoe::TicTacToe;

/// Next state and reward produced by one environment step.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvResponse {
    pub next_state: StateId,
    pub reward: f64,
}

impl EnvResponse {
    pub fn new(next_state: StateId, reward: f64) -> Result<Self> {
        if !reward.is_finite() {
            return Err(Error::NonFinite(reward));
        }
        Ok(Self { next_state, reward })
    }
}

pub trait Environment {
    /// Registered name, e.g. `gridworld-2x2`.
    fn name(&self) -> &str;

    fn states(&self) -> &[StateId];

    fn actions(&self) -> &[ActionId];

    fn step(&self, state: &StateId, action: &ActionId, rng: &mut dyn RngCore) -> Result<EnvResponse>;

    /// Full outcome distribution of `(state, action)` as `(probability, response)`
    /// pairs, when the environment can enumerate it.
    fn transitions(&self, _state: &StateId, _action: &ActionId) -> Option<Result<Vec<(f64, EnvResponse)>>> {
        None
    }
}

/// Names accepted by [`by_name`].
pub const REGISTERED: [&str; 2] = [Gridworld::NAME, TicTacToe::NAME];

pub fn by_name(name: &str) -> Result<Box<dyn Environment>> {
    match name {
        Gridworld::NAME => Ok(Box::new(Gridworld::new())),
        TicTacToe::NAME => Ok(Box::new(TicTacToe::new())),
        other => Err(Error::UnknownEnvironment(other.to_owned())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        for name in REGISTERED {
            assert_eq!(by_name(name).unwrap().name(), name);
        }
        assert!(matches!(by_name("mountain-car"), Err(Error::UnknownEnvironment(_))));
    }
}
