//! Tabular batch reinforcement learning.
//!
//! Learns a state-action table from batches of `(state, action, reward,
//! next_state)` experience using Q-learning with experience replay. Experience
//! comes either from a CSV file or from an [`Environment`] sampled at random or
//! ε-greedily against an existing model. Learned tables can be checked against
//! the Bellman fixed point computed by value iteration on an explicit MDP.
//!
//! ```no_run
//! use batchrl::{envs::Gridworld, learner, sampling, ControlParams, SelectionMode};
//!
//! let env = Gridworld::new();
//! let batch = sampling::sample_experience(1000, &env, SelectionMode::Random, None, None, 42)?;
//! let model = learner::learn(&batch, ControlParams::default(), 1, 7, None)?;
//! println!("{}", batchrl::persist::format_report(&model, batchrl::persist::Verbosity::Table));
//! # Ok::<(), batchrl::Error>(())
//! ```

pub mod cli;
pub mod curve;
pub mod domain;
pub mod envs;
mod error;
pub mod learner;
pub mod model;
pub mod oracle;
pub mod persist;
pub mod qtable;
pub mod sampling;

pub use domain::{ActionId, ControlParams, ExperienceTuple, StateId};
pub use envs::{EnvResponse, Environment};
pub use error::{Error, Result};
pub use model::RLModel;
pub use qtable::{Policy, QTable};
pub use sampling::SelectionMode;
