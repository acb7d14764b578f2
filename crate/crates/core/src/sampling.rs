//! Drawing experience batches from an [`Environment`].

use rand::Rng;

use crate::domain::{ControlParams, ExperienceTuple};
use crate::envs::Environment;
use crate::error::{Error, Result};
use crate::learner::{epsilon_greedy, rng_from_seed};
use crate::model::RLModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMode {
    /// Uniform over the environment's actions.
    Random,
    /// ε-greedy against an existing model.
    EpsilonGreedy,
}

impl std::str::FromStr for SelectionMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "random" => Ok(SelectionMode::Random),
            "epsilon-greedy" => Ok(SelectionMode::EpsilonGreedy),
            other => Err(format!("unknown selection mode {other:?} (expected random or epsilon-greedy)")),
        }
    }
}

/// Samples `n` independent transitions.
///
/// Each tuple starts from a state drawn uniformly from `env.states()`; there
/// are no trajectories. In ε-greedy mode the action comes from the model's
/// table with `control.epsilon()` (the model's own control when `control` is
/// `None`).
pub fn sample_experience(
    n: usize,
    env: &dyn Environment,
    mode: SelectionMode,
    model: Option<&RLModel>,
    control: Option<ControlParams>,
    seed: u64,
) -> Result<Vec<ExperienceTuple>> {
    if n == 0 {
        return Err(Error::ZeroSamples);
    }
    let greedy = match mode {
        SelectionMode::Random => None,
        SelectionMode::EpsilonGreedy => {
            let model = model.ok_or(Error::ModelRequired)?;
            let epsilon = control.unwrap_or_else(|| model.control()).epsilon();
            Some((model, epsilon))
        }
    };
    let states = env.states();
    let actions = env.actions();
    if states.is_empty() {
        return Err(Error::UnknownState("<empty state set>".into()));
    }
    if actions.is_empty() {
        return Err(Error::NoActions);
    }
    let mut rng = rng_from_seed(seed);
    let mut batch = Vec::with_capacity(n);
    for _ in 0..n {
        let state = &states[rng.gen_range(0..states.len())];
        let action = match greedy {
            None => actions[rng.gen_range(0..actions.len())].clone(),
            Some((model, epsilon)) => epsilon_greedy(model.q(), state.as_str(), epsilon, &mut rng)?.clone(),
        };
        let response = env.step(state, &action, &mut rng)?;
        batch.push(ExperienceTuple::new(
            state.clone(),
            action,
            response.reward,
            response.next_state,
        )?);
    }
    Ok(batch)
}
