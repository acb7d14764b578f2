//! Q-learning with experience replay over batches of transitions.
//!
//! Each replay pass visits every tuple of the batch once, in a fresh seeded
//! shuffle, applying
//!
//! ```text
//! Q(s, a) <- Q(s, a) + alpha * (r + gamma * max_a' Q(s', a') - Q(s, a))
//! ```
//!
//! States that only ever appear as `s'` keep an all-zero row, so they act as
//! terminal states with no future value.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{ActionId, ControlParams, ExperienceTuple, StateId};
use crate::error::{Error, Result};
use crate::model::RLModel;
use crate::qtable::QTable;

/// Random stream used by every seeded operation in this crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Outcome of one pass over a batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplayReport {
    pub total_reward: f64,
    pub tuples_processed: usize,
}

/// Applies one Q-learning update for `tuple`.
///
/// The tuple's state, action and next state are registered in the table if
/// missing; only the `(state, action)` value can change.
pub fn q_update(q: &mut QTable, tuple: &ExperienceTuple, alpha: f64, gamma: f64) -> Result<()> {
    if !tuple.reward.is_finite() {
        return Err(Error::NonFinite(tuple.reward));
    }
    for (name, v) in [("alpha", alpha), ("gamma", gamma)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::ParamOutOfRange { name, value: v });
        }
    }
    q.ensure_state(&tuple.next_state);
    let s = q.ensure_state(&tuple.state);
    let a = q.ensure_action(&tuple.action);
    let current = q.value_at(s, a);
    let target = tuple.reward + gamma * q.max_value(tuple.next_state.as_str());
    let updated = current + alpha * (target - current);
    if !updated.is_finite() {
        return Err(Error::NonFinite(updated));
    }
    q.set_at(s, a, updated);
    Ok(())
}

/// Replays the whole batch once in a uniformly shuffled order.
pub fn replay_pass<R: Rng + ?Sized>(
    q: &mut QTable,
    batch: &[ExperienceTuple],
    control: ControlParams,
    rng: &mut R,
) -> Result<ReplayReport> {
    let mut order: Vec<usize> = (0..batch.len()).collect();
    order.shuffle(rng);
    for idx in order {
        q_update(q, &batch[idx], control.alpha(), control.gamma())?;
    }
    Ok(ReplayReport {
        total_reward: batch_reward(batch),
        tuples_processed: batch.len(),
    })
}

/// Sum of rewards in batch order.
pub fn batch_reward(batch: &[ExperienceTuple]) -> f64 {
    batch.iter().map(|t| t.reward).sum()
}

/// Zero table over the distinct states (including next states) and actions
/// of `batch`, both sorted.
pub fn table_for_batch(batch: &[ExperienceTuple]) -> QTable {
    let (states, actions) = batch_labels(batch);
    QTable::new(states, actions)
}

fn batch_labels(batch: &[ExperienceTuple]) -> (BTreeSet<StateId>, BTreeSet<ActionId>) {
    let mut states = BTreeSet::new();
    let mut actions = BTreeSet::new();
    for t in batch {
        states.insert(t.state.clone());
        states.insert(t.next_state.clone());
        actions.insert(t.action.clone());
    }
    (states, actions)
}

/// Trains a model on `batch` with `iterations` replay passes.
///
/// With a `prior`, learning continues from its table: states and actions not
/// seen before are appended (in sorted order) with zero values, and the new
/// per-iteration rewards extend the prior history.
pub fn learn(
    batch: &[ExperienceTuple],
    control: ControlParams,
    iterations: usize,
    seed: u64,
    prior: Option<&RLModel>,
) -> Result<RLModel> {
    if batch.is_empty() {
        return Err(Error::NoTrainingData);
    }
    if iterations == 0 {
        return Err(Error::ZeroIterations);
    }
    let (mut q, mut history) = match prior {
        Some(model) => {
            let (mut q, history) = model.clone().into_parts();
            let (states, actions) = batch_labels(batch);
            for s in &states {
                q.ensure_state(s);
            }
            for a in &actions {
                q.ensure_action(a);
            }
            (q, history)
        }
        None => (table_for_batch(batch), Vec::new()),
    };
    let mut rng = rng_from_seed(seed);
    history.reserve(iterations);
    for _ in 0..iterations {
        let report = replay_pass(&mut q, batch, control, &mut rng)?;
        history.push(report.total_reward);
    }
    RLModel::from_parts(q, control, history)
}

/// Continues training `model` on fresh experience.
pub fn update_model(
    model: &RLModel,
    new_batch: &[ExperienceTuple],
    control: ControlParams,
    iterations: usize,
    seed: u64,
) -> Result<RLModel> {
    learn(new_batch, control, iterations, seed, Some(model))
}

/// ε-greedy selection: a uniform draw from the whole action set with
/// probability `epsilon`, the greedy action otherwise.
pub fn epsilon_greedy<'q, R: Rng + ?Sized>(
    q: &'q QTable,
    state: &str,
    epsilon: f64,
    rng: &mut R,
) -> Result<&'q ActionId> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::ParamOutOfRange {
            name: "epsilon",
            value: epsilon,
        });
    }
    let actions = q.actions();
    if actions.is_empty() {
        return Err(Error::NoActions);
    }
    if rng.gen::<f64>() < epsilon {
        Ok(&actions[rng.gen_range(0..actions.len())])
    } else {
        q.greedy_action(state)
    }
}
