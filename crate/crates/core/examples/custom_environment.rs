//! Author a new environment and train on it.
//!
//! Any type implementing [`Environment`] can be sampled. Deterministic worlds
//! can also be written as a closure with [`FnEnvironment`]. Providing
//! `transitions` unlocks the exact value-iteration oracle.
//!
//! ```bash
//! cargo run --example custom_environment
//! ```

use batchrl::envs::FnEnvironment;
use batchrl::learner::learn;
use batchrl::oracle::{value_iteration, ExplicitMDP};
use batchrl::sampling::{sample_experience, SelectionMode};
use batchrl::{ActionId, ControlParams, EnvResponse, Environment, StateId};
use rand::{Rng, RngCore};

/// A corridor of five cells. Reaching the right end pays 5; a slippery floor
/// moves the agent the wrong way one time in five.
struct Corridor {
    states: Vec<StateId>,
    actions: Vec<ActionId>,
}

impl Corridor {
    const SLIP: f64 = 0.2;

    fn new() -> batchrl::Result<Self> {
        Ok(Self {
            states: (0..5).map(|i| StateId::new(format!("c{i}"))).collect::<Result<_, _>>()?,
            actions: vec![ActionId::new("left")?, ActionId::new("right")?],
        })
    }

    fn index(&self, state: &StateId) -> usize {
        self.states.iter().position(|s| s == state).expect("known state")
    }

    fn land(&self, from: usize, step: isize) -> batchrl::Result<EnvResponse> {
        let to = (from as isize + step).clamp(0, 4) as usize;
        let reward = if to == 4 && from != 4 { 5.0 } else { -0.1 };
        EnvResponse::new(self.states[to].clone(), reward)
    }

    fn direction(action: &ActionId) -> isize {
        if action.as_str() == "right" {
            1
        } else {
            -1
        }
    }
}

impl Environment for Corridor {
    fn name(&self) -> &str {
        "corridor"
    }

    fn states(&self) -> &[StateId] {
        &self.states
    }

    fn actions(&self) -> &[ActionId] {
        &self.actions
    }

    fn step(&self, state: &StateId, action: &ActionId, rng: &mut dyn RngCore) -> batchrl::Result<EnvResponse> {
        let dir = Self::direction(action);
        let dir = if rng.gen::<f64>() < Self::SLIP { -dir } else { dir };
        self.land(self.index(state), dir)
    }

    fn transitions(&self, state: &StateId, action: &ActionId) -> Option<batchrl::Result<Vec<(f64, EnvResponse)>>> {
        let from = self.index(state);
        let dir = Self::direction(action);
        Some((|| {
            Ok(vec![
                (1.0 - Self::SLIP, self.land(from, dir)?),
                (Self::SLIP, self.land(from, -dir)?),
            ])
        })())
    }
}

fn main() -> batchrl::Result<()> {
    // Closure-based: a two-state coin that pays 1 for landing heads.
    let coin = FnEnvironment::new("coin", ["heads", "tails"], ["flip", "stay"], |s, a| {
        let next = match (s.as_str(), a.as_str()) {
            ("heads", "flip") => "tails",
            ("tails", "flip") => "heads",
            (other, _) => other,
        };
        EnvResponse::new(StateId::new(next)?, if next == "heads" { 1.0 } else { 0.0 })
    })?;
    let batch = sample_experience(200, &coin, SelectionMode::Random, None, None, 3)?;
    let model = learn(&batch, ControlParams::new(0.2, 0.9, 0.1)?, 100, 3, None)?;
    println!("coin policy: {:?}", model.policy().iter().collect::<Vec<_>>());

    // Trait-based with an exact model.
    let corridor = Corridor::new()?;
    let control = ControlParams::new(0.05, 0.9, 0.1)?;
    let batch = sample_experience(5000, &corridor, SelectionMode::Random, None, None, 4)?;
    let model = learn(&batch, control, 50, 4, None)?;
    let exact = value_iteration(&ExplicitMDP::from_environment(&corridor)?, 0.9, 1e-9)?;
    for s in corridor.states() {
        println!(
            "{s}: learned {} ({:.3})  exact {} ({:.3})",
            model.predict(s.as_str())?,
            model.q().max_value(s.as_str()),
            exact.greedy_action(s.as_str())?,
            exact.max_value(s.as_str()),
        );
    }
    Ok(())
}
