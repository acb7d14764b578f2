use rand::RngCore;

use super::{EnvResponse, Environment};
use crate::domain::{ActionId, StateId};
use crate::error::Result;

/// Deterministic environment backed by a plain function of `(state, action)`.
///
/// ```
/// use batchrl::{envs::{EnvResponse, FnEnvironment}, StateId};
///
/// let coin = FnEnvironment::new(
///     "coin",
///     ["heads", "tails"],
///     ["flip", "stay"],
///     |s, a| {
///         let next = match (s.as_str(), a.as_str()) {
///             ("heads", "flip") => "tails",
///             ("tails", "flip") => "heads",
///             (other, _) => other,
///         };
///         EnvResponse::new(StateId::new(next)?, if next == "heads" { 1.0 } else { 0.0 })
///     },
/// )?;
/// # Ok::<(), batchrl::Error>(())
/// ```
pub struct FnEnvironment<F> {
    name: String,
    states: Vec<StateId>,
    actions: Vec<ActionId>,
    step: F,
}

impl<F> FnEnvironment<F>
where
    F: Fn(&StateId, &ActionId) -> Result<EnvResponse>,
{
    pub fn new<S, A>(
        name: impl Into<String>,
        states: impl IntoIterator<Item = S>,
        actions: impl IntoIterator<Item = A>,
        step: F,
    ) -> Result<Self>
    where
        S: AsRef<str>,
        A: AsRef<str>,
    {
        Ok(Self {
            name: name.into(),
            states: states
                .into_iter()
                .map(|s| StateId::new(s.as_ref()))
                .collect::<Result<_>>()?,
            actions: actions
                .into_iter()
                .map(|a| ActionId::new(a.as_ref()))
                .collect::<Result<_>>()?,
            step,
        })
    }
}

impl<F> Environment for FnEnvironment<F>
where
    F: Fn(&StateId, &ActionId) -> Result<EnvResponse>,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn states(&self) -> &[StateId] {
        &self.states
    }

    fn actions(&self) -> &[ActionId] {
        &self.actions
    }

    fn step(&self, state: &StateId, action: &ActionId, _rng: &mut dyn RngCore) -> Result<EnvResponse> {
        (self.step)(state, action)
    }

    fn transitions(&self, state: &StateId, action: &ActionId) -> Option<Result<Vec<(f64, EnvResponse)>>> {
        Some((self.step)(state, action).map(|r| vec![(1.0, r)]))
    }
}
