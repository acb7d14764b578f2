use crate::domain::ControlParams;
use crate::error::{Error, Result};
use crate::qtable::{Policy, QTable};

/// Tag recorded on every model produced by the replay learner.
pub const LEARNING_RULE: &str = "experienceReplay";

/// A learned table together with its greedy policy and training history.
#[derive(Debug, Clone, PartialEq)]
pub struct RLModel {
    q: QTable,
    policy: Policy,
    control: ControlParams,
    reward_history: Vec<f64>,
}

impl RLModel {
    /// Untrained model over `q`.
    pub fn new(q: QTable, control: ControlParams) -> Result<Self> {
        Self::from_parts(q, control, Vec::new())
    }

    /// Reassembles a model, recomputing the policy from `q`.
    pub fn from_parts(q: QTable, control: ControlParams, reward_history: Vec<f64>) -> Result<Self> {
        if let Some(bad) = reward_history.iter().find(|r| !r.is_finite()) {
            return Err(Error::NonFinite(*bad));
        }
        let policy = if q.actions().is_empty() && q.states().is_empty() {
            Policy::default()
        } else {
            q.policy()?
        };
        Ok(Self {
            q,
            policy,
            control,
            reward_history,
        })
    }

    pub fn q(&self) -> &QTable {
        &self.q
    }

    pub fn policy(&self) -> &Policy {
        &self.policy
    }

    pub fn control(&self) -> ControlParams {
        self.control
    }

    pub fn iterations_completed(&self) -> usize {
        self.reward_history.len()
    }

    /// Total batch reward recorded for each learning iteration.
    pub fn reward_history(&self) -> &[f64] {
        &self.reward_history
    }

    pub fn learning_rule(&self) -> &'static str {
        LEARNING_RULE
    }

    /// Reward of the most recent iteration.
    pub fn last_reward(&self) -> Option<f64> {
        self.reward_history.last().copied()
    }

    /// Best action for `state` under the stored policy.
    pub fn predict(&self, state: &str) -> Result<&crate::ActionId> {
        self.policy.action(state)
    }

    pub(crate) fn into_parts(self) -> (QTable, Vec<f64>) {
        (self.q, self.reward_history)
    }
}
