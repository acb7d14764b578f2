//! State-action value storage and greedy policy extraction.

use indexmap::{IndexMap, IndexSet};

use crate::domain::{ActionId, StateId};
use crate::error::{Error, Result};

/// Dense `states × actions` table of Q-values.
///
/// Every pair over the known state and action sets holds exactly one value,
/// zero until written. Lookups of pairs outside those sets return 0 and leave
/// the table untouched.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QTable {
    states: IndexSet<StateId>,
    actions: IndexSet<ActionId>,
    // row-major, one row per state
    values: Vec<f64>,
}

impl QTable {
    /// Zero-initialized table over the given sets. Duplicates keep their first position.
    pub fn new(
        states: impl IntoIterator<Item = StateId>,
        actions: impl IntoIterator<Item = ActionId>,
    ) -> Self {
        let states: IndexSet<StateId> = states.into_iter().collect();
        let actions: IndexSet<ActionId> = actions.into_iter().collect();
        let values = vec![0.0; states.len() * actions.len()];
        Self {
            states,
            actions,
            values,
        }
    }

    /// Builds a table from explicit rows, one per state in `states` order.
    pub fn from_rows(states: Vec<StateId>, actions: Vec<ActionId>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let mut table = Self::new(states, actions);
        if rows.len() != table.states.len() {
            return Err(Error::MalformedModel(format!(
                "{} rows for {} states",
                rows.len(),
                table.states.len()
            )));
        }
        let width = table.actions.len();
        let mut values = Vec::with_capacity(rows.len() * width);
        for row in rows {
            if row.len() != width {
                return Err(Error::MalformedModel(format!(
                    "row of {} values for {} actions",
                    row.len(),
                    width
                )));
            }
            if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::NonFinite(*bad));
            }
            values.extend(row);
        }
        table.values = values;
        Ok(table)
    }

    pub fn states(&self) -> &IndexSet<StateId> {
        &self.states
    }

    pub fn actions(&self) -> &IndexSet<ActionId> {
        &self.actions
    }

    pub fn contains_state(&self, state: &str) -> bool {
        self.states.contains(state)
    }

    /// Values for one state in action-set order, if the state is known.
    pub fn row(&self, state: &str) -> Option<&[f64]> {
        let idx = self.states.get_index_of(state)?;
        let width = self.actions.len();
        Some(&self.values[idx * width..(idx + 1) * width])
    }

    pub fn q_value(&self, state: &str, action: &str) -> f64 {
        match (self.states.get_index_of(state), self.actions.get_index_of(action)) {
            (Some(s), Some(a)) => self.values[s * self.actions.len() + a],
            _ => 0.0,
        }
    }

    /// Writes one value, registering the state or action if it is new.
    pub fn set(&mut self, state: &StateId, action: &ActionId, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFinite(value));
        }
        let s = self.ensure_state(state);
        let a = self.ensure_action(action);
        let width = self.actions.len();
        self.values[s * width + a] = value;
        Ok(())
    }

    /// Index of `state`, appending a zero row if it was unknown.
    pub fn ensure_state(&mut self, state: &StateId) -> usize {
        if let Some(idx) = self.states.get_index_of(state) {
            return idx;
        }
        self.states.insert(state.clone());
        self.values.extend(std::iter::repeat_n(0.0, self.actions.len()));
        self.states.len() - 1
    }

    /// Index of `action`, appending a zero column if it was unknown.
    pub fn ensure_action(&mut self, action: &ActionId) -> usize {
        if let Some(idx) = self.actions.get_index_of(action) {
            return idx;
        }
        let old_width = self.actions.len();
        self.actions.insert(action.clone());
        let mut values = Vec::with_capacity(self.states.len() * (old_width + 1));
        for row in self.values.chunks(old_width.max(1)).take(self.states.len()) {
            values.extend_from_slice(&row[..old_width]);
            values.push(0.0);
        }
        if old_width == 0 {
            values = vec![0.0; self.states.len()];
        }
        self.values = values;
        old_width
    }

    pub(crate) fn value_at(&self, s: usize, a: usize) -> f64 {
        self.values[s * self.actions.len() + a]
    }

    pub(crate) fn set_at(&mut self, s: usize, a: usize, value: f64) {
        let width = self.actions.len();
        self.values[s * width + a] = value;
    }

    /// `max_a Q(state, a)` over the full action set; 0 for unknown states or no actions.
    pub fn max_value(&self, state: &str) -> f64 {
        match self.row(state) {
            Some(row) if !row.is_empty() => row.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            _ => 0.0,
        }
    }

    /// Action with the highest value in `state`, ties going to the earliest
    /// action in the action set. Unknown states have an all-zero row.
    pub fn greedy_action(&self, state: &str) -> Result<&ActionId> {
        if self.actions.is_empty() {
            return Err(Error::NoActions);
        }
        let idx = match self.row(state) {
            Some(row) => argmax_first(row),
            None => 0,
        };
        Ok(&self.actions[idx])
    }

    /// Greedy action for every known state.
    pub fn policy(&self) -> Result<Policy> {
        let mut map = IndexMap::with_capacity(self.states.len());
        for state in &self.states {
            map.insert(state.clone(), self.greedy_action(state.as_str())?.clone());
        }
        Ok(Policy { map })
    }
}

/// Index of the first maximal element.
pub(crate) fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Greedy action per state, in the state order of the table it came from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Policy {
    map: IndexMap<StateId, ActionId>,
}

impl Policy {
    pub fn action(&self, state: &str) -> Result<&ActionId> {
        self.map
            .get(state)
            .ok_or_else(|| Error::UnknownState(state.to_owned()))
    }

    pub fn get(&self, state: &str) -> Option<&ActionId> {
        self.map.get(state)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StateId, &ActionId)> {
        self.map.iter()
    }
}

impl FromIterator<(StateId, ActionId)> for Policy {
    fn from_iter<I: IntoIterator<Item = (StateId, ActionId)>>(iter: I) -> Self {
        Self {
            map: iter.into_iter().collect(),
        }
    }
}
