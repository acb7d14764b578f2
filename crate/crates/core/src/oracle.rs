//! Model-based reference values.
//!
//! [`value_iteration`] solves an explicit finite MDP to its Bellman fixed
//! point; [`estimate_mdp`] turns an experience batch into the empirical MDP it
//! implies. Together they give an independent check on what the replay
//! learner should converge to.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexSet;

use crate::domain::{ActionId, ExperienceTuple, StateId};
use crate::envs::Environment;
use crate::error::{Error, Result};
use crate::qtable::QTable;

const STOCHASTIC_TOL: f64 = 1e-9;
const MAX_SWEEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub next: usize,
    pub probability: f64,
    pub reward: f64,
}

/// Finite MDP with a sparse transition model per `(state, action)`.
///
/// Pairs without an explicit model are zero-reward self-loops and count as
/// uncovered.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitMDP {
    states: IndexSet<StateId>,
    actions: IndexSet<ActionId>,
    outcomes: Vec<Vec<Transition>>,
    covered: Vec<bool>,
}

impl ExplicitMDP {
    pub fn new(
        states: impl IntoIterator<Item = StateId>,
        actions: impl IntoIterator<Item = ActionId>,
    ) -> Self {
        let states: IndexSet<StateId> = states.into_iter().collect();
        let actions: IndexSet<ActionId> = actions.into_iter().collect();
        let mut outcomes = Vec::with_capacity(states.len() * actions.len());
        for s in 0..states.len() {
            for _ in 0..actions.len() {
                outcomes.push(vec![Transition {
                    next: s,
                    probability: 1.0,
                    reward: 0.0,
                }]);
            }
        }
        let covered = vec![false; outcomes.len()];
        Self {
            states,
            actions,
            outcomes,
            covered,
        }
    }

    /// Exact model of an environment that can enumerate its outcomes.
    ///
    /// Next states outside `env.states()` are added as absorbing states.
    pub fn from_environment(env: &dyn Environment) -> Result<Self> {
        let mut rows = Vec::new();
        let mut states: IndexSet<StateId> = env.states().iter().cloned().collect();
        for s in env.states() {
            for a in env.actions() {
                let outcomes = env
                    .transitions(s, a)
                    .ok_or_else(|| Error::NoExplicitModel(env.name().to_owned()))??;
                for (_, r) in &outcomes {
                    states.insert(r.next_state.clone());
                }
                rows.push((s, a, outcomes));
            }
        }
        let mut mdp = Self::new(states, env.actions().iter().cloned());
        for (s, a, outcomes) in rows {
            let triples: Vec<_> = outcomes
                .iter()
                .map(|(p, r)| (&r.next_state, *p, r.reward))
                .collect();
            mdp.set_transitions(s, a, &triples)?;
        }
        Ok(mdp)
    }

    /// Replaces the model of `(state, action)` with `(next, probability, reward)` outcomes.
    pub fn set_transitions(&mut self, state: &StateId, action: &ActionId, outcomes: &[(&StateId, f64, f64)]) -> Result<()> {
        let s = self
            .states
            .get_index_of(state)
            .ok_or_else(|| Error::UnknownState(state.to_string()))?;
        let a = self
            .actions
            .get_index_of(action)
            .ok_or_else(|| Error::UnknownAction(action.to_string()))?;
        let mut row = Vec::with_capacity(outcomes.len());
        let mut sum = 0.0;
        for (next, probability, reward) in outcomes {
            let next = self
                .states
                .get_index_of(*next)
                .ok_or_else(|| Error::UnknownState(next.to_string()))?;
            if !reward.is_finite() {
                return Err(Error::NonFinite(*reward));
            }
            if probability.is_nan() || *probability < 0.0 {
                return Err(Error::NotStochastic {
                    state: state.to_string(),
                    action: action.to_string(),
                    sum: *probability,
                });
            }
            sum += probability;
            row.push(Transition {
                next,
                probability: *probability,
                reward: *reward,
            });
        }
        if (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::NotStochastic {
                state: state.to_string(),
                action: action.to_string(),
                sum,
            });
        }
        let idx = s * self.actions.len() + a;
        self.outcomes[idx] = row;
        self.covered[idx] = true;
        Ok(())
    }

    pub fn states(&self) -> &IndexSet<StateId> {
        &self.states
    }

    pub fn actions(&self) -> &IndexSet<ActionId> {
        &self.actions
    }

    fn index(&self, state: &str, action: &str) -> Option<usize> {
        let s = self.states.get_index_of(state)?;
        let a = self.actions.get_index_of(action)?;
        Some(s * self.actions.len() + a)
    }

    pub fn outcomes(&self, state: &str, action: &str) -> Option<&[Transition]> {
        self.index(state, action).map(|i| self.outcomes[i].as_slice())
    }

    /// `P_a(s, s')`.
    pub fn probability(&self, state: &str, action: &str, next: &str) -> f64 {
        let Some(next) = self.states.get_index_of(next) else {
            return 0.0;
        };
        self.outcomes(state, action)
            .map(|row| row.iter().filter(|t| t.next == next).map(|t| t.probability).sum())
            .unwrap_or(0.0)
    }

    /// `R_a(s, s')`, averaged over duplicate outcomes; 0 when `s'` is unreachable.
    pub fn reward(&self, state: &str, action: &str, next: &str) -> f64 {
        let Some(next) = self.states.get_index_of(next) else {
            return 0.0;
        };
        let Some(row) = self.outcomes(state, action) else {
            return 0.0;
        };
        let (mass, weighted) = row
            .iter()
            .filter(|t| t.next == next)
            .fold((0.0, 0.0), |(m, w), t| (m + t.probability, w + t.probability * t.reward));
        if mass > 0.0 {
            weighted / mass
        } else {
            0.0
        }
    }

    pub fn is_covered(&self, state: &str, action: &str) -> bool {
        self.index(state, action).is_some_and(|i| self.covered[i])
    }

    /// Row-major `states × actions` flags, true where a model was supplied.
    pub fn coverage_mask(&self) -> &[bool] {
        &self.covered
    }

    /// Copy with every reward passed through `f`.
    pub fn map_rewards(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = self.clone();
        for t in out.outcomes.iter_mut().flatten() {
            t.reward = f(t.reward);
        }
        out
    }

    fn backup(&self, q: &[f64], gamma: f64, out: &mut [f64]) {
        let width = self.actions.len();
        let state_max: Vec<f64> = (0..self.states.len())
            .map(|s| row_max(&q[s * width..(s + 1) * width]))
            .collect();
        for (slot, row) in out.iter_mut().zip(&self.outcomes) {
            *slot = row
                .iter()
                .map(|t| t.probability * (t.reward + gamma * state_max[t.next]))
                .sum();
        }
    }

    fn table(&self, values: Vec<f64>) -> QTable {
        let width = self.actions.len().max(1);
        let rows = values.chunks(width).map(<[f64]>::to_vec).collect();
        QTable::from_rows(
            self.states.iter().cloned().collect(),
            self.actions.iter().cloned().collect(),
            if self.actions.is_empty() { vec![vec![]; self.states.len()] } else { rows },
        )
        .expect("dimensions match")
    }

    fn values_of(&self, q: &QTable) -> Vec<f64> {
        let mut values = Vec::with_capacity(self.outcomes.len());
        for s in &self.states {
            for a in &self.actions {
                values.push(q.q_value(s.as_str(), a.as_str()));
            }
        }
        values
    }
}

fn row_max(row: &[f64]) -> f64 {
    if row.is_empty() {
        0.0
    } else {
        row.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if (0.0..=1.0).contains(&gamma) {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name: "gamma",
            value: gamma,
        })
    }
}

/// One synchronous Bellman optimality backup of `q` over the MDP's pairs.
pub fn bellman_backup(mdp: &ExplicitMDP, q: &QTable, gamma: f64) -> Result<QTable> {
    check_gamma(gamma)?;
    let current = mdp.values_of(q);
    let mut next = vec![0.0; current.len()];
    mdp.backup(&current, gamma, &mut next);
    Ok(mdp.table(next))
}

/// Sup-norm distance between `q` and its Bellman backup.
pub fn bellman_residual(mdp: &ExplicitMDP, q: &QTable, gamma: f64) -> Result<f64> {
    let current = mdp.values_of(q);
    let backed = bellman_backup(mdp, q, gamma)?;
    Ok(mdp
        .values_of(&backed)
        .iter()
        .zip(&current)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Iterates Bellman backups from zero until the Bellman residual drops below `tol`.
///
/// `gamma = 1` is accepted but only converges when every cycle's reward is
/// absorbed at zero; otherwise this fails with [`Error::NotConverged`].
pub fn value_iteration(mdp: &ExplicitMDP, gamma: f64, tol: f64) -> Result<QTable> {
    check_gamma(gamma)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::ParamOutOfRange { name: "tol", value: tol });
    }
    let mut q = vec![0.0; mdp.outcomes.len()];
    let mut next = vec![0.0; q.len()];
    for _ in 0..MAX_SWEEPS {
        mdp.backup(&q, gamma, &mut next);
        std::mem::swap(&mut q, &mut next);
        // residual of T(prev) is at most gamma * |T(prev) - prev|
        let step = q
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if !step.is_finite() {
            break;
        }
        if step < tol {
            return Ok(mdp.table(q));
        }
    }
    Err(Error::NotConverged {
        tol,
        sweeps: MAX_SWEEPS,
    })
}

/// How a learned table lines up with reference values on an MDP.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// Largest `|learned - reference|` over covered pairs known to both tables.
    pub max_abs_diff: f64,
    pub pairs_compared: usize,
    /// States whose best reference action beats the runner-up by more than the margin.
    pub tie_free_states: usize,
    /// Tie-free states where the greedy actions differ.
    pub policy_mismatches: Vec<StateId>,
}

impl Comparison {
    pub fn policies_agree(&self) -> bool {
        self.policy_mismatches.is_empty()
    }
}

/// Compares `learned` against `reference` (typically [`value_iteration`] output)
/// on the covered pairs of `mdp`.
pub fn compare(learned: &QTable, reference: &QTable, mdp: &ExplicitMDP, tie_margin: f64) -> Comparison {
    let mut max_abs_diff: f64 = 0.0;
    let mut pairs_compared = 0;
    let mut tie_free_states = 0;
    let mut policy_mismatches = Vec::new();
    for s in mdp.states() {
        if !learned.contains_state(s.as_str()) {
            continue;
        }
        for a in mdp.actions() {
            if mdp.is_covered(s.as_str(), a.as_str()) && learned.actions().contains(a) {
                let diff = (learned.q_value(s.as_str(), a.as_str()) - reference.q_value(s.as_str(), a.as_str())).abs();
                max_abs_diff = max_abs_diff.max(diff);
                pairs_compared += 1;
            }
        }
        let Some(row) = reference.row(s.as_str()) else {
            continue;
        };
        if row.len() < 2 {
            continue;
        }
        let best = crate::qtable::argmax_first(row);
        let runner_up = row
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != best)
            .map(|(_, v)| *v)
            .fold(f64::NEG_INFINITY, f64::max);
        if row[best] - runner_up <= tie_margin {
            continue;
        }
        tie_free_states += 1;
        let expected = &reference.actions()[best];
        match learned.greedy_action(s.as_str()) {
            Ok(got) if got == expected => {}
            _ => policy_mismatches.push(s.clone()),
        }
    }
    Comparison {
        max_abs_diff,
        pairs_compared,
        tie_free_states,
        policy_mismatches,
    }
}

/// Next state -> (visits, reward sum) for one `(state, action)`.
type NextCounts<'a> = BTreeMap<&'a StateId, (usize, f64)>;

/// Empirical MDP implied by a batch.
///
/// `P(s, a, s')` is the fraction of `(s, a)` tuples landing in `s'`, and
/// `R(s, a, s')` the mean reward over those tuples. States and actions are
/// sorted, matching the learner's table layout.
pub fn estimate_mdp(batch: &[ExperienceTuple]) -> ExplicitMDP {
    let mut states = BTreeSet::new();
    let mut actions = BTreeSet::new();
    let mut counts: BTreeMap<(&StateId, &ActionId), NextCounts> = BTreeMap::new();
    for t in batch {
        states.insert(t.state.clone());
        states.insert(t.next_state.clone());
        actions.insert(t.action.clone());
        let slot = counts
            .entry((&t.state, &t.action))
            .or_default()
            .entry(&t.next_state)
            .or_insert((0, 0.0));
        slot.0 += 1;
        slot.1 += t.reward;
    }
    let mut mdp = ExplicitMDP::new(states, actions);
    for ((s, a), nexts) in counts {
        let total: usize = nexts.values().map(|(c, _)| c).sum();
        let outcomes: Vec<_> = nexts
            .iter()
            .map(|(next, (c, sum))| (*next, *c as f64 / total as f64, sum / *c as f64))
            .collect();
        mdp.set_transitions(s, a, &outcomes)
            .expect("empirical frequencies are stochastic");
    }
    mdp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::{gridworld_step, Gridworld};
    use crate::qtable::tests::{aid, sid};
    use proptest::prelude::*;

    fn gridworld() -> ExplicitMDP {
        ExplicitMDP::from_environment(&Gridworld::new()).unwrap()
    }

    #[test]
    fn gridworld_fixed_point() {
        let q = value_iteration(&gridworld(), 0.5, 1e-9).unwrap();
        assert!((q.q_value("s3", "up") - 9.0).abs() < 1e-6);
        assert!((q.q_value("s2", "right") - 3.5).abs() < 1e-6);
        assert!((q.q_value("s1", "down") - 0.75).abs() < 1e-6);
        for a in ["up", "down", "left", "right"] {
            assert!((q.q_value("s4", a) + 2.0).abs() < 1e-6);
        }
        assert!(bellman_residual(&gridworld(), &q, 0.5).unwrap() < 1e-9);
    }

    #[test]
    fn myopic_values_are_immediate_rewards() {
        let q = value_iteration(&gridworld(), 0.0, 1e-12).unwrap();
        for s in ["s1", "s2", "s3", "s4"] {
            for a in ["up", "down", "left", "right"] {
                assert_eq!(q.q_value(s, a), gridworld_step(s, a).unwrap().reward);
            }
        }
    }

    #[test]
    fn absorbing_state_is_geometric_series() {
        let mut mdp = ExplicitMDP::new([sid("only")], [aid("stay"), aid("wait")]);
        for a in ["stay", "wait"] {
            mdp.set_transitions(&sid("only"), &aid(a), &[(&sid("only"), 1.0, 3.0)]).unwrap();
        }
        let q = value_iteration(&mdp, 0.8, 1e-10).unwrap();
        assert!((q.q_value("only", "stay") - 15.0).abs() < 1e-8);
        assert!((q.q_value("only", "wait") - 15.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_non_stochastic_rows() {
        let mut mdp = ExplicitMDP::new([sid("a"), sid("b")], [aid("go")]);
        let err = mdp
            .set_transitions(&sid("a"), &aid("go"), &[(&sid("a"), 0.5, 0.0), (&sid("b"), 0.4, 0.0)])
            .unwrap_err();
        assert!(matches!(err, Error::NotStochastic { .. }));
        assert!(mdp
            .set_transitions(&sid("a"), &aid("go"), &[(&sid("c"), 1.0, 0.0)])
            .is_err());
    }

    #[test]
    fn undiscounted_negative_loop_does_not_converge() {
        assert!(matches!(
            value_iteration(&gridworld(), 1.0, 1e-9),
            Err(Error::NotConverged { .. })
        ));
        let mut mdp = ExplicitMDP::new([sid("end")], [aid("stay")]);
        mdp.set_transitions(&sid("end"), &aid("stay"), &[(&sid("end"), 1.0, 0.0)]).unwrap();
        assert!(value_iteration(&mdp, 1.0, 1e-9).is_ok());
    }

    #[test]
    fn comparison_flags_disagreement() {
        let mdp = gridworld();
        let reference = value_iteration(&mdp, 0.5, 1e-12).unwrap();
        let same = compare(&reference, &reference, &mdp, 1e-9);
        assert_eq!(same.max_abs_diff, 0.0);
        assert_eq!(same.pairs_compared, 16);
        // s4 is an exact four-way tie
        assert_eq!(same.tie_free_states, 3);
        assert!(same.policies_agree());

        let mut off = reference.clone();
        off.set(&sid("s2"), &aid("up"), 5.0).unwrap();
        let cmp = compare(&off, &reference, &mdp, 1e-9);
        assert_eq!(cmp.policy_mismatches, [sid("s2")]);
        assert!((cmp.max_abs_diff - (5.0 - reference.q_value("s2", "up"))).abs() < 1e-12);
    }

    #[test]
    fn estimate_from_full_sweep_is_exact() {
        let mut batch = Vec::new();
        for s in ["s1", "s2", "s3", "s4"] {
            for a in ["up", "down", "left", "right"] {
                let r = gridworld_step(s, a).unwrap();
                batch.push(ExperienceTuple::new(sid(s), aid(a), r.reward, r.next_state).unwrap());
            }
        }
        let est = estimate_mdp(&batch);
        let exact = gridworld();
        assert!(est.coverage_mask().iter().all(|c| *c));
        for s in exact.states() {
            for a in exact.actions() {
                for n in exact.states() {
                    let (s, a, n) = (s.as_str(), a.as_str(), n.as_str());
                    assert_eq!(est.probability(s, a, n), exact.probability(s, a, n));
                    assert_eq!(est.reward(s, a, n), exact.reward(s, a, n));
                }
            }
        }
    }

    #[test]
    fn estimate_averages_rewards_and_marks_gaps() {
        let batch = vec![
            ExperienceTuple::parse("a", "go", 1.0, "b").unwrap(),
            ExperienceTuple::parse("a", "go", 3.0, "b").unwrap(),
            ExperienceTuple::parse("b", "stay", 0.0, "b").unwrap(),
        ];
        let est = estimate_mdp(&batch);
        assert_eq!(est.reward("a", "go", "b"), 2.0);
        assert_eq!(est.probability("a", "go", "b"), 1.0);
        assert!(est.is_covered("a", "go"));
        assert!(!est.is_covered("a", "stay"));
        assert!(!est.is_covered("b", "go"));
        assert_eq!(est.probability("b", "go", "b"), 1.0);
        assert_eq!(est.reward("b", "go", "b"), 0.0);
    }

    #[test]
    fn estimate_splits_stochastic_outcomes() {
        let batch = vec![
            ExperienceTuple::parse("a", "go", 1.0, "b").unwrap(),
            ExperienceTuple::parse("a", "go", 0.0, "c").unwrap(),
            ExperienceTuple::parse("a", "go", 0.0, "c").unwrap(),
            ExperienceTuple::parse("a", "go", 0.0, "c").unwrap(),
        ];
        let est = estimate_mdp(&batch);
        assert_eq!(est.probability("a", "go", "b"), 0.25);
        assert_eq!(est.probability("a", "go", "c"), 0.75);
    }

    fn arb_mdp() -> impl Strategy<Value = ExplicitMDP> {
        (2usize..5, 1usize..4)
            .prop_flat_map(|(ns, na)| {
                (
                    Just((ns, na)),
                    prop::collection::vec((0..ns, 0..ns, -5.0f64..5.0, 0.0f64..1.0), ns * na),
                )
            })
            .prop_map(|((ns, na), rows)| {
                let states: Vec<_> = (0..ns).map(|i| sid(&format!("s{i}"))).collect();
                let actions: Vec<_> = (0..na).map(|i| aid(&format!("a{i}"))).collect();
                let mut mdp = ExplicitMDP::new(states.clone(), actions.clone());
                for (k, (n1, n2, r, p)) in rows.into_iter().enumerate() {
                    let (s, a) = (&states[k / na], &actions[k % na]);
                    mdp.set_transitions(s, a, &[(&states[n1], p, r), (&states[n2], 1.0 - p, -r)])
                        .unwrap();
                }
                mdp
            })
    }

    proptest! {
        #[test]
        fn residual_below_tolerance(mdp in arb_mdp(), gamma in 0.0f64..0.95) {
            let q = value_iteration(&mdp, gamma, 1e-8).unwrap();
            prop_assert!(bellman_residual(&mdp, &q, gamma).unwrap() < 1e-8);
        }

        #[test]
        fn nonnegative_rewards_give_monotone_iterates(mdp in arb_mdp(), gamma in 0.0f64..0.95) {
            let shifted = mdp.map_rewards(|r| r + 5.0);
            let mut q = QTable::new(shifted.states().iter().cloned(), shifted.actions().iter().cloned());
            for _ in 0..30 {
                let next = bellman_backup(&shifted, &q, gamma).unwrap();
                for s in shifted.states() {
                    for a in shifted.actions() {
                        prop_assert!(next.q_value(s.as_str(), a.as_str()) >= q.q_value(s.as_str(), a.as_str()) - 1e-12);
                    }
                }
                q = next;
            }
        }
    }
}
