//! Check a learned Q-table against value iteration on the exact model, and
//! against the empirical model estimated from the training batch itself.
//!
//! ```bash
//! cargo run --example verify_oracle
//! ```

use batchrl::envs::Gridworld;
use batchrl::learner::learn;
use batchrl::oracle::{bellman_residual, compare, estimate_mdp, value_iteration, ExplicitMDP};
use batchrl::sampling::{sample_experience, SelectionMode};
use batchrl::ControlParams;

fn main() -> batchrl::Result<()> {
    let env = Gridworld::new();
    let gamma = 0.5;
    let exact = ExplicitMDP::from_environment(&env)?;
    let q_star = value_iteration(&exact, gamma, 1e-12)?;
    println!("Q* residual: {:e}", bellman_residual(&exact, &q_star, gamma)?);
    for s in q_star.states() {
        let row: Vec<String> = q_star.row(s.as_str()).unwrap().iter().map(|v| format!("{v:8.4}")).collect();
        println!("{s}: {}", row.join(" "));
    }

    let batch = sample_experience(1000, &env, SelectionMode::Random, None, None, 2017)?;
    for iterations in [1, 10, 100, 500] {
        let model = learn(&batch, ControlParams::new(0.1, gamma, 0.1)?, iterations, 2017, None)?;
        let cmp = compare(model.q(), &q_star, &exact, 1e-9);
        println!(
            "{iterations:>4} passes: max |Q - Q*| = {:.6}, policy agrees: {}",
            cmp.max_abs_diff,
            cmp.policies_agree()
        );
    }

    // The empirical model of the batch gives the same answer here because
    // the gridworld is deterministic and every pair was sampled.
    let empirical = estimate_mdp(&batch);
    let q_hat = value_iteration(&empirical, gamma, 1e-12)?;
    let cmp = compare(&q_hat, &q_star, &exact, 1e-9);
    println!("empirical vs exact: max diff {:.2e}", cmp.max_abs_diff);
    Ok(())
}
