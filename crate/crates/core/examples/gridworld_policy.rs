//! Sample a 2×2 gridworld at random, learn a policy from the batch and query it.
//!
//! ```bash
//! cargo run --example gridworld_policy
//! ```

use batchrl::envs::Gridworld;
use batchrl::learner::learn;
use batchrl::persist::{format_report, Verbosity};
use batchrl::sampling::{sample_experience, SelectionMode};
use batchrl::ControlParams;

fn main() -> batchrl::Result<()> {
    let env = Gridworld::new();
    let batch = sample_experience(1000, &env, SelectionMode::Random, None, None, 42)?;
    println!("sampled {} tuples, first: {:?}", batch.len(), batch[0]);

    let control = ControlParams::new(0.1, 0.5, 0.1)?;
    let model = learn(&batch, control, 1, 42, None)?;

    println!("\n{}", format_report(&model, Verbosity::Table));
    print!("{}", format_report(&model, Verbosity::Summary));

    for state in ["s1", "s2", "s3", "s4"] {
        println!("{state} -> {}", model.predict(state)?);
    }
    Ok(())
}
