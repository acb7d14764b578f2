//! Grow the training set round by round, sampling each new batch ε-greedily
//! from the current model, and plot the reward per round.
//!
//! ```bash
//! cargo run --example growing_batch -- curve.svg
//! ```

use batchrl::curve::{curve_csv, render_svg, GrowingBatch};
use batchrl::envs::Gridworld;
use batchrl::learner::{learn, update_model};
use batchrl::sampling::{sample_experience, SelectionMode};
use batchrl::ControlParams;

fn main() -> batchrl::Result<()> {
    let env = Gridworld::new();
    let control = ControlParams::new(0.1, 0.5, 0.1)?;

    // One round by hand: random batch, then an ε-greedy batch from the model.
    let first = sample_experience(1000, &env, SelectionMode::Random, None, None, 1)?;
    let model = learn(&first, control, 1, 1, None)?;
    let second = sample_experience(1000, &env, SelectionMode::EpsilonGreedy, Some(&model), None, 2)?;
    let model = update_model(&model, &second, control, 1, 2)?;
    println!("reward history after two rounds: {:?}", model.reward_history());

    // The same loop, automated.
    let (model, points) = GrowingBatch::new(8, 1000, control, 7).run(&env)?;
    print!("{}", curve_csv(&points));
    println!("final policy: {:?}", model.policy().iter().collect::<Vec<_>>());

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, render_svg(&points)).expect("write svg");
        println!("wrote {path}");
    }
    Ok(())
}
