//! Learn tic-tac-toe from random-versus-random games and play the greedy
//! policy against a random opponent.
//!
//! ```bash
//! cargo run --release --example tictactoe
//! ```

use batchrl::envs::tictactoe::{generate_games, greedy_move, play_against_random, Board, Cell, Outcome};
use batchrl::learner::{learn, rng_from_seed};
use batchrl::ControlParams;
use rand::Rng;

fn tally(outcomes: &[Outcome]) -> (f64, f64, f64) {
    let share = |o: Outcome| outcomes.iter().filter(|&&x| x == o).count() as f64 / outcomes.len() as f64;
    (share(Outcome::XWins), share(Outcome::BWins), share(Outcome::Draw))
}

fn main() -> batchrl::Result<()> {
    let batch = generate_games(20_000, 7);
    println!("{} tuples from 20000 games", batch.len());

    let model = learn(&batch, ControlParams::new(0.2, 0.99, 0.1)?, 1, 7, None)?;
    println!("{} boards in the Q-table", model.q().states().len());

    let opening = Board::empty();
    let cell = greedy_move(model.q(), &opening).expect("empty board has moves");
    println!("opening move: cell {}\n{}", cell + 1, opening.with_mark(cell, Cell::X).unwrap());

    let mut rng = rng_from_seed(99);
    let mut baseline = rng_from_seed(100);
    let games = 5000;
    let greedy: Vec<Outcome> = (0..games)
        .map(|_| play_against_random(|b| greedy_move(model.q(), b).unwrap(), &mut rng))
        .collect::<batchrl::Result<_>>()?;
    let random: Vec<Outcome> = (0..games)
        .map(|_| {
            play_against_random(
                |b| {
                    let cells: Vec<usize> = b.empty_cells().collect();
                    cells[baseline.gen_range(0..cells.len())]
                },
                &mut rng,
            )
        })
        .collect::<batchrl::Result<_>>()?;

    let (w, l, d) = tally(&greedy);
    println!("greedy X: win {w:.3} loss {l:.3} draw {d:.3}");
    let (w, l, d) = tally(&random);
    println!("random X: win {w:.3} loss {l:.3} draw {d:.3}");
    Ok(())
}
