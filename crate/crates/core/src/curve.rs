//! Growing-batch training and learning curves.
//!
//! Round 1 samples experience with uniformly random actions and trains a
//! fresh model. Every later round samples ε-greedily from the current model
//! and continues training it on the new batch. The curve records each round's
//! batch reward, which rises as the sampling policy improves.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;

use crate::domain::ControlParams;
use crate::envs::Environment;
use crate::error::{Error, Result};
use crate::learner::{learn, rng_from_seed, update_model};
use crate::model::RLModel;
use crate::sampling::{sample_experience, SelectionMode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub round: usize,
    pub total_reward: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowingBatch {
    pub rounds: usize,
    pub samples_per_round: usize,
    pub control: ControlParams,
    /// Replay passes over each round's batch.
    pub iterations_per_round: usize,
    pub seed: u64,
}

impl GrowingBatch {
    pub fn new(rounds: usize, samples_per_round: usize, control: ControlParams, seed: u64) -> Self {
        Self {
            rounds,
            samples_per_round,
            control,
            iterations_per_round: 1,
            seed,
        }
    }

    pub fn run(&self, env: &dyn Environment) -> Result<(RLModel, Vec<CurvePoint>)> {
        if self.rounds == 0 {
            return Err(Error::ZeroIterations);
        }
        let mut seeds = rng_from_seed(self.seed);
        let mut model: Option<RLModel> = None;
        let mut points = Vec::with_capacity(self.rounds);
        for round in 1..=self.rounds {
            let (sample_seed, learn_seed): (u64, u64) = (seeds.gen(), seeds.gen());
            let mode = if model.is_some() {
                SelectionMode::EpsilonGreedy
            } else {
                SelectionMode::Random
            };
            let batch = sample_experience(
                self.samples_per_round,
                env,
                mode,
                model.as_ref(),
                Some(self.control),
                sample_seed,
            )?;
            let next = match &model {
                None => learn(&batch, self.control, self.iterations_per_round, learn_seed, None)?,
                Some(m) => update_model(m, &batch, self.control, self.iterations_per_round, learn_seed)?,
            };
            points.push(CurvePoint {
                round,
                total_reward: next.last_reward().expect("at least one iteration"),
            });
            model = Some(next);
        }
        Ok((model.expect("at least one round"), points))
    }
}

/// Two-column CSV `round,total_reward`.
pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("round,total_reward\n");
    for p in points {
        writeln!(out, "{},{}", p.round, p.total_reward).unwrap();
    }
    out
}

pub fn write_curve_csv(points: &[CurvePoint], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, curve_csv(points)).map_err(|e| Error::io(path, e))
}

/// Standalone SVG line chart of reward against round.
pub fn render_svg(points: &[CurvePoint]) -> String {
    const W: f64 = 480.0;
    const H: f64 = 320.0;
    const PAD: f64 = 48.0;
    let (lo, hi) = points.iter().fold((0.0f64, 0.0f64), |(lo, hi), p| {
        (lo.min(p.total_reward), hi.max(p.total_reward))
    });
    let span = if hi > lo { hi - lo } else { 1.0 };
    let last_round = points.iter().map(|p| p.round).max().unwrap_or(1).max(2);
    let x = |round: usize| PAD + (round - 1) as f64 / (last_round - 1) as f64 * (W - 2.0 * PAD);
    let y = |r: f64| H - PAD - (r - lo) / span * (H - 2.0 * PAD);

    let mut svg = String::new();
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#).unwrap();
    writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r##"<line x1="{PAD}" y1="{y0:.2}" x2="{x1}" y2="{y0:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
        y0 = y(0.0),
        x1 = W - PAD
    )
    .unwrap();
    writeln!(
        svg,
        r#"<polyline fill="none" stroke="black" stroke-width="1" points="{PAD},{PAD} {PAD},{b} {r},{b}"/>"#,
        b = H - PAD,
        r = W - PAD
    )
    .unwrap();
    let coords: Vec<String> = points
        .iter()
        .map(|p| format!("{:.2},{:.2}", x(p.round), y(p.total_reward)))
        .collect();
    writeln!(
        svg,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#,
        coords.join(" ")
    )
    .unwrap();
    for p in points {
        writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#,
            x(p.round),
            y(p.total_reward)
        )
        .unwrap();
    }
    writeln!(svg, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">round</text>"#, W / 2.0, H - 12.0).unwrap();
    writeln!(svg, r#"<text x="14" y="{}" font-size="12" transform="rotate(-90 14 {})" text-anchor="middle">total reward</text>"#, H / 2.0, H / 2.0).unwrap();
    writeln!(svg, r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{}</text>"#, PAD - 4.0, y(hi) + 4.0, hi).unwrap();
    writeln!(svg, r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{}</text>"#, PAD - 4.0, y(lo) + 4.0, lo).unwrap();
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::Gridworld;

    #[test]
    fn single_round_is_random_batch() {
        let cfg = GrowingBatch::new(1, 200, ControlParams::default(), 4);
        let (model, points) = cfg.run(&Gridworld::new()).unwrap();
        assert_eq!(points.len(), 1);
        assert_eq!(points[0].round, 1);
        assert_eq!(model.iterations_completed(), 1);
        assert_eq!(model.last_reward(), Some(points[0].total_reward));
    }

    #[test]
    fn curve_is_reproducible() {
        let cfg = GrowingBatch::new(4, 300, ControlParams::default(), 10);
        let env = Gridworld::new();
        let (m1, p1) = cfg.run(&env).unwrap();
        let (m2, p2) = cfg.run(&env).unwrap();
        assert_eq!(p1, p2);
        assert_eq!(m1, m2);
        assert_eq!(m1.reward_history().len(), 4);
    }

    #[test]
    fn zero_rounds_rejected() {
        let cfg = GrowingBatch::new(0, 10, ControlParams::default(), 0);
        assert!(cfg.run(&Gridworld::new()).is_err());
    }

    #[test]
    fn csv_and_svg_output() {
        let points = [
            CurvePoint { round: 1, total_reward: -340.0 },
            CurvePoint { round: 2, total_reward: 1464.0 },
        ];
        assert_eq!(curve_csv(&points), "round,total_reward\n1,-340\n2,1464\n");
        let svg = render_svg(&points);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(render_svg(&points[..1]).contains("<circle"));
    }
}
