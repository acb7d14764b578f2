use std::fmt::Write;

use crate::model::RLModel;

/// Marker for statistics that cannot be computed, e.g. the standard
/// deviation of a single iteration.
pub const NOT_AVAILABLE: &str = "NA";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verbosity {
    /// `state -> action` lines.
    Policy,
    /// Full state-action table, then the policy and the last iteration's reward.
    Table,
    /// Model details and reward statistics over iterations.
    Summary,
}

impl std::str::FromStr for Verbosity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "policy" => Ok(Verbosity::Policy),
            "table" => Ok(Verbosity::Table),
            "summary" => Ok(Verbosity::Summary),
            other => Err(format!("unknown report kind {other:?} (expected policy, table or summary)")),
        }
    }
}

pub fn format_report(model: &RLModel, verbosity: Verbosity) -> String {
    let mut out = String::new();
    match verbosity {
        Verbosity::Policy => write_policy(model, &mut out),
        Verbosity::Table => write_table(model, &mut out),
        Verbosity::Summary => write_summary(model, &mut out),
    }
    out
}

fn write_policy(model: &RLModel, out: &mut String) {
    for (state, action) in model.policy().iter() {
        writeln!(out, "{state} -> {action}").unwrap();
    }
}

fn write_table(model: &RLModel, out: &mut String) {
    let q = model.q();
    let cells: Vec<Vec<String>> = q
        .states()
        .iter()
        .map(|s| q.row(s.as_str()).unwrap().iter().map(|v| format!("{v:.7}")).collect())
        .collect();
    let label_width = q.states().iter().map(|s| s.as_str().len()).max().unwrap_or(0);
    let widths: Vec<usize> = q
        .actions()
        .iter()
        .enumerate()
        .map(|(j, a)| cells.iter().map(|r| r[j].len()).chain([a.as_str().len()]).max().unwrap())
        .collect();

    writeln!(out, "State-Action function Q").unwrap();
    write!(out, "{:label_width$}", "").unwrap();
    for (a, w) in q.actions().iter().zip(&widths) {
        write!(out, " {:>w$}", a.as_str()).unwrap();
    }
    out.push('\n');
    for (s, row) in q.states().iter().zip(&cells) {
        write!(out, "{:<label_width$}", s.as_str()).unwrap();
        for (v, w) in row.iter().zip(&widths) {
            write!(out, " {v:>w$}").unwrap();
        }
        out.push('\n');
    }
    out.push_str("\nPolicy\n");
    write_policy(model, out);
    out.push_str("\nReward (last iteration)\n");
    writeln!(out, "{}", fmt_opt(model.last_reward())).unwrap();
}

fn write_summary(model: &RLModel, out: &mut String) {
    let history = model.reward_history();
    let line = |out: &mut String, label: &str, value: String| {
        writeln!(out, "{:<25}{}", format!("{label}:"), value).unwrap();
    };
    out.push_str("Model details\n");
    line(out, "Learning rule", model.learning_rule().to_owned());
    line(out, "Learning iterations", model.iterations_completed().to_string());
    line(out, "Number of states", model.q().states().len().to_string());
    line(out, "Number of actions", model.q().actions().len().to_string());
    line(out, "Total Reward", fmt_opt(model.last_reward()));
    out.push_str("\nReward details (per iteration)\n");
    line(out, "Min", fmt_opt(history.iter().copied().reduce(f64::min)));
    line(out, "Max", fmt_opt(history.iter().copied().reduce(f64::max)));
    line(out, "Average", fmt_opt(mean(history)));
    line(out, "Median", fmt_opt(median(history)));
    line(out, "Standard deviation", fmt_opt(std_dev(history)));
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| NOT_AVAILABLE.to_owned(), |v| v.to_string())
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Some(if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    })
}

/// Sample standard deviation; undefined below two observations.
fn std_dev(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    let ss: f64 = xs.iter().map(|x| (x - m).powi(2)).sum();
    Some((ss / (xs.len() - 1) as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtable::tests::printed_gridworld_table;
    use crate::ControlParams;

    fn model(history: Vec<f64>) -> RLModel {
        RLModel::from_parts(printed_gridworld_table(), ControlParams::default(), history).unwrap()
    }

    #[test]
    fn policy_lines() {
        let text = format_report(&model(vec![-340.0]), Verbosity::Policy);
        assert_eq!(text, "s1 -> down\ns2 -> right\ns3 -> up\ns4 -> left\n");
    }

    #[test]
    fn single_iteration_summary() {
        let text = format_report(&model(vec![-340.0]), Verbosity::Summary);
        let expected = "\
Model details
Learning rule:           experienceReplay
Learning iterations:     1
Number of states:        4
Number of actions:       4
Total Reward:            -340

Reward details (per iteration)
Min:                     -340
Max:                     -340
Average:                 -340
Median:                  -340
Standard deviation:      NA
";
        assert_eq!(text, expected);
    }

    #[test]
    fn multi_iteration_statistics() {
        let text = format_report(&model(vec![1.0, 4.0, 2.0, 3.0]), Verbosity::Summary);
        assert!(text.contains("Median:                  2.5\n"));
        assert!(text.contains("Average:                 2.5\n"));
        assert!(text.contains("Total Reward:            3\n"));
        // sample variance of 1..4 is 5/3
        let sd = (5.0f64 / 3.0).sqrt();
        assert!(text.contains(&format!("Standard deviation:      {sd}\n")));
    }

    #[test]
    fn untrained_summary_is_not_available() {
        let text = format_report(&model(vec![]), Verbosity::Summary);
        assert!(text.contains("Total Reward:            NA"));
        assert!(text.contains("Min:                     NA"));
    }

    #[test]
    fn table_layout() {
        let text = format_report(&model(vec![-340.0]), Verbosity::Table);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "State-Action function Q");
        assert_eq!(lines[1], "        right         up       down       left");
        assert_eq!(lines[3], "s2  3.5286336 -0.7862925  0.6358511  0.6607884");
        assert!(text.contains("\nPolicy\ns1 -> down\n"));
        assert!(text.ends_with("Reward (last iteration)\n-340\n"));
        assert_eq!(text, format_report(&model(vec![-340.0]), Verbosity::Table));
    }
}
