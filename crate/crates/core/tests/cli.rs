use std::path::Path;
use std::process::{Command, Output};

use batchrl::persist::{self, ColumnMap};

fn batchrl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_batchrl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Samples and trains a gridworld model with the default control values.
fn trained_gridworld(dir: &Path) -> std::path::PathBuf {
    let data = dir.join("data.csv");
    let model = dir.join("model.json");
    let o = batchrl(&["sample", "--env", "gridworld-2x2", "--n", "1000", "--seed", "1", "--out", p(&data)]);
    assert!(o.status.success(), "{o:?}");
    let o = batchrl(&[
        "train", "--data", p(&data), "--s", "State", "--a", "Action", "--r", "Reward", "--s-new", "NextState",
        "--alpha", "0.1", "--gamma", "0.5", "--epsilon", "0.1", "--iter", "1", "--seed", "1", "--out", p(&model),
    ]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    assert!(text.contains("s1 -> down"), "{text}");
    assert!(text.contains("Learning iterations:     1"));
    model
}

#[test]
fn sample_writes_exactly_n_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let o = batchrl(&["sample", "--env", "gridworld-2x2", "--n", "1000", "--seed", "3", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("State,Action,Reward,NextState"));
    assert_eq!(text.lines().count(), 1001);
    assert_eq!(persist::read_experience(&out, &ColumnMap::default()).unwrap().len(), 1000);
}

#[test]
fn sample_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for path in [&a, &b] {
        let o = batchrl(&["sample", "--env", "tictactoe", "--n", "50", "--seed", "9", "--out", p(path)]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn sample_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let o = batchrl(&["sample", "--env", "gridworld-2x2", "--n", "0", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
    let o = batchrl(&["sample", "--env", "maze-9x9", "--n", "5", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
    let o = batchrl(&["sample", "--env", "gridworld-2x2", "--n", "5", "--mode", "epsilon-greedy", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("model required for epsilon-greedy"));
    let o = batchrl(&["sample", "--env"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn predict_repeats_and_flags_unknown_states() {
    let dir = tempfile::tempdir().unwrap();
    let model = trained_gridworld(dir.path());
    let o = batchrl(&["predict", "--model", p(&model), "--states", "s1,s2,s1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "s1,down\ns2,right\ns1,down\n");

    let o = batchrl(&["predict", "--model", p(&model), "--states", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");

    let o = batchrl(&["predict", "--model", p(&model), "--states", "s1,s9,s2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "s1,down\ns9,unknown-state\ns2,right\n");
}

#[test]
fn update_with_epsilon_greedy_batch_improves_reward() {
    let dir = tempfile::tempdir().unwrap();
    let model = trained_gridworld(dir.path());
    let fresh = dir.path().join("new.csv");
    let updated = dir.path().join("updated.json");
    let o = batchrl(&[
        "sample", "--env", "gridworld-2x2", "--n", "1000", "--seed", "2", "--mode", "epsilon-greedy", "--model",
        p(&model), "--epsilon", "0.1", "--out", p(&fresh),
    ]);
    assert!(o.status.success(), "{o:?}");
    let o = batchrl(&["train", "--data", p(&fresh), "--model", p(&model), "--seed", "2", "--out", p(&updated)]);
    assert!(o.status.success(), "{o:?}");
    let before = persist::load_model(&model).unwrap();
    let after = persist::load_model(&updated).unwrap();
    assert_eq!(after.iterations_completed(), 2);
    assert!(before.last_reward().unwrap() < 0.0);
    assert!(after.last_reward().unwrap() > 500.0);

    // the update subcommand insists on a prior model
    let o = batchrl(&["update", "--data", p(&fresh), "--out", p(&updated)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn train_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let out = dir.path().join("m.json");
    std::fs::write(&data, "State,Action,Reward,NextState\ns1,up,-1,s1\n").unwrap();
    let o = batchrl(&["train", "--data", p(&data), "--iter", "0", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
    let o = batchrl(&["train", "--data", p(&data), "--alpha", "1.5", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
    let o = batchrl(&["train", "--data", p(&data), "--r", "Gain", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column Gain not found"));
    std::fs::write(&data, "State,Action,Reward,NextState\n").unwrap();
    let o = batchrl(&["train", "--data", p(&data), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no training data"));
}

#[test]
fn report_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let model = trained_gridworld(dir.path());
    let o = batchrl(&["report", "--model", p(&model), "--kind", "policy"]);
    assert!(stdout(&o).starts_with("s1 -> down\n"));
    let o = batchrl(&["report", "--model", p(&model), "--kind", "table"]);
    assert!(stdout(&o).starts_with("State-Action function Q\n"));
    let o = batchrl(&["report", "--model", p(&model)]);
    assert!(stdout(&o).contains("Standard deviation:      NA"));
    std::fs::write(&model, std::fs::read_to_string(&model).unwrap().replace("rlmodel/1", "rlmodel/0")).unwrap();
    let o = batchrl(&["report", "--model", p(&model)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rlmodel/0"));
}

#[test]
fn curve_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg) = (dir.path().join("c.csv"), dir.path().join("c.svg"));
    let args = [
        "curve", "--env", "gridworld-2x2", "--rounds", "3", "--n", "500", "--seed", "5", "--out", p(&csv), "--svg",
        p(&svg),
    ];
    assert!(batchrl(&args).status.success());
    let first = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(first.lines().count(), 4);
    assert!(first.starts_with("round,total_reward\n1,"));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));
    assert!(batchrl(&args).status.success());
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), first);

    let one = dir.path().join("one.csv");
    assert!(batchrl(&["curve", "--env", "gridworld-2x2", "--rounds", "1", "--n", "100", "--out", p(&one)]).status.success());
    assert_eq!(std::fs::read_to_string(&one).unwrap().lines().count(), 2);
}

#[test]
fn verify_against_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let model = dir.path().join("m.json");
    batchrl(&["sample", "--env", "gridworld-2x2", "--n", "1000", "--seed", "4", "--out", p(&data)]);
    let o = batchrl(&["train", "--data", p(&data), "--iter", "300", "--out", p(&model)]);
    assert!(o.status.success());
    let o = batchrl(&["verify", "--model", p(&model), "--env", "gridworld-2x2", "--gamma", "0.5", "--tol", "0.01"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("greedy policy agreement: 3/3"));

    // a single pass is nowhere near the fixed point
    let rough = dir.path().join("rough.json");
    batchrl(&["train", "--data", p(&data), "--iter", "1", "--out", p(&rough)]);
    let o = batchrl(&["verify", "--model", p(&rough), "--env", "gridworld-2x2", "--gamma", "0.5", "--tol", "0.01"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("verify: FAIL"));
}

#[test]
fn help_exits_cleanly() {
    let o = batchrl(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    for cmd in ["sample", "train", "update", "predict", "report", "curve", "verify"] {
        assert!(stdout(&o).contains(cmd));
    }
}
