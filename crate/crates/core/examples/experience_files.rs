//! Read experience with custom column names, train, and save and reload the
//! model file.
//!
//! ```bash
//! cargo run --example experience_files
//! ```

use batchrl::learner::learn;
use batchrl::persist::{self, read_experience_from, write_experience_to, ColumnMap};
use batchrl::ControlParams;

const LOG: &str = "\
timestamp,from,move,gain,to
1,s1,down,-1,s3
2,s3,up,-1,s1
3,s1,right,-1,s2
4,s2,down,10,s4
5,s3,right,10,s4
6,s4,left,-1,s3
";

fn main() -> batchrl::Result<()> {
    let columns = ColumnMap {
        state: "from".into(),
        action: "move".into(),
        reward: "gain".into(),
        next_state: "to".into(),
    };
    let batch = read_experience_from(LOG.as_bytes(), &columns)?;
    println!("read {} tuples (extra columns ignored)", batch.len());

    let mut canonical = Vec::new();
    write_experience_to(&batch, &mut canonical).expect("write to memory");
    print!("canonical form:\n{}", String::from_utf8_lossy(&canonical));

    let model = learn(&batch, ControlParams::new(0.5, 0.5, 0.1)?, 20, 0, None)?;
    let text = persist::model_to_string(&model);
    println!("\nmodel file:\n{text}");

    let dir = std::env::temp_dir().join("batchrl-example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("model.json");
    persist::save_model(&model, &path)?;
    let loaded = persist::load_model(&path)?;
    assert_eq!(loaded, model);
    println!("reloaded {} with identical contents", path.display());
    Ok(())
}
