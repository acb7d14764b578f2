//! Comma-separated experience files.
//!
//! The first line names the columns; every following line is one transition.
//! Identifiers never contain commas or line breaks, so no quoting is used.
//! Rewards are written in the shortest decimal form that parses back to the
//! same `f64`.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::domain::{ActionId, ExperienceTuple, StateId};
use crate::error::{Error, Result};

/// Column names holding each tuple element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub state: String,
    pub action: String,
    pub reward: String,
    pub next_state: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            state: "State".into(),
            action: "Action".into(),
            reward: "Reward".into(),
            next_state: "NextState".into(),
        }
    }
}

pub fn read_experience(path: impl AsRef<Path>, columns: &ColumnMap) -> Result<Vec<ExperienceTuple>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_experience_from(file, columns).map_err(|e| match e {
        Error::Csv { source, .. } => Error::Csv {
            path: path.to_owned(),
            source,
        },
        other => other,
    })
}

/// Reads experience from any reader. Rows are numbered from 1 after the header.
pub fn read_experience_from<R: Read>(reader: R, columns: &ColumnMap) -> Result<Vec<ExperienceTuple>> {
    let csv_err = |source| Error::Csv {
        path: "<input>".into(),
        source,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_owned()))
    };
    let (s, a, r, n) = (
        find(&columns.state)?,
        find(&columns.action)?,
        find(&columns.reward)?,
        find(&columns.next_state)?,
    );
    let mut out = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(csv_err)?;
        let field = |idx: usize| record.get(idx).unwrap_or("");
        let bad_row = |e: Error| Error::BadRow {
            row,
            message: e.to_string(),
        };
        let reward_text = field(r);
        let reward: f64 = reward_text
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| Error::BadReward {
                row,
                value: reward_text.to_owned(),
            })?;
        out.push(ExperienceTuple {
            state: StateId::new(field(s)).map_err(bad_row)?,
            action: ActionId::new(field(a)).map_err(bad_row)?,
            reward,
            next_state: StateId::new(field(n)).map_err(bad_row)?,
        });
    }
    Ok(out)
}

pub fn write_experience(batch: &[ExperienceTuple], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_experience_to(batch, &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes the header `State,Action,Reward,NextState` followed by one row per tuple.
pub fn write_experience_to<W: Write>(batch: &[ExperienceTuple], w: &mut W) -> std::io::Result<()> {
    writeln!(w, "State,Action,Reward,NextState")?;
    for t in batch {
        writeln!(w, "{},{},{},{}", t.state, t.action, t.reward, t.next_state)?;
    }
    Ok(())
}
