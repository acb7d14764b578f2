//! `rlmodel/1` model files: pretty-printed JSON tagged with a format version.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::{ActionId, ControlParams, StateId};
use crate::error::{Error, Result};
use crate::model::{RLModel, LEARNING_RULE};
use crate::qtable::QTable;

pub const FORMAT_TAG: &str = "rlmodel/1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format: String,
    learning_rule: String,
    control: ControlParams,
    iterations_completed: usize,
    states: Vec<StateId>,
    actions: Vec<ActionId>,
    q: Vec<Vec<f64>>,
    policy: Vec<(StateId, ActionId)>,
    reward_history: Vec<f64>,
}

pub fn model_to_string(model: &RLModel) -> String {
    let q = model.q();
    let file = ModelFile {
        format: FORMAT_TAG.to_owned(),
        learning_rule: model.learning_rule().to_owned(),
        control: model.control(),
        iterations_completed: model.iterations_completed(),
        states: q.states().iter().cloned().collect(),
        actions: q.actions().iter().cloned().collect(),
        q: q
            .states()
            .iter()
            .map(|s| q.row(s.as_str()).expect("known state").to_vec())
            .collect(),
        policy: model
            .policy()
            .iter()
            .map(|(s, a)| (s.clone(), a.clone()))
            .collect(),
        reward_history: model.reward_history().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("model values are finite");
    text.push('\n');
    text
}

pub fn model_from_str(text: &str) -> Result<RLModel> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::MalformedModel(e.to_string()))?;
    let found = value
        .get("format")
        .and_then(|f| f.as_str())
        .ok_or_else(|| Error::MalformedModel("missing format tag".into()))?;
    if found != FORMAT_TAG {
        return Err(Error::VersionMismatch {
            found: found.to_owned(),
            expected: FORMAT_TAG.to_owned(),
        });
    }
    let file: ModelFile =
        serde_json::from_value(value).map_err(|e| Error::MalformedModel(e.to_string()))?;
    if file.learning_rule != LEARNING_RULE {
        return Err(Error::MalformedModel(format!(
            "unsupported learning rule {:?}",
            file.learning_rule
        )));
    }
    if file.iterations_completed != file.reward_history.len() {
        return Err(Error::MalformedModel(format!(
            "{} iterations but {} recorded rewards",
            file.iterations_completed,
            file.reward_history.len()
        )));
    }
    let n_states = file.states.len();
    let n_actions = file.actions.len();
    let q = QTable::from_rows(file.states, file.actions, file.q)?;
    if q.states().len() != n_states || q.actions().len() != n_actions {
        return Err(Error::MalformedModel("duplicate state or action labels".into()));
    }
    let model = RLModel::from_parts(q, file.control, file.reward_history)?;
    let stored: Vec<_> = file.policy;
    let derived: Vec<_> = model
        .policy()
        .iter()
        .map(|(s, a)| (s.clone(), a.clone()))
        .collect();
    if stored != derived {
        return Err(Error::MalformedModel(
            "stored policy disagrees with the state-action table".into(),
        ));
    }
    Ok(model)
}

pub fn save_model(model: &RLModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_string(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<RLModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_str(&text)
}
