//! Experience files, model files and text reports.

mod experience;
mod model_file;
mod report;

pub use experience::{read_experience, read_experience_from, write_experience, write_experience_to, ColumnMap};
pub use model_file::{load_model, model_from_str, model_to_string, save_model, FORMAT_TAG};
pub use report::{format_report, Verbosity, NOT_AVAILABLE};
