use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use hkc::data::{load_csv, LabeledDataset};

use crate::error::{usage, CliResult};

/// Loads a dataset, taking labels from `label_column` or, when not given,
/// from a column named `label` if there is one.
pub fn load_dataset(path: &Path, label_column: Option<&str>) -> CliResult<LabeledDataset> {
    if !path.is_file() {
        return usage(format!("cannot read {}", path.display()));
    }
    if let Some(name) = label_column {
        return Ok(load_csv(path, Some(name))?);
    }
    let mut first = String::new();
    BufReader::new(fs::File::open(path).map_err(hkc::Error::from)?).read_line(&mut first)?;
    let has_label = first.trim_end().split(',').any(|h| h.trim() == "label");
    Ok(load_csv(path, has_label.then_some("label"))?)
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}
