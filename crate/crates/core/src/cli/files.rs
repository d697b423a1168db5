use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::FitResult;
use crate::model::{ComponentMask, ModelKind};
use crate::trial::{derive_features, load_trials, DerivedTrial};

pub const PARAMS_DIR: &str = "params";
pub const RUN_FILE: &str = "run.json";

/// Settings of a `fit` run, stored next to its parameter files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// `qdt` or `cpt`.
    pub model: String,
    pub components: ComponentMask,
    pub n_folds: usize,
    pub seed: u64,
    pub reg_weight: f64,
    pub include_catch_in_training: bool,
    pub regularize_scale: bool,
    pub data: PathBuf,
}

impl RunRecord {
    pub fn model_kind(&self) -> Result<ModelKind> {
        match self.model.as_str() {
            "qdt" => Ok(ModelKind::Qdt(self.components)),
            "cpt" => Ok(ModelKind::Cpt),
            other => Err(Error::Config(format!("unknown model `{other}` in {RUN_FILE}"))),
        }
    }
}

/// Writes through a temporary sibling file and renames it into place, so a
/// reader never sees a partial file.
pub(crate) fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        let mut out = BufWriter::new(file);
        fill(&mut out)?;
        out.flush().map_err(|e| Error::io(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, |out| {
        serde_json::to_writer_pretty(&mut *out, value)?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))
    })
}

pub(crate) fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Writes a CSV with the given header and rows.
pub(crate) fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    write_atomic(path, |out| {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(header)?;
        for row in rows {
            wtr.write_record(row)?;
        }
        wtr.flush().map_err(|e| Error::io(path, e))
    })
}

/// `<dir>/params/<subject>.json`.
pub fn params_path(dir: &Path, subject: &str) -> Result<PathBuf> {
    let safe = !subject.is_empty()
        && subject != "."
        && subject != ".."
        && !subject.contains(['/', '\\', '\0']);
    if !safe {
        return Err(Error::invariant(
            "subject_id",
            format!("`{subject}` cannot be used as a file name"),
        ));
    }
    Ok(dir.join(PARAMS_DIR).join(format!("{subject}.json")))
}

pub fn load_run_record(dir: &Path) -> Result<RunRecord> {
    let path = dir.join(RUN_FILE);
    if !path.exists() {
        return Err(Error::MissingParams {
            subject: "*".into(),
            dir: dir.to_path_buf(),
        });
    }
    read_json(&path)
}

/// Per-fold fits stored for one subject.
pub fn load_params(dir: &Path, subject: &str) -> Result<Vec<FitResult>> {
    let path = params_path(dir, subject)?;
    if !path.exists() {
        return Err(Error::MissingParams {
            subject: subject.to_owned(),
            dir: dir.join(PARAMS_DIR),
        });
    }
    read_json(&path)
}

/// Loads, validates and derives a trial file, grouped by subject in sorted
/// order. Subjects dropped for missing responses are reported on stderr.
pub(crate) fn load_subjects(path: &Path) -> Result<Vec<(String, Vec<DerivedTrial>)>> {
    let set = load_trials(path)?;
    for s in &set.dropped_subjects {
        eprintln!("warning: dropped subject {s}: missing responses");
    }
    let derived = derive_features(&set.trials)?;
    let mut groups: Vec<(String, Vec<DerivedTrial>)> = Vec::new();
    for t in derived {
        match groups.last_mut() {
            Some((s, g)) if s == t.subject_id() => g.push(t),
            _ => groups.push((t.subject_id().to_owned(), vec![t])),
        }
    }
    Ok(groups)
}
