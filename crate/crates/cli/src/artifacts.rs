//! Artifact names and atomic file output.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use tweetsent_core::classifiers::ModelKind;

use crate::failure::{Failure, Outcome};

pub const CORPUS: &str = "corpus.csv";
pub const LABELED: &str = "labeled.csv";
pub const FEATURES: &str = "features.tfidf";
pub const SPLIT: &str = "split.csv";
pub const ROC_SVG: &str = "roc.svg";
pub const ACCURACY: &str = "accuracy.csv";
pub const COMPARE: &str = "compare_features.csv";

pub fn model_file(kind: ModelKind) -> String {
    format!("model_{kind}.json")
}

pub fn per_model(prefix: &str, kind: ModelKind, ext: &str) -> String {
    format!("{prefix}_{kind}.{ext}")
}

pub struct OutputDir {
    root: PathBuf,
}

impl OutputDir {
    pub fn new(root: &Path) -> Self {
        OutputDir { root: root.to_path_buf() }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn ensure(&self) -> Outcome {
        fs::create_dir_all(&self.root).map_err(|e| Failure::io(&self.root, e))
    }

    /// Opens an artifact written by `step`, or reports that step as missing.
    pub fn open(&self, name: &str, step: &'static str) -> Outcome<BufReader<File>> {
        let path = self.path(name);
        match File::open(&path) {
            Ok(f) => Ok(BufReader::new(f)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                Err(Failure::Missing { artifact: path.display().to_string(), step })
            }
            Err(e) => Err(Failure::io(&path, e)),
        }
    }

    /// Writes through a temporary sibling file and renames it into place.
    pub fn write<F>(&self, name: &str, body: F) -> Outcome<PathBuf>
    where
        F: FnOnce(&mut BufWriter<File>) -> Outcome,
    {
        self.ensure()?;
        let path = self.path(name);
        let tmp = self.path(&format!(".{name}.tmp{}", std::process::id()));
        let result = (|| {
            let file = File::create(&tmp).map_err(|e| Failure::io(&tmp, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush().map_err(|e| Failure::io(&tmp, e))?;
            w.get_ref().sync_all().map_err(|e| Failure::io(&tmp, e))?;
            fs::rename(&tmp, &path).map_err(|e| Failure::io(&path, e))
        })();
        if result.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        result.map(|_| path)
    }

    pub fn write_str(&self, name: &str, text: &str) -> Outcome<PathBuf> {
        self.write(name, |w| w.write_all(text.as_bytes()).map_err(|e| Failure::io(name, e)))
    }
}
