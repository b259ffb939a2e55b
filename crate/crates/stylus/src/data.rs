//! Word lists, labels and the verb table, bundled or read from a directory.

use std::fs;
use std::path::{Path, PathBuf};

use stylus_core::corpus::{
    LabelTable, Lemmatizer, WordList, WordListKind, WordLists, FUNCTION70_TXT, LABELS_CSV, MARKERS_TXT,
    STOPWORDS_TXT, VERBS_TXT,
};

/// Directory whose files replace the bundled copies.
pub const DATA_DIR_ENV: &str = "STYLUS_DATA_DIR";

pub const LABELS_FILE: &str = "labels.csv";
pub const VERBS_FILE: &str = "verbs.txt";

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("data directory {0} does not exist")]
    MissingDir(PathBuf),
    #[error("reading {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Labels { path: PathBuf, source: stylus_core::corpus::CorpusError },
}

#[derive(Debug, Clone)]
pub struct DataFiles {
    pub lists: WordLists,
    pub labels: LabelTable,
    pub lemmatizer: Lemmatizer,
}

impl DataFiles {
    pub fn bundled() -> Self {
        let lists = WordLists::bundled();
        let lemmatizer = Lemmatizer::new(VERBS_TXT, &lists);
        DataFiles { lists, labels: LabelTable::bundled(), lemmatizer }
    }

    /// Files present in `dir` replace their bundled counterparts; absent ones
    /// keep the bundled copy.
    pub fn from_dir(dir: &Path) -> Result<Self, DataError> {
        if !dir.is_dir() {
            return Err(DataError::MissingDir(dir.to_path_buf()));
        }
        let read = |name: &str, fallback: &'static str| -> Result<String, DataError> {
            let path = dir.join(name);
            if path.is_file() {
                log::info!("using {}", path.display());
                fs::read_to_string(&path).map_err(|source| DataError::Read { path, source })
            } else {
                Ok(fallback.to_string())
            }
        };
        let list = |kind: WordListKind, fallback| Ok::<_, DataError>(WordList::parse(kind, &read(kind.file_name(), fallback)?));
        let lists = WordLists {
            stopwords: list(WordListKind::Stopwords, STOPWORDS_TXT)?,
            function70: list(WordListKind::FunctionWords70, FUNCTION70_TXT)?,
            markers: list(WordListKind::MarkerWords145, MARKERS_TXT)?,
        };
        let labels = LabelTable::parse_csv(&read(LABELS_FILE, LABELS_CSV)?)
            .map_err(|source| DataError::Labels { path: dir.join(LABELS_FILE), source })?;
        let lemmatizer = Lemmatizer::new(&read(VERBS_FILE, VERBS_TXT)?, &lists);
        Ok(DataFiles { lists, labels, lemmatizer })
    }

    /// Honors [`DATA_DIR_ENV`] when set.
    pub fn from_env() -> Result<Self, DataError> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Self::from_dir(Path::new(&dir)),
            _ => Ok(Self::bundled()),
        }
    }

    /// Replaces the label table with the one in `path`.
    pub fn with_labels_file(mut self, path: &Path) -> Result<Self, DataError> {
        let text = fs::read_to_string(path).map_err(|source| DataError::Read { path: path.to_path_buf(), source })?;
        self.labels = LabelTable::parse_csv(&text).map_err(|source| DataError::Labels { path: path.to_path_buf(), source })?;
        Ok(self)
    }
}
