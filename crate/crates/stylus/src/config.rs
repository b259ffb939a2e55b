//! TOML run configuration.
//!
//! ```toml
//! [corpus]
//! source = "federalist.txt"   # ebook text, or a corpus.json from `ingest`
//!
//! [bow]
//! input_type = "type3"
//!
//! [embedding]
//! method = "lda"
//! seed = 1
//! k_candidates = [5, 10, 15, 20, 25]
//!
//! [classifier]
//! method = "bart"
//! seed = 2
//!
//! [output]
//! dir = "out"
//! ```
//!
//! Every section but `[corpus]` may be omitted. Unknown keys are errors and
//! relative paths resolve against the file's directory.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use stylus_core::bow::InputType;
use stylus_core::classify::{BartConfig, ClassifierSpec, LassoConfig};
use stylus_core::embed::{EmbedMethod, LdaConfig, NmfConfig};
use stylus_core::eval::FIXED_THRESHOLD;
use stylus_core::mw::NbPriorConstants;
use stylus_core::screen::HcConfig;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("{key} = {path}: file not found")]
    MissingFile { key: &'static str, path: PathBuf },
    #[error("invalid {key}: {message}")]
    Invalid { key: &'static str, message: String },
}

/// Values stored as their `Display` text, parsed back with `FromStr`.
mod text {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Lasso,
    Bart,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 2] = [ClassifierKind::Lasso, ClassifierKind::Bart];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::Lasso => "lasso",
            ClassifierKind::Bart => "bart",
        }
    }
}

impl Display for ClassifierKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ClassifierKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClassifierKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown classifier {s:?} (expected lasso or bart)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSection {
    pub source: PathBuf,
    /// `paper_id,label` table replacing the bundled one.
    #[serde(default)]
    pub labels: Option<PathBuf>,
    #[serde(default = "yes")]
    pub lemmatize: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BowSection {
    #[serde(with = "text")]
    pub input_type: InputType,
}

impl Default for BowSection {
    fn default() -> Self {
        BowSection { input_type: InputType::Type3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EmbeddingSection {
    #[serde(with = "text")]
    pub method: EmbedMethod,
    pub seed: u64,
    /// LDA topic counts tried; the BIC minimizer is kept.
    pub k_candidates: Vec<usize>,
    /// LDA document-topic prior; `50 / K` when absent.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub lda_iters: usize,
    /// LSA and NMF rank.
    pub rank: usize,
    pub nmf_iters: usize,
    /// Embedding CSV for `external`, word-vector text file for `aggregate`.
    pub file: Option<PathBuf>,
}

impl Default for EmbeddingSection {
    fn default() -> Self {
        let lda = LdaConfig::new(5, 1);
        EmbeddingSection {
            method: EmbedMethod::Lda,
            seed: 1,
            k_candidates: vec![5, 10, 15, 20, 25],
            alpha: None,
            beta: lda.beta,
            lda_iters: lda.iters,
            rank: 10,
            nmf_iters: NmfConfig::new(10, 1).iters,
            file: None,
        }
    }
}

impl EmbeddingSection {
    pub fn lda(&self) -> LdaConfig {
        LdaConfig { k: self.k_candidates[0], alpha: self.alpha, beta: self.beta, iters: self.lda_iters, seed: self.seed }
    }

    pub fn nmf(&self) -> NmfConfig {
        NmfConfig { rank: self.rank, iters: self.nmf_iters, seed: self.seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifierSection {
    pub method: ClassifierKind,
    pub seed: u64,
    pub trees: usize,
    pub burn_in: usize,
    pub draws: usize,
    pub leaf_k: f64,
    pub min_leaf: usize,
    pub path_size: usize,
    pub decades: f64,
}

impl Default for ClassifierSection {
    fn default() -> Self {
        let b = BartConfig::default();
        let l = LassoConfig::default();
        ClassifierSection {
            method: ClassifierKind::Bart,
            seed: 2,
            trees: b.m,
            burn_in: b.burn_in,
            draws: b.draws,
            leaf_k: b.k,
            min_leaf: b.min_leaf,
            path_size: l.path_size,
            decades: l.decades,
        }
    }
}

impl ClassifierSection {
    pub fn spec(&self, kind: ClassifierKind) -> ClassifierSpec {
        match kind {
            ClassifierKind::Lasso => {
                ClassifierSpec::Lasso(LassoConfig { path_size: self.path_size, decades: self.decades, ..LassoConfig::default() })
            }
            ClassifierKind::Bart => ClassifierSpec::Bart(BartConfig {
                m: self.trees,
                burn_in: self.burn_in,
                draws: self.draws,
                k: self.leaf_k,
                min_leaf: self.min_leaf,
                seed: self.seed,
                ..BartConfig::default()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScreenSection {
    #[serde(with = "text")]
    pub input_type: InputType,
    pub gamma0: f64,
    pub min_p_floor: bool,
    pub fdr: f64,
    pub alpha: f64,
}

impl Default for ScreenSection {
    fn default() -> Self {
        let hc = HcConfig::default();
        ScreenSection { input_type: InputType::Type2, gamma0: hc.gamma0, min_p_floor: hc.min_p_floor, fdr: 0.1, alpha: 0.05 }
    }
}

impl ScreenSection {
    pub fn hc(&self) -> HcConfig {
        HcConfig { gamma0: self.gamma0, min_p_floor: self.min_p_floor }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MwSection {
    /// Words scored; when absent, marker words with enough pooled uses.
    pub words: Option<Vec<String>>,
    pub min_pooled: u64,
    pub prior_odds: f64,
    pub priors: [f64; 5],
}

impl Default for MwSection {
    fn default() -> Self {
        let p = NbPriorConstants::default();
        MwSection { words: None, min_pooled: 10, prior_odds: 1.0, priors: [p.beta1, p.beta2, p.beta3, p.beta4, p.beta5] }
    }
}

impl MwSection {
    pub fn priors(&self) -> NbPriorConstants {
        let [beta1, beta2, beta3, beta4, beta5] = self.priors;
        NbPriorConstants { beta1, beta2, beta3, beta4, beta5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalSection {
    pub fixed_threshold: f64,
}

impl Default for EvalSection {
    fn default() -> Self {
        EvalSection { fixed_threshold: FIXED_THRESHOLD }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: PathBuf::from("out") }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TablesSection {
    /// Extra embedding CSVs shown as additional table columns, by name.
    pub external: BTreeMap<String, PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: CorpusSection,
    #[serde(default)]
    pub bow: BowSection,
    #[serde(default)]
    pub embedding: EmbeddingSection,
    #[serde(default)]
    pub classifier: ClassifierSection,
    #[serde(default)]
    pub screen: ScreenSection,
    #[serde(default)]
    pub mw: MwSection,
    #[serde(default)]
    pub eval: EvalSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub tables: TablesSection,
}

fn yes() -> bool {
    true
}

fn invalid(key: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { key, message: message.into() }
}

impl RunConfig {
    /// Defaults everywhere except the corpus source.
    pub fn with_source(source: impl Into<PathBuf>) -> Self {
        RunConfig {
            corpus: CorpusSection { source: source.into(), labels: None, lemmatize: true },
            bow: BowSection::default(),
            embedding: EmbeddingSection::default(),
            classifier: ClassifierSection::default(),
            screen: ScreenSection::default(),
            mw: MwSection::default(),
            eval: EvalSection::default(),
            output: OutputSection::default(),
            tables: TablesSection::default(),
        }
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let mut c: RunConfig = toml::from_str(text).map_err(|source| ConfigError::Parse { path: path.to_path_buf(), source })?;
        if let Some(dir) = path.parent() {
            c.resolve_paths(dir);
        }
        Ok(c)
    }

    /// Reads, resolves paths and validates.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        let c = Self::parse(&text, path)?;
        c.validate()?;
        Ok(c)
    }

    pub fn resolve_paths(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        fix(&mut self.corpus.source);
        if let Some(p) = self.corpus.labels.as_mut() {
            fix(p);
        }
        if let Some(p) = self.embedding.file.as_mut() {
            fix(p);
        }
        self.tables.external.values_mut().for_each(fix);
        fix(&mut self.output.dir);
    }

    /// Range checks, then existence of every referenced input file.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let e = &self.embedding;
        if e.k_candidates.is_empty() || e.k_candidates.contains(&0) {
            return Err(invalid("embedding.k_candidates", "need at least one positive topic count"));
        }
        if e.alpha.is_some_and(|a| !(a > 0.0)) || !(e.beta > 0.0) {
            return Err(invalid("embedding.alpha/beta", "Dirichlet parameters must be positive"));
        }
        if e.rank == 0 || e.lda_iters == 0 || e.nmf_iters == 0 {
            return Err(invalid("embedding", "rank and iteration counts must be positive"));
        }
        let c = &self.classifier;
        if c.trees == 0 || c.draws == 0 || c.path_size == 0 || !(c.leaf_k > 0.0) || !(c.decades > 0.0) {
            return Err(invalid("classifier", "trees, draws, path_size, leaf_k and decades must be positive"));
        }
        let s = &self.screen;
        if !(s.gamma0 > 0.0 && s.gamma0 <= 1.0) {
            return Err(invalid("screen.gamma0", "must lie in (0, 1]"));
        }
        if !(s.fdr > 0.0 && s.fdr < 1.0) || !(s.alpha > 0.0 && s.alpha < 1.0) {
            return Err(invalid("screen.fdr/alpha", "must lie in (0, 1)"));
        }
        if !(self.mw.prior_odds > 0.0 && self.mw.prior_odds.is_finite()) {
            return Err(invalid("mw.prior_odds", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.eval.fixed_threshold) {
            return Err(invalid("eval.fixed_threshold", "must lie in [0, 1]"));
        }
        let need_file = matches!(e.method, EmbedMethod::External | EmbedMethod::Aggregate);
        if need_file && e.file.is_none() {
            return Err(invalid("embedding.file", format!("required by method {}", e.method)));
        }
        let exists = |key: &'static str, p: &Path| {
            if p.is_file() {
                Ok(())
            } else {
                Err(ConfigError::MissingFile { key, path: p.to_path_buf() })
            }
        };
        exists("corpus.source", &self.corpus.source)?;
        if let Some(p) = &self.corpus.labels {
            exists("corpus.labels", p)?;
        }
        if need_file {
            exists("embedding.file", e.file.as_deref().expect("checked above"))?;
        }
        for p in self.tables.external.values() {
            exists("tables.external", p)?;
        }
        Ok(())
    }

    /// Sets every seed to `seed`.
    pub fn override_seed(&mut self, seed: u64) {
        self.embedding.seed = seed;
        self.classifier.seed = seed;
    }
}
