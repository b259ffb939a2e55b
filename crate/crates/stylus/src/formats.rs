//! On-disk artifacts. Every writer checks its input before touching the file.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use stylus_core::bow::{InputType, TermDocMatrix};
use stylus_core::classify::Prediction;
use stylus_core::corpus::{Author, Corpus, Document, Provenance, ParseOptions};
use stylus_core::embed::{DocEmbedding, EmbedMethod, LdaModel};
use stylus_core::eval::{DensityCurve, ThresholdReport};
use stylus_core::linalg::Matrix;
use stylus_core::mw::{NbWordModel, WordContribution};
use stylus_core::screen::PValueTable;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("refusing to write {file}: {message}")]
    Invalid { file: String, message: String },
    #[error("{path}: {source}")]
    Embed { path: PathBuf, source: stylus_core::embed::EmbedError },
}

fn invalid(path: &Path, message: impl Into<String>) -> FormatError {
    let file = path.file_name().map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned());
    FormatError::Invalid { file, message: message.into() }
}

fn ensure(ok: bool, path: &Path, message: impl FnOnce() -> String) -> Result<(), FormatError> {
    if ok {
        Ok(())
    } else {
        Err(invalid(path, message()))
    }
}

fn all_finite<'a>(path: &Path, what: &str, values: impl IntoIterator<Item = &'a f64>) -> Result<(), FormatError> {
    ensure(values.into_iter().all(|v| v.is_finite()), path, || format!("non-finite value in {what}"))
}

fn is_prob(p: f64) -> bool {
    (0.0..=1.0).contains(&p)
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> FormatError + '_ {
    move |source| FormatError::Io { path: path.to_path_buf(), source }
}

fn create_parent(path: &Path) -> Result<(), FormatError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(io(dir)),
        _ => Ok(()),
    }
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    create_parent(path)?;
    let mut text =
        serde_json::to_string_pretty(value).map_err(|source| FormatError::Json { path: path.to_path_buf(), source })?;
    text.push('\n');
    fs::write(path, text).map_err(io(path))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FormatError> {
    let text = fs::read_to_string(path).map_err(io(path))?;
    serde_json::from_str(&text).map_err(|source| FormatError::Json { path: path.to_path_buf(), source })
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, FormatError> {
    create_parent(path)?;
    csv::Writer::from_path(path).map_err(|source| FormatError::Csv { path: path.to_path_buf(), source })
}

fn write_rows(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    let err = |source| FormatError::Csv { path: path.to_path_buf(), source };
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    w.flush().map_err(io(path))
}

/// Shortest round-trip decimal form.
pub fn num(v: f64) -> String {
    format!("{v}")
}

// corpus.json

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: u32,
    pub title: String,
    pub label: Author,
    pub tokens: Vec<String>,
}

pub fn write_corpus_json(path: &Path, corpus: &Corpus) -> Result<(), FormatError> {
    let mut seen = std::collections::BTreeSet::new();
    for d in &corpus.documents {
        ensure(seen.insert(d.id), path, || format!("paper {} appears twice", d.id))?;
        ensure(!d.tokens.is_empty(), path, || format!("paper {} has no tokens", d.id))?;
    }
    let records: Vec<CorpusRecord> = corpus
        .documents
        .iter()
        .map(|d| CorpusRecord { id: d.id, title: d.title.clone(), label: d.label, tokens: d.tokens.clone() })
        .collect();
    write_json(path, &records)
}

/// Reads a `corpus.json`. Raw text is not stored there, so documents get
/// their tokens joined by spaces in its place.
pub fn read_corpus_json(path: &Path) -> Result<Corpus, FormatError> {
    let records: Vec<CorpusRecord> = read_json(path)?;
    let documents = records
        .into_iter()
        .map(|r| Document { id: r.id, title: r.title, raw_text: r.tokens.join(" "), tokens: r.tokens, label: r.label })
        .collect();
    Ok(Corpus {
        documents,
        provenance: Provenance {
            source: path.display().to_string(),
            options: ParseOptions { lemmatize: false },
        },
    })
}

// tdm.csv

pub fn write_tdm_csv(path: &Path, tdm: &TermDocMatrix) -> Result<(), FormatError> {
    ensure(tdm.n_words() > 0, path, || "empty vocabulary".into())?;
    ensure(tdm.vocab.windows(2).all(|w| w[0] < w[1]), path, || "vocabulary not sorted and unique".into())?;
    let mut header = vec!["doc_id".to_string()];
    header.extend(tdm.vocab.iter().cloned());
    let rows: Vec<Vec<String>> = (0..tdm.n_docs())
        .map(|i| {
            let mut r = vec![tdm.doc_ids[i].to_string()];
            r.extend(tdm.row(i).iter().map(u32::to_string));
            r
        })
        .collect();
    write_rows(path, &header, &rows)
}

pub fn read_tdm_csv(path: &Path, input_type: InputType) -> Result<TermDocMatrix, FormatError> {
    let mut rd = csv::Reader::from_path(path).map_err(|source| FormatError::Csv { path: path.to_path_buf(), source })?;
    let header = rd.headers().map_err(|source| FormatError::Csv { path: path.to_path_buf(), source })?.clone();
    let vocab: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|source| FormatError::Csv { path: path.to_path_buf(), source })?;
        let bad = |m: &str| FormatError::Parse { path: path.to_path_buf(), message: format!("row {}: {m}", line + 1) };
        let mut it = rec.iter();
        ids.push(it.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad doc_id"))?);
        let row = it.map(|s| s.parse::<u32>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad("bad count"))?;
        if row.len() != vocab.len() {
            return Err(bad("wrong number of columns"));
        }
        rows.push(row);
    }
    Ok(TermDocMatrix::from_rows(&rows, ids, vocab, input_type))
}

// embedding.csv

pub fn write_embedding_csv(path: &Path, e: &DocEmbedding) -> Result<(), FormatError> {
    ensure(e.dim() > 0, path, || "zero-dimensional embedding".into())?;
    ensure(e.values.rows() == e.doc_ids.len(), path, || "row count differs from doc ids".into())?;
    all_finite(path, "embedding", e.values.as_slice())?;
    let mut header = vec!["doc_id".to_string()];
    header.extend((1..=e.dim()).map(|k| format!("dim_{k}")));
    let rows: Vec<Vec<String>> = (0..e.values.rows())
        .map(|i| {
            let mut r = vec![e.doc_ids[i].to_string()];
            r.extend(e.values.row(i).iter().map(|&v| num(v)));
            r
        })
        .collect();
    write_rows(path, &header, &rows)
}

/// Reads `doc_id, v1, …, vp` rows (with a header) computed elsewhere, for
/// example by a hosted language model, ordered as `expected_docs`.
pub fn load_embedding(path: &Path, expected_docs: &[u32]) -> Result<DocEmbedding, FormatError> {
    let mut rd = csv::Reader::from_path(path).map_err(|source| FormatError::Csv { path: path.to_path_buf(), source })?;
    let mut rows = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|source| FormatError::Csv { path: path.to_path_buf(), source })?;
        let bad = |m: &str| FormatError::Parse { path: path.to_path_buf(), message: format!("row {}: {m}", line + 1) };
        let mut it = rec.iter();
        let id: u32 = it.next().and_then(|s| s.trim().parse().ok()).ok_or_else(|| bad("bad doc_id"))?;
        let v = it.map(|s| s.trim().parse::<f64>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad("bad value"))?;
        rows.push((id, v));
    }
    DocEmbedding::from_keyed_rows(rows, expected_docs, EmbedMethod::External)
        .map_err(|source| FormatError::Embed { path: path.to_path_buf(), source })
}

// lda_model.json

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModelFile {
    #[serde(rename = "K")]
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub doc_ids: Vec<u32>,
    pub vocab: Vec<String>,
    pub doc_topic: Vec<Vec<f64>>,
    pub topic_word: Vec<Vec<f64>>,
    pub log_likelihood: f64,
    /// `(K, BIC)` for every candidate tried.
    pub bic: Vec<(usize, f64)>,
}

fn rows_of(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn simplex_rows(m: &Matrix) -> bool {
    (0..m.rows()).all(|i| (m.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-9 && m.row(i).iter().all(|&v| v >= 0.0))
}

pub fn write_lda_model_json(path: &Path, model: &LdaModel, vocab: &[String], bic: &[(usize, f64)]) -> Result<(), FormatError> {
    ensure(model.doc_topic.cols() == model.k && model.topic_word.rows() == model.k, path, || "topic count mismatch".into())?;
    ensure(model.topic_word.cols() == vocab.len(), path, || "vocabulary size mismatch".into())?;
    ensure(simplex_rows(&model.doc_topic) && simplex_rows(&model.topic_word), path, || "rows are not distributions".into())?;
    all_finite(path, "bic", bic.iter().map(|(_, b)| b))?;
    let file = LdaModelFile {
        k: model.k,
        alpha: model.alpha,
        beta: model.beta,
        doc_ids: model.doc_ids.clone(),
        vocab: vocab.to_vec(),
        doc_topic: rows_of(&model.doc_topic),
        topic_word: rows_of(&model.topic_word),
        log_likelihood: model.log_likelihood,
        bic: bic.to_vec(),
    };
    write_json(path, &file)
}

// screen_report.json, wordcloud.csv

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenParams {
    pub input_type: String,
    pub group1: String,
    pub group2: String,
    pub gamma0: f64,
    pub min_p_floor: bool,
    pub fdr: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordPValue {
    pub word: String,
    pub p: f64,
    pub x1: u64,
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HcRow {
    pub doc_id: u32,
    pub label: Author,
    pub hamilton: f64,
    pub madison: f64,
    pub diff: f64,
    pub decision: Author,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenReport {
    pub params: ScreenParams,
    /// Ranked by p-value, ties by word.
    pub words: Vec<WordPValue>,
    /// `None` when no rank was admissible.
    pub hc_statistic: Option<f64>,
    pub i_star: Option<usize>,
    pub t_hc: Option<f64>,
    pub hc_selected: Vec<String>,
    pub bh_selected: Vec<String>,
    pub bonferroni_selected: Vec<String>,
    pub attributions: Vec<HcRow>,
}

pub fn write_screen_report(path: &Path, r: &ScreenReport) -> Result<(), FormatError> {
    ensure(r.words.iter().all(|w| is_prob(w.p) && w.x1 <= w.m), path, || "p-value outside [0, 1]".into())?;
    ensure(r.hc_statistic.is_none_or(f64::is_finite), path, || "non-finite HC statistic".into())?;
    ensure(r.bonferroni_selected.iter().all(|w| r.bh_selected.contains(w)), path, || "Bonferroni set not inside BH set".into())?;
    for a in &r.attributions {
        all_finite(path, "HC distances", [&a.hamilton, &a.madison, &a.diff])?;
    }
    write_json(path, r)
}

/// Word weights `−log10 p`, heaviest first. Underflowed p-values are floored
/// at the smallest positive normal double.
pub fn wordcloud_rows(t: &PValueTable) -> Vec<(String, f64)> {
    let mut rows: Vec<(String, f64)> =
        t.words.iter().zip(&t.p).map(|(w, &p)| (w.clone(), -p.max(f64::MIN_POSITIVE).log10())).collect();
    rows.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows
}

pub fn write_wordcloud_csv(path: &Path, t: &PValueTable) -> Result<(), FormatError> {
    ensure(t.p.iter().all(|&p| is_prob(p)), path, || "p-value outside [0, 1]".into())?;
    let rows: Vec<Vec<String>> = wordcloud_rows(t).into_iter().map(|(w, v)| vec![w, num(v)]).collect();
    write_rows(path, &["word".into(), "weight".into()], &rows)
}

// model.json, predictions.csv

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum ModelFile {
    Lasso {
        intercept: f64,
        /// Nonzero coefficients on the standardized feature scale.
        coefficients: BTreeMap<String, f64>,
        lambda: f64,
    },
    Bart {
        trees: usize,
        burn_in: usize,
        draws: usize,
        seed: u64,
        offset: f64,
    },
}

pub fn write_model_json(path: &Path, m: &ModelFile) -> Result<(), FormatError> {
    match m {
        ModelFile::Lasso { intercept, coefficients, lambda } => {
            all_finite(path, "coefficients", coefficients.values().chain([intercept, lambda]))?;
            ensure(*lambda >= 0.0, path, || "negative lambda".into())?;
        }
        ModelFile::Bart { offset, trees, draws, .. } => {
            all_finite(path, "offset", [offset])?;
            ensure(*trees > 0 && *draws > 0, path, || "empty ensemble".into())?;
        }
    }
    write_json(path, m)
}

pub fn write_predictions_csv(path: &Path, preds: &[Prediction]) -> Result<(), FormatError> {
    for p in preds {
        ensure(p.doc_id.is_some(), path, || "prediction without doc id".into())?;
        ensure(is_prob(p.prob_madison), path, || format!("probability {} outside [0, 1]", p.prob_madison))?;
        if let (Some(lo), Some(hi)) = (p.lo95, p.hi95) {
            ensure(is_prob(lo) && is_prob(hi) && lo <= hi, path, || "bad 95% interval".into())?;
        }
    }
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    let rows: Vec<Vec<String>> = preds
        .iter()
        .map(|p| vec![p.doc_id.unwrap_or_default().to_string(), num(p.prob_madison), opt(p.lo95), opt(p.hi95)])
        .collect();
    write_rows(path, &["doc_id".into(), "prob_madison".into(), "lo95".into(), "hi95".into()], &rows)
}

// mw_models.csv, odds_report.json

pub fn write_mw_models_csv(path: &Path, models: &[NbWordModel]) -> Result<(), FormatError> {
    for m in models {
        all_finite(path, &m.word, [&m.mu_h, &m.mu_m, &m.delta_h, &m.delta_m])?;
        ensure(m.mu_h > 0.0 && m.mu_m > 0.0 && m.delta_h >= 0.0 && m.delta_m >= 0.0, path, || {
            format!("parameters of {:?} out of range", m.word)
        })?;
    }
    let header: Vec<String> = ["word", "mu_H", "mu_M", "delta_H", "delta_M"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> =
        models.iter().map(|m| vec![m.word.clone(), num(m.mu_h), num(m.mu_m), num(m.delta_h), num(m.delta_m)]).collect();
    write_rows(path, &header, &rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OddsSummary {
    pub doc_id: u32,
    pub label: Author,
    /// Log-odds of Hamilton to Madison; negative favors Madison.
    pub total: f64,
    pub prior_log_odds: f64,
    pub decision: Author,
    pub top_words: Vec<WordContribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OddsReportFile {
    pub prior_odds: f64,
    pub words: Vec<String>,
    pub documents: Vec<OddsSummary>,
}

pub fn write_odds_report_json(path: &Path, r: &OddsReportFile) -> Result<(), FormatError> {
    for d in &r.documents {
        all_finite(path, "log-odds", [&d.total, &d.prior_log_odds])?;
        ensure(d.top_words.len() <= 10, path, || "more than ten top words".into())?;
    }
    write_json(path, r)
}

// eval_report.json, density.csv

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocProb {
    pub doc_id: u32,
    pub label: Author,
    pub prob_madison: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocCall {
    pub doc_id: u32,
    pub label: Author,
    pub prob_madison: f64,
    pub lo95: Option<f64>,
    pub hi95: Option<f64>,
    /// Attribution at the ROC threshold.
    pub decision: Author,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub input_type: String,
    pub embedding: String,
    pub classifier: String,
    pub embedding_seed: u64,
    pub classifier_seed: u64,
    pub l2_loss: f64,
    pub thresholds: ThresholdReport,
    /// Held-out probabilities of the labeled papers.
    pub loocv: Vec<DocProb>,
    /// Disputed and joint papers scored by the model fit on all labeled papers.
    pub predictions: Vec<DocCall>,
}

pub fn write_eval_report(path: &Path, r: &EvalReport) -> Result<(), FormatError> {
    ensure(r.l2_loss.is_finite() && (0.0..=1.0).contains(&r.l2_loss), path, || "l2 loss outside [0, 1]".into())?;
    let t = &r.thresholds;
    ensure([t.roc_threshold, t.f1_threshold, t.fixed_threshold].iter().all(|&v| is_prob(v)), path, || {
        "threshold outside [0, 1]".into()
    })?;
    ensure(r.loocv.iter().all(|d| is_prob(d.prob_madison)), path, || "LOOCV probability outside [0, 1]".into())?;
    ensure(r.predictions.iter().all(|d| is_prob(d.prob_madison)), path, || "prediction outside [0, 1]".into())?;
    write_json(path, r)
}

pub fn write_density_csv(path: &Path, d: &DensityCurve) -> Result<(), FormatError> {
    let mut rows = Vec::new();
    for (name, k) in [("hamilton", &d.hamilton), ("madison", &d.madison)] {
        ensure(k.grid.len() == k.density.len(), path, || "grid and density lengths differ".into())?;
        all_finite(path, name, k.grid.iter().chain(&k.density))?;
        ensure(k.density.iter().all(|&v| v >= 0.0), path, || "negative density".into())?;
        rows.extend(k.grid.iter().zip(&k.density).map(|(&x, &y)| vec![name.to_string(), num(x), num(y)]));
    }
    write_rows(path, &["author".into(), "x".into(), "density".into()], &rows)
}

/// Writes `text` verbatim; used for table CSVs built in memory.
pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    create_parent(path)?;
    let mut f = fs::File::create(path).map_err(io(path))?;
    f.write_all(text.as_bytes()).map_err(io(path))
}
