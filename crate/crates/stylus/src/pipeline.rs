//! Stage orchestration with memoized intermediate results.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use stylus_core::bow::{build_tdm_with, row_normalize, split_indices, InputType, SplitIndex, TermDocMatrix};
use stylus_core::classify::{lasso_fit, with_ids, Classifier, ClassifierSpec, LassoModel, Prediction};
use stylus_core::corpus::{parse_corpus_with, Author, Corpus, ParseOptions};
use stylus_core::embed::{
    aggregate_word_vectors, align_word_vectors, bow_embedding, lda_bic, lda_fit, lsa_fit, nmf_fit, parse_word_vectors,
    pick_min_bic, DocEmbedding, EmbedError, EmbedMethod, LdaConfig, LdaModel,
};
use stylus_core::eval::{density_curve, loocv_check, loocv_fold, threshold_report, DensityCurve, LoocvResult};
use stylus_core::linalg::Matrix;
use stylus_core::math::normal_quantile;
use stylus_core::mw::{default_scored_words, document_log_odds, fit_word_params, word_counts, NbWordModel, OddsReport};
use stylus_core::screen::{attribute_by_hc, bh_select, bonferroni_select, hc_statistic, pvalue_table, PValueTable};

use crate::config::{ClassifierKind, RunConfig};
use crate::data::DataFiles;
use crate::formats::{
    self, DocCall, DocProb, EvalReport, FormatError, HcRow, ModelFile, OddsReportFile, OddsSummary, ScreenParams,
    ScreenReport, WordPValue,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Config,
    Ingest,
    Bow,
    Embed,
    Screen,
    Classify,
    Mw,
    Eval,
    Table,
    Output,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Bow => "bow",
            Stage::Embed => "embed",
            Stage::Screen => "screen",
            Stage::Classify => "classify",
            Stage::Mw => "mw",
            Stage::Eval => "eval",
            Stage::Table => "table",
            Stage::Output => "output",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{stage} stage failed: {source:#}")]
pub struct StageError {
    pub stage: Stage,
    #[source]
    pub source: anyhow::Error,
}

impl StageError {
    pub fn new(stage: Stage, source: impl Into<anyhow::Error>) -> Self {
        StageError { stage, source: source.into() }
    }
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, StageError>;
}

impl<T, E: Into<anyhow::Error>> AtStage<T> for Result<T, E> {
    fn at(self, stage: Stage) -> Result<T, StageError> {
        self.map_err(|e| StageError::new(stage, e))
    }
}

impl From<FormatError> for StageError {
    fn from(e: FormatError) -> Self {
        StageError::new(Stage::Output, e)
    }
}

/// Which document features feed a classifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Features {
    /// Computed from a term-document matrix.
    Computed(InputType, EmbedMethod),
    /// Read from a CSV, keyed by a display name.
    File(String, PathBuf),
}

impl Features {
    pub fn name(&self) -> String {
        match self {
            Features::Computed(t, m) => format!("{m}+{t}"),
            Features::File(name, _) => name.clone(),
        }
    }
}

impl fmt::Display for Features {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Builds a pool with `jobs` threads, or rayon's default when `jobs` is 0.
pub fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool, rayon::ThreadPoolBuildError> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build()
}

/// Fits every candidate `K` on the pool and keeps the BIC minimizer. Same
/// result as the sequential `lda_select_k`.
pub fn lda_select_k_par(
    pool: &rayon::ThreadPool,
    tdm: &TermDocMatrix,
    candidates: &[usize],
    base: &LdaConfig,
) -> Result<(LdaModel, Vec<(usize, f64)>), EmbedError> {
    if candidates.is_empty() {
        return Err(EmbedError::NoCandidates);
    }
    let fits: Vec<LdaModel> = pool.install(|| {
        candidates
            .par_iter()
            .map(|&k| lda_fit(tdm, &LdaConfig { k, alpha: base.alpha, ..base.clone() }))
            .collect::<Result<_, _>>()
    })?;
    let scored: Vec<(usize, f64)> = fits.iter().map(|m| (m.k, lda_bic(m, tdm))).collect();
    let best = pick_min_bic(&scored).expect("nonempty");
    let mut fits = fits;
    Ok((fits.swap_remove(best), scored))
}

/// Leave-one-out cross-validation with folds spread over the pool. Fold
/// seeds depend only on the fold index, so this matches `eval::loocv`.
pub fn loocv_par<C: Classifier + ?Sized>(
    pool: &rayon::ThreadPool,
    c: &C,
    x: &Matrix,
    y: &[bool],
    doc_ids: &[u32],
    seed: u64,
) -> Result<LoocvResult, stylus_core::eval::EvalError> {
    loocv_check(x, y, doc_ids)?;
    let probs = pool.install(|| (0..y.len()).into_par_iter().map(|i| loocv_fold(c, x, y, i, seed)).collect::<Result<Vec<_>, _>>())?;
    LoocvResult::assemble(c.name(), doc_ids.to_vec(), y.to_vec(), probs)
}

/// Reads the corpus named in the configuration: a `corpus.json` written by
/// `ingest`, or the plain-text ebook.
pub fn ingest(config: &RunConfig, data: &DataFiles) -> Result<Corpus, StageError> {
    let src = &config.corpus.source;
    if src.extension().is_some_and(|e| e == "json") {
        return formats::read_corpus_json(src).at(Stage::Ingest);
    }
    let text = fs::read_to_string(src)
        .map_err(|e| anyhow::anyhow!("reading corpus {}: {e}", src.display()))
        .at(Stage::Ingest)?;
    let options = ParseOptions { lemmatize: config.corpus.lemmatize };
    let name = src.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    parse_corpus_with(&text, &data.labels, &options, &name, Some(&data.lemmatizer)).at(Stage::Ingest)
}

fn label_of(corpus: &Corpus, id: u32) -> Author {
    corpus.get(id).map(|d| d.label).expect("id taken from the corpus")
}

pub struct Workbench {
    pub config: RunConfig,
    pub data: DataFiles,
    pub corpus: Corpus,
    pool: rayon::ThreadPool,
    tdms: BTreeMap<InputType, TermDocMatrix>,
    embeddings: BTreeMap<Features, DocEmbedding>,
    lda: BTreeMap<InputType, (LdaModel, Vec<(usize, f64)>)>,
    loocv: BTreeMap<(Features, ClassifierKind), LoocvResult>,
    predictions: BTreeMap<(Features, ClassifierKind), Vec<Prediction>>,
}

impl Workbench {
    /// Ingests the corpus. `jobs = 0` lets rayon pick the thread count.
    pub fn new(config: RunConfig, data: DataFiles, jobs: usize) -> Result<Self, StageError> {
        let corpus = ingest(&config, &data)?;
        log::info!("ingested {} papers; seeds: embedding {}, classifier {}", corpus.len(), config.embedding.seed, config.classifier.seed);
        let pool = thread_pool(jobs).at(Stage::Config)?;
        Ok(Workbench {
            config,
            data,
            corpus,
            pool,
            tdms: BTreeMap::new(),
            embeddings: BTreeMap::new(),
            lda: BTreeMap::new(),
            loocv: BTreeMap::new(),
            predictions: BTreeMap::new(),
        })
    }

    pub fn pool(&self) -> &rayon::ThreadPool {
        &self.pool
    }

    /// The features named by `[bow]` and `[embedding]`.
    pub fn configured_features(&self) -> Features {
        match (self.config.embedding.method, &self.config.embedding.file) {
            (EmbedMethod::External, Some(p)) => Features::File("external".into(), p.clone()),
            (m, _) => Features::Computed(self.config.bow.input_type, m),
        }
    }

    pub fn tdm(&mut self, t: InputType) -> Result<&TermDocMatrix, StageError> {
        if !self.tdms.contains_key(&t) {
            let m = build_tdm_with(&self.corpus, t, &self.data.lists).at(Stage::Bow)?;
            log::info!("{t}: {} papers x {} words", m.n_docs(), m.n_words());
            self.tdms.insert(t, m);
        }
        Ok(&self.tdms[&t])
    }

    pub fn split(&self) -> Result<SplitIndex, StageError> {
        split_indices(&self.corpus.ids(), &self.data.labels).at(Stage::Bow)
    }

    /// LDA with topic count chosen by BIC over the configured candidates.
    pub fn lda_model(&mut self, t: InputType) -> Result<&(LdaModel, Vec<(usize, f64)>), StageError> {
        if !self.lda.contains_key(&t) {
            let tdm = self.tdm(t)?.clone();
            let base = self.config.embedding.lda();
            let r = lda_select_k_par(&self.pool, &tdm, &self.config.embedding.k_candidates, &base).at(Stage::Embed)?;
            log::info!("lda {t}: K = {} (BIC {:?})", r.0.k, r.1);
            self.lda.insert(t, r);
        }
        Ok(&self.lda[&t])
    }

    pub fn embedding(&mut self, f: &Features) -> Result<DocEmbedding, StageError> {
        if let Some(e) = self.embeddings.get(f) {
            return Ok(e.clone());
        }
        let e = match f {
            Features::File(_, path) => formats::load_embedding(path, &self.corpus.ids()).at(Stage::Embed)?,
            Features::Computed(t, method) => {
                let t = *t;
                match method {
                    EmbedMethod::Bow => bow_embedding(self.tdm(t)?),
                    EmbedMethod::Lda => self.lda_model(t)?.0.embedding(),
                    EmbedMethod::Lsa => {
                        let rank = self.config.embedding.rank;
                        lsa_fit(self.tdm(t)?, rank).at(Stage::Embed)?.embedding()
                    }
                    EmbedMethod::Nmf => {
                        let cfg = self.config.embedding.nmf();
                        nmf_fit(self.tdm(t)?, &cfg).at(Stage::Embed)?.embedding()
                    }
                    EmbedMethod::Aggregate => {
                        let path = self.config.embedding.file.clone().ok_or_else(|| {
                            StageError::new(Stage::Embed, anyhow::anyhow!("aggregate embedding needs embedding.file"))
                        })?;
                        let text = fs::read_to_string(&path)
                            .map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))
                            .at(Stage::Embed)?;
                        let wv = parse_word_vectors(&text).at(Stage::Embed)?;
                        let tdm = self.tdm(t)?;
                        let (z, cov) = align_word_vectors(&wv, &tdm.vocab);
                        log::info!("word vectors cover {cov:?}");
                        aggregate_word_vectors(&row_normalize(tdm), &z).at(Stage::Embed)?
                    }
                    EmbedMethod::External => {
                        return Err(StageError::new(Stage::Embed, anyhow::anyhow!("external features need a file")));
                    }
                }
            }
        };
        self.embeddings.insert(f.clone(), e.clone());
        Ok(e)
    }

    /// Training design: labeled rows, Madison flags and their ids.
    fn training(&mut self, f: &Features) -> Result<(DocEmbedding, SplitIndex), StageError> {
        let e = self.embedding(f)?;
        let split = split_indices(&e.doc_ids, &self.data.labels).at(Stage::Bow)?;
        Ok((e, split))
    }

    pub fn classifier(&self, kind: ClassifierKind) -> ClassifierSpec {
        self.config.classifier.spec(kind)
    }

    pub fn loocv(&mut self, f: &Features, kind: ClassifierKind) -> Result<LoocvResult, StageError> {
        let key = (f.clone(), kind);
        if let Some(r) = self.loocv.get(&key) {
            return Ok(r.clone());
        }
        let (e, split) = self.training(f)?;
        let train = e.select_rows(&split.train);
        let spec = self.classifier(kind);
        let mut r = loocv_par(&self.pool, &spec, &train.values, &split.train_madison, &train.doc_ids, self.config.classifier.seed)
            .at(Stage::Eval)?;
        r.method = format!("{f}+{kind}");
        log::info!("{}: l2 {:.4}", r.method, r.l2_loss);
        self.loocv.insert(key, r.clone());
        Ok(r)
    }

    /// Fits on all labeled papers and scores the disputed and joint ones.
    pub fn predict(&mut self, f: &Features, kind: ClassifierKind) -> Result<Vec<Prediction>, StageError> {
        let key = (f.clone(), kind);
        if let Some(p) = self.predictions.get(&key) {
            return Ok(p.clone());
        }
        let (e, split) = self.training(f)?;
        let train = e.select_rows(&split.train);
        let rows: Vec<usize> = split.test.iter().chain(&split.joint).copied().collect();
        let target = e.select_rows(&rows);
        let spec = self.classifier(kind);
        let preds = spec
            .fit_predict(&train.values, &split.train_madison, &target.values, self.config.classifier.seed)
            .at(Stage::Classify)?;
        let preds = with_ids(preds, &target.doc_ids);
        self.predictions.insert(key, preds.clone());
        Ok(preds)
    }

    /// LASSO fit on all labeled papers with coefficients keyed by feature name.
    pub fn lasso_model(&mut self, f: &Features) -> Result<(LassoModel, ModelFile), StageError> {
        let (e, split) = self.training(f)?;
        let train = e.select_rows(&split.train);
        let cfg = match self.classifier(ClassifierKind::Lasso) {
            ClassifierSpec::Lasso(c) => c,
            ClassifierSpec::Bart(_) => unreachable!(),
        };
        let m = lasso_fit(&train.values, &split.train_madison, &cfg).at(Stage::Classify)?;
        let names = self.feature_names(f, e.dim())?;
        let coefficients = m.coefficients().into_iter().map(|(j, b)| (names[j].clone(), b)).collect();
        let file = ModelFile::Lasso { intercept: m.intercept, coefficients, lambda: m.lambda };
        Ok((m, file))
    }

    /// Summary of the model fit on all labeled papers.
    pub fn model_file(&mut self, f: &Features, kind: ClassifierKind) -> Result<ModelFile, StageError> {
        match self.classifier(kind) {
            ClassifierSpec::Lasso(_) => Ok(self.lasso_model(f)?.1),
            ClassifierSpec::Bart(cfg) => {
                let (_, split) = self.training(f)?;
                let n = split.train_madison.len().max(1) as f64;
                let ybar = split.train_madison.iter().filter(|&&y| y).count() as f64 / n;
                Ok(ModelFile::Bart {
                    trees: cfg.m,
                    burn_in: cfg.burn_in,
                    draws: cfg.draws,
                    seed: self.config.classifier.seed,
                    offset: normal_quantile(ybar),
                })
            }
        }
    }

    pub fn feature_names(&mut self, f: &Features, dim: usize) -> Result<Vec<String>, StageError> {
        let prefix = match f {
            Features::Computed(t, EmbedMethod::Bow) => return Ok(self.tdm(*t)?.vocab.clone()),
            Features::Computed(_, EmbedMethod::Lda) => "topic",
            Features::Computed(_, EmbedMethod::Nmf) => "factor",
            _ => "dim",
        };
        Ok((1..=dim).map(|k| format!("{prefix}_{k}")).collect())
    }

    pub fn eval_report(&mut self, f: &Features, kind: ClassifierKind) -> Result<(EvalReport, DensityCurve), StageError> {
        let r = self.loocv(f, kind)?;
        let preds = self.predict(f, kind)?;
        let th = threshold_report(&r.probs, &r.labels, self.config.eval.fixed_threshold).at(Stage::Eval)?;
        let disputed: Vec<f64> = preds
            .iter()
            .filter(|p| p.doc_id.is_some_and(|id| label_of(&self.corpus, id) == Author::Disputed))
            .map(|p| p.prob_madison)
            .collect();
        let density = density_curve(&r.probs, &r.labels, &disputed).at(Stage::Eval)?;
        let loocv = r
            .doc_ids
            .iter()
            .zip(&r.probs)
            .map(|(&doc_id, &p)| DocProb { doc_id, label: label_of(&self.corpus, doc_id), prob_madison: p })
            .collect();
        let predictions = preds
            .iter()
            .map(|p| {
                let doc_id = p.doc_id.expect("ids attached");
                DocCall {
                    doc_id,
                    label: label_of(&self.corpus, doc_id),
                    prob_madison: p.prob_madison,
                    lo95: p.lo95,
                    hi95: p.hi95,
                    decision: if p.prob_madison > th.roc_threshold { Author::Madison } else { Author::Hamilton },
                }
            })
            .collect();
        let (input_type, embedding) = match f {
            Features::Computed(t, m) => (t.to_string(), m.to_string()),
            Features::File(name, _) => (String::from("none"), name.clone()),
        };
        let report = EvalReport {
            input_type,
            embedding,
            classifier: kind.to_string(),
            embedding_seed: self.config.embedding.seed,
            classifier_seed: self.config.classifier.seed,
            l2_loss: r.l2_loss,
            thresholds: th,
            loocv,
            predictions,
        };
        Ok((report, density))
    }

    /// Hamilton and Madison row positions in the corpus order.
    fn author_rows(&self) -> Result<(Vec<usize>, Vec<usize>), StageError> {
        let split = self.split()?;
        let pick = |m: bool| split.train.iter().zip(&split.train_madison).filter(|(_, &y)| y == m).map(|(&i, _)| i).collect();
        Ok((pick(false), pick(true)))
    }

    /// Disputed then joint papers, ascending within each group.
    fn scored_docs(&self) -> Result<Vec<usize>, StageError> {
        let split = self.split()?;
        Ok(split.test.iter().chain(&split.joint).copied().collect())
    }

    pub fn pvalues(&mut self, t: InputType) -> Result<PValueTable, StageError> {
        let (h, m) = self.author_rows()?;
        let ids = self.corpus.ids();
        let g1: Vec<u32> = h.iter().map(|&i| ids[i]).collect();
        let g2: Vec<u32> = m.iter().map(|&i| ids[i]).collect();
        pvalue_table(self.tdm(t)?, &g1, &g2).at(Stage::Screen)
    }

    /// HC distance of every disputed and joint paper to each author's pool.
    pub fn hc_rows(&mut self) -> Result<Vec<HcRow>, StageError> {
        let t = self.config.screen.input_type;
        let hc = self.config.screen.hc();
        let (h, m) = self.author_rows()?;
        let docs = self.scored_docs()?;
        let tdm = self.tdm(t)?.clone();
        let ham = tdm.pooled(&h);
        let mad = tdm.pooled(&m);
        let corpus = &self.corpus;
        self.pool.install(|| {
            docs.par_iter()
                .map(|&i| {
                    let row: Vec<u64> = tdm.row(i).iter().map(|&c| u64::from(c)).collect();
                    let a = attribute_by_hc(&row, &ham, &mad, &tdm.vocab, &hc).at(Stage::Screen)?;
                    let doc_id = tdm.doc_ids[i];
                    Ok(HcRow {
                        doc_id,
                        label: label_of(corpus, doc_id),
                        hamilton: a.d_hamilton,
                        madison: a.d_madison,
                        diff: a.diff,
                        decision: a.author,
                    })
                })
                .collect()
        })
    }

    pub fn screen_report(&mut self) -> Result<(ScreenReport, PValueTable), StageError> {
        let s = self.config.screen.clone();
        let table = self.pvalues(s.input_type)?;
        let hc = hc_statistic(&table.p, &s.hc()).at(Stage::Screen)?;
        let names = |idx: &[usize]| idx.iter().map(|&i| table.words[i].clone()).collect::<Vec<_>>();
        let mut words: Vec<WordPValue> = (0..table.len())
            .map(|i| WordPValue { word: table.words[i].clone(), p: table.p[i], x1: table.x1[i], m: table.m[i] })
            .collect();
        words.sort_by(|a, b| a.p.total_cmp(&b.p).then_with(|| a.word.cmp(&b.word)));
        let report = ScreenReport {
            params: ScreenParams {
                input_type: s.input_type.to_string(),
                group1: Author::Hamilton.to_string(),
                group2: Author::Madison.to_string(),
                gamma0: s.gamma0,
                min_p_floor: s.min_p_floor,
                fdr: s.fdr,
                alpha: s.alpha,
            },
            words,
            hc_statistic: hc.i_star.map(|_| hc.statistic),
            i_star: hc.i_star,
            t_hc: hc.t_hc,
            hc_selected: names(&hc.selected),
            bh_selected: names(&bh_select(&table.p, s.fdr)),
            bonferroni_selected: names(&bonferroni_select(&table.p, s.alpha)),
            attributions: self.hc_rows()?,
        };
        Ok((report, table))
    }

    /// Negative-binomial word models from the labeled papers and log-odds
    /// for the disputed and joint ones.
    pub fn mw(&mut self) -> Result<(Vec<NbWordModel>, Vec<OddsReport>), StageError> {
        let (h, m) = self.author_rows()?;
        let docs = self.scored_docs()?;
        let tdm = self.tdm(InputType::Type3)?.clone();
        let lengths: Vec<u64> = tdm
            .doc_ids
            .iter()
            .map(|&id| self.corpus.get(id).map_or(0, |d| d.tokens.len() as u64))
            .collect();
        let mw = self.config.mw.clone();
        let words = match &mw.words {
            Some(w) => w.clone(),
            None => {
                let train: Vec<usize> = h.iter().chain(&m).copied().collect();
                default_scored_words(&tdm, &self.data.lists.markers, &train, mw.min_pooled)
            }
        };
        let priors = mw.priors();
        let models: Vec<NbWordModel> = self
            .pool
            .install(|| {
                words
                    .par_iter()
                    .map(|w| {
                        let (hc, mc) = word_counts(&tdm, &lengths, &h, &m, w)?;
                        fit_word_params(w, &hc, &mc, &priors)
                    })
                    .collect::<Result<_, _>>()
            })
            .at(Stage::Mw)?;
        let mut reports = Vec::with_capacity(docs.len());
        for i in docs {
            let counts: BTreeMap<String, u32> =
                words.iter().filter_map(|w| tdm.col_index(w).map(|j| (w.clone(), tdm.get(i, j)))).collect();
            let mut r = document_log_odds(&counts, lengths[i], &models, mw.prior_odds, false).at(Stage::Mw)?;
            r.doc_id = Some(tdm.doc_ids[i]);
            reports.push(r);
        }
        Ok((models, reports))
    }

    pub fn odds_file(&self, models: &[NbWordModel], reports: &[OddsReport]) -> OddsReportFile {
        OddsReportFile {
            prior_odds: self.config.mw.prior_odds,
            words: models.iter().map(|m| m.word.clone()).collect(),
            documents: reports
                .iter()
                .map(|r| {
                    let doc_id = r.doc_id.expect("ids attached");
                    OddsSummary {
                        doc_id,
                        label: label_of(&self.corpus, doc_id),
                        total: r.total,
                        prior_log_odds: r.prior_log_odds,
                        decision: if r.total < 0.0 { Author::Madison } else { Author::Hamilton },
                        top_words: r.top(10).into_iter().cloned().collect(),
                    }
                })
                .collect(),
        }
    }

    pub fn out_path(&self, name: &str) -> PathBuf {
        self.config.output.dir.join(name)
    }
}

/// Everything `run_pipeline` wrote.
#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub report: EvalReport,
    pub predictions: Vec<Prediction>,
    pub density: DensityCurve,
    pub files: Vec<PathBuf>,
}

/// ingest → bow → embed → classify → eval, writing `eval_report.json`,
/// `predictions.csv` and `density.csv` to the output directory.
pub fn run_pipeline(config: RunConfig, data: DataFiles, jobs: usize) -> Result<ReportBundle, StageError> {
    let mut wb = Workbench::new(config, data, jobs)?;
    run_pipeline_on(&mut wb)
}

pub fn run_pipeline_on(wb: &mut Workbench) -> Result<ReportBundle, StageError> {
    let f = wb.configured_features();
    if let Features::Computed(t, _) = &f {
        wb.tdm(*t)?;
    }
    wb.embedding(&f)?;
    let kind = wb.config.classifier.method;
    let predictions = wb.predict(&f, kind)?;
    let (report, density) = wb.eval_report(&f, kind)?;
    let files = vec![wb.out_path("eval_report.json"), wb.out_path("predictions.csv"), wb.out_path("density.csv")];
    formats::write_eval_report(&files[0], &report)?;
    formats::write_predictions_csv(&files[1], &predictions)?;
    formats::write_density_csv(&files[2], &density)?;
    Ok(ReportBundle { report, predictions, density, files })
}

/// Loads the configuration, mapping a missing corpus file to the ingest stage.
pub fn load_config(path: &Path) -> Result<RunConfig, StageError> {
    use crate::config::ConfigError;
    RunConfig::load(path).map_err(|e| match e {
        ConfigError::MissingFile { key: "corpus.source", .. } => StageError::new(Stage::Ingest, e),
        e => StageError::new(Stage::Config, e),
    })
}

/// Bundled data files, replaced by `STYLUS_DATA_DIR` and `corpus.labels`
/// where given.
pub fn load_data(config: &RunConfig) -> Result<DataFiles, StageError> {
    let data = DataFiles::from_env().at(Stage::Config)?;
    match &config.corpus.labels {
        Some(p) => data.with_labels_file(p).at(Stage::Ingest),
        None => Ok(data),
    }
}
