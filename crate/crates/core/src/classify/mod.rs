//! Binary authorship classifiers: ℓ1-penalized logistic regression and
//! probit Bayesian additive regression trees.

mod bart;
mod lasso;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;

pub use bart::{bart_fit, bart_fit_predict, bart_predict, BartConfig, BartModel, BartSampler, Tree, TreeNode};
pub use lasso::{
    kkt_violation, lasso_fit, lasso_predict, logistic_gradient, logistic_loss, LassoConfig, LassoModel, PathPoint,
    Standardization,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("non-finite feature at row {row}, column {col}")]
    NonFiniteFeature { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{rows} feature rows but {labels} labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("need at least {0} training rows")]
    TooFewRows(usize),
}

/// Predicted probability of Madison authorship for one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub doc_id: Option<u32>,
    pub prob_madison: f64,
    /// 2.5% and 97.5% posterior percentiles (BART only).
    pub lo95: Option<f64>,
    pub hi95: Option<f64>,
    /// Per-draw probabilities (BART only).
    pub draws: Vec<f64>,
}

impl Prediction {
    pub fn point(prob: f64) -> Self {
        Prediction { doc_id: None, prob_madison: prob, lo95: None, hi95: None, draws: Vec::new() }
    }
}

/// Attaches document ids to predictions in row order.
pub fn with_ids(mut preds: Vec<Prediction>, ids: &[u32]) -> Vec<Prediction> {
    for (p, id) in preds.iter_mut().zip(ids) {
        p.doc_id = Some(*id);
    }
    preds
}

pub(crate) fn check_training(x: &Matrix, y: &[bool]) -> Result<(), ClassifyError> {
    if x.rows() != y.len() {
        return Err(ClassifyError::LengthMismatch { rows: x.rows(), labels: y.len() });
    }
    if x.rows() < 2 {
        return Err(ClassifyError::TooFewRows(2));
    }
    if y.iter().all(|&v| v) || y.iter().all(|&v| !v) {
        return Err(ClassifyError::SingleClass);
    }
    check_finite(x)
}

pub(crate) fn check_finite(x: &Matrix) -> Result<(), ClassifyError> {
    for i in 0..x.rows() {
        if let Some(col) = x.row(i).iter().position(|v| !v.is_finite()) {
            return Err(ClassifyError::NonFiniteFeature { row: i, col });
        }
    }
    Ok(())
}

/// A fit-then-predict procedure usable inside cross-validation.
pub trait Classifier: Sync {
    fn name(&self) -> String;
    fn fit_predict(&self, x_train: &Matrix, y_train: &[bool], x_test: &Matrix, seed: u64)
        -> Result<Vec<Prediction>, ClassifyError>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ClassifierSpec {
    Lasso(LassoConfig),
    Bart(BartConfig),
}

impl Classifier for ClassifierSpec {
    fn name(&self) -> String {
        match self {
            ClassifierSpec::Lasso(_) => String::from("lasso"),
            ClassifierSpec::Bart(_) => String::from("bart"),
        }
    }

    fn fit_predict(&self, x_train: &Matrix, y_train: &[bool], x_test: &Matrix, seed: u64)
        -> Result<Vec<Prediction>, ClassifyError> {
        match self {
            ClassifierSpec::Lasso(cfg) => {
                let m = lasso_fit(x_train, y_train, cfg)?;
                lasso_predict(&m, x_test)
            }
            ClassifierSpec::Bart(cfg) => {
                let cfg = BartConfig { seed, keep_trees: false, ..cfg.clone() };
                bart_fit_predict(x_train, y_train, x_test, &cfg)
            }
        }
    }
}
