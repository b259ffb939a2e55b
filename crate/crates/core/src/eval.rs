//! Leave-one-out cross-validation, loss and error rates, threshold rules and
//! kernel density summaries of predicted probabilities.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::classify::{Classifier, ClassifyError};
use crate::linalg::Matrix;
use crate::math::{exp, pow, quantile_sorted, sample_sd, sqrt};

pub const FIXED_THRESHOLD: f64 = 0.3;
pub const KDE_POINTS: usize = 512;
/// Grid half-width beyond the data, in bandwidths.
pub const KDE_REACH: f64 = 4.0;
/// Bandwidth used for a sample with no spread.
pub const SPIKE_BANDWIDTH: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("labels contain a single class")]
    SingleClass,
    #[error("labels contain no positive (Madison) case")]
    NoPositive,
    #[error("all sample points equal {0}")]
    DegenerateSample(f64),
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("{probs} probabilities but {labels} labels")]
    LengthMismatch { probs: usize, labels: usize },
    #[error("fold {index}: {error}")]
    Fold { index: usize, error: ClassifyError },
}

fn check_lengths(probs: &[f64], labels: &[bool]) -> Result<(), EvalError> {
    if probs.len() != labels.len() {
        return Err(EvalError::LengthMismatch { probs: probs.len(), labels: labels.len() });
    }
    Ok(())
}

/// Mean of `(p_i − y_i)²`.
pub fn l2_loss(probs: &[f64], labels: &[bool]) -> Result<f64, EvalError> {
    check_lengths(probs, labels)?;
    if probs.is_empty() {
        return Err(EvalError::TooFewPoints { need: 1, got: 0 });
    }
    let s: f64 = probs.iter().zip(labels).map(|(&p, &y)| (p - f64::from(u8::from(y))) * (p - f64::from(u8::from(y)))).sum();
    Ok(s / probs.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoocvResult {
    pub method: String,
    pub doc_ids: Vec<u32>,
    pub labels: Vec<bool>,
    pub probs: Vec<f64>,
    pub l2_loss: f64,
}

impl LoocvResult {
    pub fn assemble(method: String, doc_ids: Vec<u32>, labels: Vec<bool>, probs: Vec<f64>) -> Result<Self, EvalError> {
        let l2 = l2_loss(&probs, &labels)?;
        Ok(LoocvResult { method, doc_ids, labels, probs, l2_loss: l2 })
    }
}

/// Seed for fold `i`: depends only on the base seed and the fold index.
pub fn fold_seed(base: u64, fold: usize) -> u64 {
    base.wrapping_add(fold as u64)
}

/// Trains on every row but `i` and predicts row `i`.
pub fn loocv_fold<C: Classifier + ?Sized>(c: &C, x: &Matrix, y: &[bool], i: usize, base_seed: u64) -> Result<f64, EvalError> {
    let keep: Vec<usize> = (0..x.rows()).filter(|&r| r != i).collect();
    let xt = x.select_rows(&keep);
    let yt: Vec<bool> = keep.iter().map(|&r| y[r]).collect();
    let xi = x.select_rows(&[i]);
    let pred = c.fit_predict(&xt, &yt, &xi, fold_seed(base_seed, i)).map_err(|error| EvalError::Fold { index: i, error })?;
    Ok(pred[0].prob_madison)
}

pub fn loocv_check(x: &Matrix, y: &[bool], doc_ids: &[u32]) -> Result<(), EvalError> {
    if x.rows() != y.len() || doc_ids.len() != y.len() {
        return Err(EvalError::LengthMismatch { probs: x.rows(), labels: y.len() });
    }
    if y.len() < 3 {
        return Err(EvalError::TooFewPoints { need: 3, got: y.len() });
    }
    Ok(())
}

/// Sequential leave-one-out cross-validation.
pub fn loocv<C: Classifier + ?Sized>(c: &C, x: &Matrix, y: &[bool], doc_ids: &[u32], seed: u64) -> Result<LoocvResult, EvalError> {
    loocv_check(x, y, doc_ids)?;
    let probs = (0..y.len()).map(|i| loocv_fold(c, x, y, i, seed)).collect::<Result<Vec<_>, _>>()?;
    LoocvResult::assemble(c.name(), doc_ids.to_vec(), y.to_vec(), probs)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    /// Madison is the positive class; a document is called Madison when `p > t`.
    pub fn at(probs: &[f64], labels: &[bool], t: f64) -> Self {
        let mut c = Confusion::default();
        for (&p, &y) in probs.iter().zip(labels) {
            match (p > t, y) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, false) => c.tn += 1,
                (false, true) => c.fn_ += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn youden(&self) -> f64 {
        self.tp as f64 / (self.tp + self.fn_) as f64 + self.tn as f64 / (self.tn + self.fp) as f64 - 1.0
    }

    pub fn f1(&self) -> f64 {
        let d = 2 * self.tp + self.fp + self.fn_;
        if d == 0 {
            0.0
        } else {
            2.0 * self.tp as f64 / d as f64
        }
    }

    pub fn error_rate(&self) -> f64 {
        (self.fp + self.fn_) as f64 / self.total() as f64
    }
}

/// `0`, the midpoints between consecutive distinct sorted probabilities, and
/// `1`, ascending.
pub fn candidate_thresholds(probs: &[f64]) -> Vec<f64> {
    let mut s = probs.to_vec();
    s.sort_by(f64::total_cmp);
    s.dedup();
    let mut out = vec![0.0];
    out.extend(s.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    out.push(1.0);
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

fn argmax_threshold(probs: &[f64], labels: &[bool], score: impl Fn(&Confusion) -> f64) -> f64 {
    let mut best = (f64::NEG_INFINITY, 0.0);
    for t in candidate_thresholds(probs) {
        let s = score(&Confusion::at(probs, labels, t));
        if s > best.0 {
            best = (s, t);
        }
    }
    best.1
}

/// Threshold maximizing recall + specificity − 1; ties go to the smallest.
pub fn youden_threshold(probs: &[f64], labels: &[bool]) -> Result<f64, EvalError> {
    check_lengths(probs, labels)?;
    if labels.iter().all(|&y| y) || labels.iter().all(|&y| !y) {
        return Err(EvalError::SingleClass);
    }
    Ok(argmax_threshold(probs, labels, Confusion::youden))
}

/// Threshold maximizing F1 with Madison positive; ties go to the smallest.
pub fn f1_threshold(probs: &[f64], labels: &[bool]) -> Result<f64, EvalError> {
    check_lengths(probs, labels)?;
    if !labels.iter().any(|&y| y) {
        return Err(EvalError::NoPositive);
    }
    Ok(argmax_threshold(probs, labels, Confusion::f1))
}

/// Fraction of documents where `p > t` disagrees with the label.
pub fn classification_error(probs: &[f64], labels: &[bool], t: f64) -> f64 {
    Confusion::at(probs, labels, t).error_rate()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub roc_threshold: f64,
    pub f1_threshold: f64,
    pub fixed_threshold: f64,
    pub roc_error: f64,
    pub f1_error: f64,
    pub fixed_error: f64,
    pub roc_confusion: Confusion,
    pub f1_confusion: Confusion,
    pub fixed_confusion: Confusion,
}

pub fn threshold_report(probs: &[f64], labels: &[bool], fixed: f64) -> Result<ThresholdReport, EvalError> {
    let roc = youden_threshold(probs, labels)?;
    let f1 = f1_threshold(probs, labels)?;
    let c = |t| Confusion::at(probs, labels, t);
    Ok(ThresholdReport {
        roc_threshold: roc,
        f1_threshold: f1,
        fixed_threshold: fixed,
        roc_error: c(roc).error_rate(),
        f1_error: c(f1).error_rate(),
        fixed_error: c(fixed).error_rate(),
        roc_confusion: c(roc),
        f1_confusion: c(f1),
        fixed_confusion: c(fixed),
    })
}

/// `0.9 · min(sd, IQR/1.34) · n^(−1/5)`, falling back to whichever spread
/// measure is nonzero.
pub fn silverman_bandwidth(xs: &[f64]) -> Result<f64, EvalError> {
    if xs.len() < 2 {
        return Err(EvalError::TooFewPoints { need: 2, got: xs.len() });
    }
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let sd = sample_sd(xs);
    let iqr = (quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25)) / 1.34;
    let spread = match (sd > 0.0, iqr > 0.0) {
        (true, true) => sd.min(iqr),
        (true, false) => sd,
        (false, true) => iqr,
        (false, false) => return Err(EvalError::DegenerateSample(s[0])),
    };
    Ok(0.9 * spread * pow(xs.len() as f64, -0.2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kde {
    pub bandwidth: f64,
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
}

impl Kde {
    /// Trapezoid-rule integral over the grid.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, &self.density)
    }

    /// Smallest and largest grid points bounding the central `mass` of the
    /// curve, by cumulative trapezoid area.
    pub fn mass_interval(&self, mass: f64) -> (f64, f64) {
        let total = self.integral();
        let lo_cut = 0.5 * (1.0 - mass) * total;
        let hi_cut = total - lo_cut;
        let mut acc = 0.0;
        let (mut lo, mut hi) = (self.grid[0], *self.grid.last().unwrap_or(&0.0));
        let mut lo_set = false;
        for i in 1..self.grid.len() {
            acc += 0.5 * (self.density[i] + self.density[i - 1]) * (self.grid[i] - self.grid[i - 1]);
            if !lo_set && acc >= lo_cut {
                lo = self.grid[i - 1];
                lo_set = true;
            }
            if acc >= hi_cut {
                hi = self.grid[i];
                break;
            }
        }
        (lo, hi)
    }

    pub fn mode(&self) -> f64 {
        let mut best = 0;
        for i in 1..self.density.len() {
            if self.density[i] > self.density[best] {
                best = i;
            }
        }
        self.grid[best]
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(a, b)| 0.5 * (b[0] + b[1]) * (a[1] - a[0])).sum()
}

/// Gaussian KDE on `KDE_POINTS` points spanning `[min − 4h, max + 4h]`.
pub fn kde_with_bandwidth(xs: &[f64], h: f64) -> Kde {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min) - KDE_REACH * h;
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max) + KDE_REACH * h;
    let step = (hi - lo) / (KDE_POINTS - 1) as f64;
    let norm = 1.0 / (xs.len() as f64 * h * sqrt(2.0 * core::f64::consts::PI));
    let grid: Vec<f64> = (0..KDE_POINTS).map(|i| lo + step * i as f64).collect();
    let density = grid
        .iter()
        .map(|&g| {
            norm * xs
                .iter()
                .map(|&x| {
                    let u = (g - x) / h;
                    exp(-0.5 * u * u)
                })
                .sum::<f64>()
        })
        .collect();
    Kde { bandwidth: h, grid, density }
}

/// KDE with Silverman's bandwidth. All-equal samples are an error.
pub fn kde(xs: &[f64]) -> Result<Kde, EvalError> {
    Ok(kde_with_bandwidth(xs, silverman_bandwidth(xs)?))
}

/// Like [`kde`], but a sample with no spread becomes a narrow spike with
/// bandwidth [`SPIKE_BANDWIDTH`] and a single point uses the same width.
pub fn kde_or_spike(xs: &[f64]) -> Result<Kde, EvalError> {
    if xs.is_empty() {
        return Err(EvalError::TooFewPoints { need: 1, got: 0 });
    }
    match silverman_bandwidth(xs) {
        Ok(h) => Ok(kde_with_bandwidth(xs, h)),
        Err(EvalError::DegenerateSample(_)) | Err(EvalError::TooFewPoints { .. }) => {
            Ok(kde_with_bandwidth(xs, SPIKE_BANDWIDTH))
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub hamilton: Kde,
    pub madison: Kde,
    pub disputed_marks: Vec<f64>,
}

/// Per-author densities of LOOCV probabilities with the disputed papers'
/// predicted probabilities as marks.
pub fn density_curve(probs: &[f64], labels: &[bool], disputed: &[f64]) -> Result<DensityCurve, EvalError> {
    check_lengths(probs, labels)?;
    let pick = |want: bool| probs.iter().zip(labels).filter(|(_, &y)| y == want).map(|(&p, _)| p).collect::<Vec<_>>();
    Ok(DensityCurve {
        hamilton: kde_or_spike(&pick(false))?,
        madison: kde_or_spike(&pick(true))?,
        disputed_marks: disputed.to_vec(),
    })
}

/// True when the two central-`mass` intervals do not overlap.
pub fn separated(a: &Kde, b: &Kde, mass: f64) -> bool {
    let (alo, ahi) = a.mass_interval(mass);
    let (blo, bhi) = b.mass_interval(mass);
    ahi < blo || bhi < alo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::fabs;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        fabs(a - b) <= tol
    }

    #[test]
    fn l2_examples() {
        let y = [true, false, true, false];
        assert_eq!(l2_loss(&[0.5; 4], &y).unwrap(), 0.25);
        assert_eq!(l2_loss(&[1.0, 0.0, 1.0, 0.0], &y).unwrap(), 0.0);
    }

    #[test]
    fn youden_separated() {
        let p = [0.1, 0.2, 0.8, 0.9];
        let y = [false, false, true, true];
        assert_eq!(youden_threshold(&p, &y).unwrap(), 0.5);
        assert_eq!(f1_threshold(&p, &y).unwrap(), 0.5);
        assert_eq!(classification_error(&p, &y, 0.5), 0.0);
        let flipped: Vec<bool> = y.iter().map(|v| !v).collect();
        assert_eq!(classification_error(&p, &flipped, 0.5), 1.0);
    }

    #[test]
    fn youden_constant_probs() {
        let y = [false, true, false];
        assert_eq!(youden_threshold(&[0.4; 3], &y).unwrap(), 0.0);
        assert_eq!(youden_threshold(&[0.4; 3], &[true; 3]), Err(EvalError::SingleClass));
    }

    #[test]
    fn f1_fixture() {
        let p = [0.2, 0.4, 0.6, 0.8];
        let y = [false, true, false, true];
        assert!(close(f1_threshold(&p, &y).unwrap(), 0.3, 1e-15));
        let all = f1_threshold(&p, &[true; 4]).unwrap();
        assert!(all < 0.2);
    }

    #[test]
    fn two_point_kde_symmetric() {
        let k = kde(&[0.0, 1.0]).unwrap();
        assert!((k.integral() - 1.0).abs() < 1e-3);
        let half = KDE_POINTS / 2;
        let left = k.density[..half].iter().copied().fold(0.0, f64::max);
        let right = k.density[half..].iter().copied().fold(0.0, f64::max);
        assert!((left - right).abs() < 1e-9);
    }

    #[test]
    fn degenerate_sample() {
        assert_eq!(kde(&[0.3, 0.3]), Err(EvalError::DegenerateSample(0.3)));
        let s = kde_or_spike(&[0.3, 0.3]).unwrap();
        assert!((s.integral() - 1.0).abs() < 1e-3);
        assert!((s.mode() - 0.3).abs() < 1e-2);
    }
}
