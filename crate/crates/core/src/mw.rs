//! Negative-binomial word-rate model with posterior log-odds between the two
//! candidate authors.
//!
//! Rates are per 1000 words. A paper of `L` words sees a word count drawn
//! from NB with mean `μ·L/1000` and non-Poissonness `δ = μ/κ`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::bow::TermDocMatrix;
use crate::corpus::WordList;
use crate::math::{exp, expm1, fabs, ln_beta, ln_factorial, ln_gamma, log, log1p, logit, sigmoid};

/// Below this the pmf switches to its Poisson limit.
pub const POISSON_SWITCH: f64 = 1e-8;
const MAX_CYCLES: usize = 200;
const TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MwError {
    #[error("invalid parameter: {0}")]
    InvalidParam(&'static str),
    #[error("word '{0}' never occurs in the training papers")]
    NoOccurrences(String),
    #[error("no fitted model for word '{0}'")]
    UncoveredWord(String),
}

/// `ln π(x)` for the negative binomial with mean `mu` and variance
/// `mu (1 + delta)`.
pub fn nb_ln_pmf(x: u64, mu: f64, delta: f64) -> Result<f64, MwError> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(MwError::InvalidParam("mu must be positive"));
    }
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(MwError::InvalidParam("delta must be non-negative"));
    }
    let xf = x as f64;
    if delta < POISSON_SWITCH {
        return Ok(xf * log(mu) - mu - ln_factorial(x));
    }
    let kappa = mu / delta;
    // Γ(x+κ)/Γ(κ) · δ^x = Π_{j<x} (μ + jδ), exact for modest x
    let rising = if x <= 10_000 {
        (0..x).map(|j| log(mu + j as f64 * delta)).sum::<f64>()
    } else {
        ln_gamma(xf + kappa) - ln_gamma(kappa) + xf * log(delta)
    };
    Ok(rising - ln_factorial(x) - (xf + kappa) * log1p(delta))
}

pub fn nb_pmf(x: u64, mu: f64, delta: f64) -> Result<f64, MwError> {
    nb_ln_pmf(x, mu, delta).map(exp)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NbPriorConstants {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
    pub beta5: f64,
}

impl Default for NbPriorConstants {
    fn default() -> Self {
        NbPriorConstants { beta1: 10.0, beta2: 0.0, beta3: 12.0, beta4: 0.83, beta5: 1.2 }
    }
}

impl NbPriorConstants {
    fn validate(&self) -> Result<(), MwError> {
        let ok = self.beta1 > 0.0 && self.beta2 >= 0.0 && self.beta3 > 0.0 && self.beta4 > 0.0 && self.beta5 > 0.0;
        if ok {
            Ok(())
        } else {
            Err(MwError::InvalidParam("prior constants out of range"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbWordModel {
    pub word: String,
    pub mu_h: f64,
    pub mu_m: f64,
    pub delta_h: f64,
    pub delta_m: f64,
}

impl NbWordModel {
    /// `κ = μ/δ`; infinite for a Poisson word.
    pub fn kappa_h(&self) -> f64 {
        self.mu_h / self.delta_h
    }

    pub fn kappa_m(&self) -> f64 {
        self.mu_m / self.delta_m
    }
}

/// Count of one word in one paper together with the paper's length in words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaperCount {
    pub count: u32,
    pub length: u64,
}

#[derive(Clone, Copy)]
struct Params {
    sigma: f64,
    tau: f64,
    xi: f64,
    eta: f64,
}

impl Params {
    fn rates(&self) -> (f64, f64, f64, f64) {
        let (lh, lm) = (self.xi * self.eta, self.xi * (1.0 - self.eta));
        (self.sigma * self.tau, self.sigma * (1.0 - self.tau), expm1(lh), expm1(lm))
    }
}

fn side_ln_lik(papers: &[PaperCount], mu: f64, delta: f64) -> f64 {
    papers
        .iter()
        .map(|p| nb_ln_pmf(p.count as u64, mu * p.length as f64 / 1000.0, delta).unwrap_or(f64::NEG_INFINITY))
        .sum()
}

fn ln_posterior(h: &[PaperCount], m: &[PaperCount], pr: &NbPriorConstants, th: &Params) -> f64 {
    let (mu_h, mu_m, d_h, d_m) = th.rates();
    if !(mu_h > 0.0 && mu_m > 0.0) {
        return f64::NEG_INFINITY;
    }
    let a = pr.beta1 + pr.beta2 * th.sigma;
    let tau_prior = (a - 1.0) * (log(th.tau) + log(1.0 - th.tau)) - ln_beta(a, a);
    let eta_prior = (pr.beta3 - 1.0) * (log(th.eta) + log(1.0 - th.eta));
    let rate = pr.beta5 / pr.beta4;
    let xi_prior = (pr.beta5 - 1.0) * log(th.xi) - rate * th.xi;
    side_ln_lik(h, mu_h, d_h) + side_ln_lik(m, mu_m, d_m) + tau_prior + eta_prior + xi_prior
}

/// Golden-section maximization of a unimodal `f` on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const R: f64 = 0.618_033_988_749_894_8;
    let mut c = b - R * (b - a);
    let mut d = a + R * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while fabs(b - a) > TOL * (1.0 + fabs(c) + fabs(d)) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - R * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + R * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        c
    } else {
        d
    }
}

/// Posterior mode of the per-word model by coordinate-wise golden-section
/// search over `(ln σ, logit τ, ln ξ, logit η)`, where `σ = μ_H + μ_M`,
/// `τ = μ_H/σ`, `λ = ln(1 + δ)`, `ξ = λ_H + λ_M` and `η = λ_H/ξ`.
///
/// Priors: flat on `σ ∈ (0, σ_max]` with `σ_max` ten times the pooled rate,
/// `τ ~ Beta(β1+β2σ, β1+β2σ)`, `η ~ Beta(β3, β3)`, `ξ ~ Gamma(β5, rate β5/β4)`.
pub fn fit_word_params(
    word: &str,
    hamilton: &[PaperCount],
    madison: &[PaperCount],
    priors: &NbPriorConstants,
) -> Result<NbWordModel, MwError> {
    priors.validate()?;
    if hamilton.is_empty() || madison.is_empty() {
        return Err(MwError::InvalidParam("each author needs at least one paper"));
    }
    if hamilton.iter().chain(madison).any(|p| p.length == 0) {
        return Err(MwError::InvalidParam("paper length must be positive"));
    }
    let rate = |ps: &[PaperCount]| {
        let c: u64 = ps.iter().map(|p| p.count as u64).sum();
        let l: u64 = ps.iter().map(|p| p.length).sum();
        (c, l)
    };
    let (ch, lh) = rate(hamilton);
    let (cm, lm) = rate(madison);
    if ch + cm == 0 {
        return Err(MwError::NoOccurrences(String::from(word)));
    }
    let pooled = 1000.0 * (ch + cm) as f64 / (lh + lm) as f64;
    let sigma_max = 10.0 * pooled;
    let (rh, rm) = (1000.0 * ch as f64 / lh as f64, 1000.0 * cm as f64 / lm as f64);
    let mut th = Params {
        sigma: (rh + rm).clamp(sigma_max * 1e-6, sigma_max),
        tau: (rh / (rh + rm)).clamp(0.01, 0.99),
        xi: 2.0 * log1p(0.1),
        eta: 0.5,
    };
    let post = |p: &Params| ln_posterior(hamilton, madison, priors, p);
    let mut best = post(&th);
    let ls_max = log(sigma_max);
    for _ in 0..MAX_CYCLES {
        let before = th;
        let f_before = best;
        let cands: [(f64, f64); 4] = [(ls_max - 20.0, ls_max), (-12.0, 12.0), (log(1e-6), log(10.0)), (-12.0, 12.0)];
        for (k, &(lo, hi)) in cands.iter().enumerate() {
            let set = |p: &mut Params, v: f64| match k {
                0 => p.sigma = exp(v),
                1 => p.tau = sigmoid(v),
                2 => p.xi = exp(v),
                _ => p.eta = sigmoid(v),
            };
            let v = golden_max(
                |v| {
                    let mut p = th;
                    set(&mut p, v);
                    post(&p)
                },
                lo,
                hi,
            );
            let mut p = th;
            set(&mut p, v);
            let f = post(&p);
            if f > best {
                th = p;
                best = f;
            }
        }
        let moved = [
            fabs(log(th.sigma) - log(before.sigma)),
            fabs(logit(th.tau) - logit(before.tau)),
            fabs(log(th.xi) - log(before.xi)),
            fabs(logit(th.eta) - logit(before.eta)),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if moved < TOL && best - f_before < TOL * (1.0 + fabs(best)) {
            break;
        }
    }
    let (mu_h, mu_m, delta_h, delta_m) = th.rates();
    Ok(NbWordModel { word: String::from(word), mu_h, mu_m, delta_h, delta_m })
}

/// Fits every word in `words` that appears in `tdm`, with paper lengths
/// given per row of `tdm`.
pub fn fit_models(
    tdm: &TermDocMatrix,
    lengths: &[u64],
    hamilton_rows: &[usize],
    madison_rows: &[usize],
    words: &[String],
    priors: &NbPriorConstants,
) -> Result<Vec<NbWordModel>, MwError> {
    words
        .iter()
        .map(|w| {
            let (h, m) = word_counts(tdm, lengths, hamilton_rows, madison_rows, w)?;
            fit_word_params(w, &h, &m, priors)
        })
        .collect()
}

/// Per-paper counts of one word for the two training groups.
pub fn word_counts(
    tdm: &TermDocMatrix,
    lengths: &[u64],
    hamilton_rows: &[usize],
    madison_rows: &[usize],
    word: &str,
) -> Result<(Vec<PaperCount>, Vec<PaperCount>), MwError> {
    if lengths.len() != tdm.n_docs() {
        return Err(MwError::InvalidParam("one length per document row is required"));
    }
    let j = tdm.col_index(word).ok_or_else(|| MwError::NoOccurrences(String::from(word)))?;
    let pick = |rows: &[usize]| rows.iter().map(|&i| PaperCount { count: tdm.get(i, j), length: lengths[i] }).collect();
    Ok((pick(hamilton_rows), pick(madison_rows)))
}

/// Marker words with at least `min_pooled` occurrences over the given rows,
/// in vocabulary order.
pub fn default_scored_words(tdm: &TermDocMatrix, markers: &WordList, rows: &[usize], min_pooled: u64) -> Vec<String> {
    let pooled = tdm.pooled(rows);
    tdm.vocab
        .iter()
        .zip(pooled)
        .filter(|(w, c)| markers.contains(w) && *c >= min_pooled)
        .map(|(w, _)| w.clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordContribution {
    pub word: String,
    pub count: u32,
    /// `ln π_H(x) − ln π_M(x)`; positive favors Hamilton.
    pub log_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OddsReport {
    pub doc_id: Option<u32>,
    /// Sorted by word.
    pub contributions: Vec<WordContribution>,
    pub prior_log_odds: f64,
    /// Hamilton : Madison; negative favors Madison.
    pub total: f64,
}

impl OddsReport {
    /// The `k` contributions of largest magnitude; ties keep word order.
    pub fn top(&self, k: usize) -> Vec<&WordContribution> {
        let mut v: Vec<&WordContribution> = self.contributions.iter().collect();
        v.sort_by(|a, b| fabs(b.log_ratio).total_cmp(&fabs(a.log_ratio)));
        v.truncate(k);
        v
    }
}

/// Posterior log-odds of Hamilton over Madison for one document.
///
/// Every model is scored (a word missing from `doc_counts` counts as zero).
/// With `strict`, a word in `doc_counts` that has no model is an error;
/// otherwise such words are ignored.
pub fn document_log_odds(
    doc_counts: &BTreeMap<String, u32>,
    doc_length: u64,
    models: &[NbWordModel],
    prior_odds: f64,
    strict: bool,
) -> Result<OddsReport, MwError> {
    if doc_length == 0 {
        return Err(MwError::InvalidParam("document length must be positive"));
    }
    if !(prior_odds > 0.0) || !prior_odds.is_finite() {
        return Err(MwError::InvalidParam("prior odds must be positive"));
    }
    if strict {
        if let Some(w) = doc_counts.keys().find(|w| !models.iter().any(|m| &m.word == *w)) {
            return Err(MwError::UncoveredWord(w.clone()));
        }
    }
    let len = doc_length as f64 / 1000.0;
    let mut sorted: Vec<&NbWordModel> = models.iter().collect();
    sorted.sort_by(|a, b| a.word.cmp(&b.word));
    let mut contributions = Vec::with_capacity(sorted.len());
    for m in sorted {
        let x = doc_counts.get(&m.word).copied().unwrap_or(0);
        let lr = nb_ln_pmf(x as u64, m.mu_h * len, m.delta_h)? - nb_ln_pmf(x as u64, m.mu_m * len, m.delta_m)?;
        contributions.push(WordContribution { word: m.word.clone(), count: x, log_ratio: lr });
    }
    let prior_log_odds = log(prior_odds);
    let mut total = prior_log_odds;
    for c in &contributions {
        total += c.log_ratio;
    }
    Ok(OddsReport { doc_id: None, contributions, prior_log_odds, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn poisson_limit_at_zero() {
        assert!((nb_pmf(0, 2.0, 0.0).unwrap() - exp(-2.0)).abs() < 1e-15);
    }

    #[test]
    fn geometric_case() {
        for x in 0..20u64 {
            let want = 0.5f64.powi(x as i32 + 1);
            assert!((nb_pmf(x, 1.0, 1.0).unwrap() - want).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(nb_pmf(1, 0.0, 1.0).is_err());
        assert!(nb_pmf(1, 1.0, -0.1).is_err());
    }

    #[test]
    fn symmetric_data_gives_equal_rates() {
        let ps: Vec<PaperCount> =
            [3, 5, 0, 2, 7, 4].iter().map(|&c| PaperCount { count: c, length: 1500 }).collect();
        let m = fit_word_params("upon", &ps, &ps, &NbPriorConstants::default()).unwrap();
        assert!((m.mu_h - m.mu_m).abs() < 1e-4 * m.mu_h, "{m:?}");
        assert!((m.delta_h - m.delta_m).abs() < 1e-4);
    }

    #[test]
    fn no_occurrences() {
        let ps = vec![PaperCount { count: 0, length: 1000 }; 3];
        assert_eq!(
            fit_word_params("w", &ps, &ps, &NbPriorConstants::default()),
            Err(MwError::NoOccurrences(String::from("w")))
        );
    }

    #[test]
    fn poisson_zero_count_ratio() {
        let m = NbWordModel { word: String::from("w"), mu_h: 2.0, mu_m: 1.0, delta_h: 0.0, delta_m: 0.0 };
        let r = document_log_odds(&BTreeMap::new(), 1000, &[m], 1.0, false).unwrap();
        assert!((r.total + 1.0).abs() < 1e-12);
    }

    #[test]
    fn strict_mode() {
        let m = NbWordModel { word: String::from("a"), mu_h: 2.0, mu_m: 1.0, delta_h: 0.1, delta_m: 0.1 };
        let mut doc = BTreeMap::new();
        doc.insert(String::from("b"), 3);
        assert!(document_log_odds(&doc, 900, core::slice::from_ref(&m), 1.0, false).is_ok());
        assert_eq!(document_log_odds(&doc, 900, &[m], 1.0, true), Err(MwError::UncoveredWord(String::from("b"))));
    }
}
