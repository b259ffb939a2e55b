//! Discriminative-word screening between two sub-corpora.
//!
//! Each word gets an exact two-sided binomial allocation p-value. The
//! p-values feed the truncated Higher Criticism statistic (also used as a
//! distance between a document and an author's pooled corpus) and the
//! Benjamini–Hochberg and Bonferroni selection rules.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::bow::TermDocMatrix;
use crate::corpus::Author;
use crate::math::{exp, fabs, floor, ln_choose, log, log1p, sqrt};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScreenError {
    #[error("null proportion undefined: no tokens outside the tested word")]
    DegenerateTotals,
    #[error("word count exceeds its table total")]
    CountExceedsTotal,
    #[error("word does not occur in either table")]
    ZeroOccurrences,
    #[error("empty p-value input")]
    EmptyInput,
    #[error("group {0} is empty")]
    EmptyGroup(u8),
    #[error("paper {0} is in both groups")]
    OverlappingGroups(u32),
    #[error("paper {0} not in the matrix")]
    UnknownDoc(u32),
    #[error("count vectors have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
}

fn ln_binom_pmf(k: u64, m: u64, ln_q: f64, ln_1q: f64) -> f64 {
    let a = if k == 0 { 0.0 } else { k as f64 * ln_q };
    let b = if k == m { 0.0 } else { (m - k) as f64 * ln_1q };
    ln_choose(m, k) + a + b
}

/// Exact two-sided allocation p-value `P(|Bin(m, q) − mq| ≥ |x₁ − mq|)` with
/// `m = x₁ + x₂` and `q = (T₁ − x₁)/(T₁ + T₂ − m)`.
pub fn binomial_pvalue(x1: u64, x2: u64, t1: u64, t2: u64) -> Result<f64, ScreenError> {
    if x1 > t1 || x2 > t2 {
        return Err(ScreenError::CountExceedsTotal);
    }
    let m = x1 + x2;
    if m == 0 {
        return Err(ScreenError::ZeroOccurrences);
    }
    let den = t1 + t2 - m;
    if den == 0 {
        return Err(ScreenError::DegenerateTotals);
    }
    let q = (t1 - x1) as f64 / den as f64;
    let mq = m as f64 * q;
    let dev = fabs(x1 as f64 - mq) * (1.0 - 1e-12);
    if q == 0.0 || q == 1.0 {
        // point mass at 0 or m
        let at = if q == 0.0 { 0.0 } else { m as f64 };
        return Ok(if fabs(at - mq) >= dev { 1.0 } else { 0.0 });
    }
    let ln_q = log(q);
    let ln_1q = log1p(-q);
    let mode = floor((m as f64 + 1.0) * q).min(m as f64) as u64;
    let top = ln_binom_pmf(mode, m, ln_q, ln_1q);
    let mut sum = 0.0;
    // lower tail: k ≤ mq − dev, walking down from the boundary
    let lo_edge = mq - dev;
    if lo_edge >= 0.0 {
        let mut k = floor(lo_edge) as u64;
        loop {
            let t = exp(ln_binom_pmf(k, m, ln_q, ln_1q) - top);
            sum += t;
            if k == 0 || (t < 1e-300 && (k as f64) < mq) {
                break;
            }
            k -= 1;
        }
    }
    // upper tail: k ≥ mq + dev
    let hi_edge = mq + dev;
    if hi_edge <= m as f64 {
        let start = {
            let c = libm::ceil(hi_edge);
            // dev == 0 puts both edges on mq; don't count that k twice
            if lo_edge >= 0.0 && c <= floor(lo_edge) { floor(lo_edge) as u64 + 1 } else { c as u64 }
        };
        let mut k = start;
        while k <= m {
            let t = exp(ln_binom_pmf(k, m, ln_q, ln_1q) - top);
            sum += t;
            if t < 1e-300 && (k as f64) > mq {
                break;
            }
            k += 1;
        }
    }
    Ok((exp(top) * sum).min(1.0))
}

/// Per-word allocation p-values between two pooled count tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PValueTable {
    pub words: Vec<String>,
    pub p: Vec<f64>,
    /// Pooled count `x₁ + x₂`.
    pub m: Vec<u64>,
    /// Count in the first table.
    pub x1: Vec<u64>,
    /// Null proportion `q`.
    pub q: Vec<f64>,
}

impl PValueTable {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.words.iter().position(|w| w == word)
    }

    pub fn get(&self, word: &str) -> Option<f64> {
        self.index_of(word).map(|i| self.p[i])
    }

    /// Words ordered by ascending p, ties by position.
    pub fn ranked(&self) -> Vec<usize> {
        sorted_order(&self.p)
    }
}

/// Tests every word with `m > 0`; `c1`, `c2` are aligned to `words`.
pub fn pvalue_table_from_counts(words: &[String], c1: &[u64], c2: &[u64]) -> Result<PValueTable, ScreenError> {
    if c1.len() != words.len() || c2.len() != words.len() {
        return Err(ScreenError::LengthMismatch(c1.len(), c2.len()));
    }
    let t1: u64 = c1.iter().sum();
    let t2: u64 = c2.iter().sum();
    let mut out = PValueTable { words: Vec::new(), p: Vec::new(), m: Vec::new(), x1: Vec::new(), q: Vec::new() };
    for j in 0..words.len() {
        let m = c1[j] + c2[j];
        if m == 0 {
            continue;
        }
        let p = binomial_pvalue(c1[j], c2[j], t1, t2)?;
        out.words.push(words[j].clone());
        out.p.push(p);
        out.m.push(m);
        out.x1.push(c1[j]);
        out.q.push((t1 - c1[j]) as f64 / (t1 + t2 - m) as f64);
    }
    Ok(out)
}

/// Pools the rows of each group and tests every word that occurs.
pub fn pvalue_table(tdm: &TermDocMatrix, group1: &[u32], group2: &[u32]) -> Result<PValueTable, ScreenError> {
    if group1.is_empty() {
        return Err(ScreenError::EmptyGroup(1));
    }
    if group2.is_empty() {
        return Err(ScreenError::EmptyGroup(2));
    }
    if let Some(&d) = group1.iter().find(|d| group2.contains(d)) {
        return Err(ScreenError::OverlappingGroups(d));
    }
    let rows = |g: &[u32]| -> Result<Vec<usize>, ScreenError> {
        g.iter().map(|&id| tdm.row_index(id).ok_or(ScreenError::UnknownDoc(id))).collect()
    };
    let c1 = tdm.pooled(&rows(group1)?);
    let c2 = tdm.pooled(&rows(group2)?);
    pvalue_table_from_counts(&tdm.vocab, &c1, &c2)
}

fn sorted_order(p: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..p.len()).collect();
    idx.sort_by(|&a, &b| p[a].total_cmp(&p[b]).then(a.cmp(&b)));
    idx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HcConfig {
    /// Only the smallest `⌊γ₀ N⌋` p-values are scanned.
    pub gamma0: f64,
    /// Skip indices whose p-value is below `1/N`.
    pub min_p_floor: bool,
}

impl Default for HcConfig {
    fn default() -> Self {
        HcConfig { gamma0: 0.2, min_p_floor: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HcResult {
    /// `HC†`, or `-inf` when no index is admissible.
    pub statistic: f64,
    /// 1-based rank attaining the maximum.
    pub i_star: Option<usize>,
    /// `π_(i*)`.
    pub t_hc: Option<f64>,
    /// Input positions with `p ≤ t_hc`, ascending.
    pub selected: Vec<usize>,
    pub gamma0: f64,
}

/// One term of the maximization, `√N (i/N − π)/√((i/N)(1 − i/N))`.
#[inline]
pub fn hc_term(i: usize, n: usize, pi: f64) -> f64 {
    let u = i as f64 / n as f64;
    sqrt(n as f64) * (u - pi) / sqrt(u * (1.0 - u))
}

/// Truncated Higher Criticism over a p-value vector. Ties in p are ordered
/// by input position; ties in the statistic go to the smallest rank.
pub fn hc_statistic(p: &[f64], cfg: &HcConfig) -> Result<HcResult, ScreenError> {
    let n = p.len();
    if n == 0 {
        return Err(ScreenError::EmptyInput);
    }
    let order = sorted_order(p);
    let limit = floor(cfg.gamma0 * n as f64) as usize;
    let mut best: Option<(usize, f64)> = None;
    for i in 1..=limit.min(n - 1) {
        let pi = p[order[i - 1]];
        if cfg.min_p_floor && pi < 1.0 / n as f64 {
            continue;
        }
        let v = hc_term(i, n, pi);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    Ok(match best {
        None => HcResult { statistic: f64::NEG_INFINITY, i_star: None, t_hc: None, selected: Vec::new(), gamma0: cfg.gamma0 },
        Some((i, v)) => {
            let t = p[order[i - 1]];
            let selected = (0..n).filter(|&j| p[j] <= t).collect();
            HcResult { statistic: v, i_star: Some(i), t_hc: Some(t), selected, gamma0: cfg.gamma0 }
        }
    })
}

/// HC threshold applied to a table; selected words in table order.
pub fn hc_select(table: &PValueTable, cfg: &HcConfig) -> Result<(HcResult, Vec<String>), ScreenError> {
    let r = hc_statistic(&table.p, cfg)?;
    let words = r.selected.iter().map(|&i| table.words[i].clone()).collect();
    Ok((r, words))
}

/// `d_HC(D, pool)`: HC† of the allocation p-values with the document as the
/// first table.
///
/// When the `1/N` floor rules out every rank, all of the smallest p-values
/// sit below `1/N`, which is a large deviation rather than none, so the
/// statistic is recomputed without the floor instead of returning `-inf`.
pub fn hc_distance(doc: &[u64], pool: &[u64], vocab: &[String], cfg: &HcConfig) -> Result<f64, ScreenError> {
    let t = pvalue_table_from_counts(vocab, doc, pool)?;
    let r = hc_statistic(&t.p, cfg)?;
    if r.i_star.is_none() && cfg.min_p_floor {
        return Ok(hc_statistic(&t.p, &HcConfig { min_p_floor: false, ..*cfg })?.statistic);
    }
    Ok(r.statistic)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HcAttribution {
    pub author: Author,
    pub d_hamilton: f64,
    pub d_madison: f64,
    /// `d_hamilton − d_madison`; positive favors Madison.
    pub diff: f64,
}

pub fn attribute_by_hc(
    doc: &[u64],
    hamilton: &[u64],
    madison: &[u64],
    vocab: &[String],
    cfg: &HcConfig,
) -> Result<HcAttribution, ScreenError> {
    if hamilton.iter().all(|&c| c == 0) {
        return Err(ScreenError::EmptyGroup(1));
    }
    if madison.iter().all(|&c| c == 0) {
        return Err(ScreenError::EmptyGroup(2));
    }
    let d_hamilton = hc_distance(doc, hamilton, vocab, cfg)?;
    let d_madison = hc_distance(doc, madison, vocab, cfg)?;
    let author = if d_madison < d_hamilton { Author::Madison } else { Author::Hamilton };
    Ok(HcAttribution { author, d_hamilton, d_madison, diff: d_hamilton - d_madison })
}

/// Benjamini–Hochberg step-up: positions with `p ≤ p_(k)` for the largest
/// `k` such that `p_(k) ≤ k·fdr/N`. Ascending positions.
pub fn bh_select(p: &[f64], fdr: f64) -> Vec<usize> {
    let n = p.len();
    let order = sorted_order(p);
    let cut = (1..=n).rev().find(|&k| p[order[k - 1]] <= k as f64 * fdr / n as f64);
    match cut {
        None => Vec::new(),
        Some(k) => {
            let t = p[order[k - 1]];
            (0..n).filter(|&j| p[j] <= t).collect()
        }
    }
}

/// Positions with `p ≤ alpha/N`.
pub fn bonferroni_select(p: &[f64], alpha: f64) -> Vec<usize> {
    let n = p.len() as f64;
    (0..p.len()).filter(|&j| p[j] <= alpha / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn pvalue_examples() {
        // m = 2, q = 0.5, x = 1
        assert_eq!(binomial_pvalue(1, 1, 5, 5).unwrap(), 1.0);
        // m = 10, q = 0.5, x = 10: both extreme outcomes
        let p = binomial_pvalue(10, 0, 15, 5).unwrap();
        assert!(close(p, 2.0 * 0.5f64.powi(10), 1e-15));
        assert_eq!(binomial_pvalue(0, 0, 5, 5), Err(ScreenError::ZeroOccurrences));
        assert_eq!(binomial_pvalue(3, 2, 3, 2), Err(ScreenError::DegenerateTotals));
        assert_eq!(binomial_pvalue(4, 0, 3, 9), Err(ScreenError::CountExceedsTotal));
    }

    #[test]
    fn symmetric_in_tables() {
        for &(x1, x2, t1, t2) in &[(3u64, 9u64, 100u64, 140u64), (0, 5, 40, 60), (17, 2, 500, 300)] {
            let a = binomial_pvalue(x1, x2, t1, t2).unwrap();
            let b = binomial_pvalue(x2, x1, t2, t1).unwrap();
            assert!(close(a, b, 1e-12 * a.max(1e-300)), "{a} {b}");
        }
    }

    #[test]
    fn hc_examples() {
        let n = 10;
        let uniform: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
        let r = hc_statistic(&uniform, &HcConfig::default()).unwrap();
        assert!(close(r.statistic, 0.0, 1e-15));

        let p = [0.001, 0.5, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95];
        let loose = HcConfig { gamma0: 0.2, min_p_floor: false };
        let r = hc_statistic(&p, &loose).unwrap();
        let want = 10f64.sqrt() * 0.099 / 0.3;
        assert!(close(r.statistic, want, 1e-12) && close(r.statistic, 1.0436, 1e-4));
        assert_eq!((r.i_star, r.selected.clone()), (Some(1), vec![0]));
        // with the 1/N floor only rank 2 is admissible
        let r = hc_statistic(&p, &HcConfig::default()).unwrap();
        assert_eq!(r.i_star, Some(2));
        assert!(close(r.statistic, 10f64.sqrt() * (0.2 - 0.5) / 0.4, 1e-12));

        let ones = [1.0; 10];
        let r = hc_statistic(&ones, &HcConfig::default()).unwrap();
        assert!(r.statistic < 0.0);
        assert_eq!(r.selected.len(), 10);
        assert_eq!(hc_statistic(&[], &HcConfig::default()), Err(ScreenError::EmptyInput));
        let r = hc_statistic(&[0.01, 0.02, 0.5], &HcConfig::default()).unwrap();
        assert_eq!((r.statistic, r.i_star), (f64::NEG_INFINITY, None));
    }

    #[test]
    fn bh_bonferroni_examples() {
        assert_eq!(bh_select(&[0.01, 0.02, 0.9], 0.1), vec![0, 1]);
        assert_eq!(bh_select(&[0.0; 4], 0.05), vec![0, 1, 2, 3]);
        assert_eq!(bonferroni_select(&[0.0; 4], 0.05), vec![0, 1, 2, 3]);
        assert_eq!(bonferroni_select(&[0.01, 0.02, 0.9], 0.1), vec![0, 1]);
        assert!(bh_select(&[], 0.1).is_empty());
    }

    #[test]
    fn tables_and_distance() {
        let words: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let doc = [5u64, 10, 3, 0];
        let pool: Vec<u64> = doc.iter().map(|c| c * 10).collect();
        let t = pvalue_table_from_counts(&words, &doc, &pool).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.p.iter().all(|&p| p > 0.5));
        assert!(hc_distance(&doc, &pool, &words, &HcConfig::default()).unwrap() <= 0.0);
        // one word exclusive to the first table gets the smallest p
        let t = pvalue_table_from_counts(&words, &[40, 10, 10, 10], &[0, 10, 10, 10]).unwrap();
        assert_eq!(t.ranked()[0], 0);
        let direct = binomial_pvalue(40, 0, 70, 30).unwrap();
        assert_eq!(t.p[0], direct);
    }
}
