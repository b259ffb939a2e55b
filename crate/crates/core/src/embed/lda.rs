use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{DocEmbedding, EmbedError, EmbedMethod};
use crate::bow::TermDocMatrix;
use crate::linalg::Matrix;
use crate::math::log;
use crate::rng::{self, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub k: usize,
    /// Document-topic concentration; `None` means `50 / K`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iters: usize,
    pub seed: u64,
}

impl LdaConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        LdaConfig { k, alpha: None, beta: 0.1, iters: 2000, seed }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.k as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    /// `n × K`, rows sum to one.
    pub doc_topic: Matrix,
    /// `K × N`, rows sum to one.
    pub topic_word: Matrix,
    /// Topic of every token, tokens laid out word by word in column order.
    pub assignments: Vec<Vec<u32>>,
    pub log_likelihood: f64,
    pub doc_ids: Vec<u32>,
}

impl LdaModel {
    pub fn embedding(&self) -> DocEmbedding {
        DocEmbedding { values: self.doc_topic.clone(), method: EmbedMethod::Lda, doc_ids: self.doc_ids.clone() }
    }
}

/// Collapsed Gibbs sampler state.
///
/// Holds the token-level topic labels and the three count tables the
/// conditional needs: document-topic, topic-word and topic totals.
#[derive(Debug, Clone)]
pub struct LdaSampler {
    k: usize,
    alpha: f64,
    beta: f64,
    n_words: usize,
    words: Vec<Vec<u32>>,
    z: Vec<Vec<u32>>,
    n_dk: Vec<u32>,
    n_kw: Vec<u32>,
    n_k: Vec<u32>,
    rng: Rng,
    weights: Vec<f64>,
}

impl LdaSampler {
    pub fn new(tdm: &TermDocMatrix, k: usize, alpha: f64, beta: f64, seed: u64) -> Result<Self, EmbedError> {
        if k < 1 {
            return Err(EmbedError::InvalidK(k));
        }
        if tdm.n_docs() == 0 || tdm.n_words() == 0 {
            return Err(EmbedError::EmptyMatrix);
        }
        let n_words = tdm.n_words();
        let mut rng = rng::seeded(seed);
        let mut words = Vec::with_capacity(tdm.n_docs());
        let mut z = Vec::with_capacity(tdm.n_docs());
        let mut n_dk = vec![0u32; tdm.n_docs() * k];
        let mut n_kw = vec![0u32; k * n_words];
        let mut n_k = vec![0u32; k];
        for d in 0..tdm.n_docs() {
            let mut ws = Vec::new();
            for (j, &c) in tdm.row(d).iter().enumerate() {
                ws.extend(core::iter::repeat_n(j as u32, c as usize));
            }
            let zs: Vec<u32> = ws.iter().map(|_| rng::below(&mut rng, k) as u32).collect();
            for (&w, &t) in ws.iter().zip(&zs) {
                n_dk[d * k + t as usize] += 1;
                n_kw[t as usize * n_words + w as usize] += 1;
                n_k[t as usize] += 1;
            }
            words.push(ws);
            z.push(zs);
        }
        Ok(LdaSampler { k, alpha, beta, n_words, words, z, n_dk, n_kw, n_k, rng, weights: vec![0.0; k] })
    }

    /// One pass over every token, resampling its topic from the collapsed
    /// conditional `(n_dk + α)(n_kw + β)/(n_k + Nβ)`.
    pub fn sweep(&mut self) {
        let k = self.k;
        let nb = self.n_words as f64 * self.beta;
        for d in 0..self.words.len() {
            for t in 0..self.words[d].len() {
                let w = self.words[d][t] as usize;
                let old = self.z[d][t] as usize;
                self.n_dk[d * k + old] -= 1;
                self.n_kw[old * self.n_words + w] -= 1;
                self.n_k[old] -= 1;
                let mut total = 0.0;
                for topic in 0..k {
                    let p = (self.n_dk[d * k + topic] as f64 + self.alpha)
                        * (self.n_kw[topic * self.n_words + w] as f64 + self.beta)
                        / (self.n_k[topic] as f64 + nb);
                    total += p;
                    self.weights[topic] = total;
                }
                let u = rng::uniform(&mut self.rng) * total;
                let new = self.weights.iter().position(|&c| u < c).unwrap_or(k - 1);
                self.z[d][t] = new as u32;
                self.n_dk[d * k + new] += 1;
                self.n_kw[new * self.n_words + w] += 1;
                self.n_k[new] += 1;
            }
        }
    }

    /// Recomputes every tally from the assignments and compares it with the
    /// incrementally maintained tables.
    pub fn counts_consistent(&self) -> bool {
        let k = self.k;
        let mut dk = vec![0u32; self.n_dk.len()];
        let mut kw = vec![0u32; self.n_kw.len()];
        let mut nk = vec![0u32; k];
        for (d, (ws, zs)) in self.words.iter().zip(&self.z).enumerate() {
            for (&w, &t) in ws.iter().zip(zs) {
                dk[d * k + t as usize] += 1;
                kw[t as usize * self.n_words + w as usize] += 1;
                nk[t as usize] += 1;
            }
        }
        let doc_totals_ok = self
            .words
            .iter()
            .enumerate()
            .all(|(d, ws)| self.n_dk[d * k..(d + 1) * k].iter().map(|&c| c as usize).sum::<usize>() == ws.len());
        let topic_totals_ok =
            (0..k).all(|t| self.n_kw[t * self.n_words..(t + 1) * self.n_words].iter().sum::<u32>() == self.n_k[t]);
        dk == self.n_dk && kw == self.n_kw && nk == self.n_k && doc_totals_ok && topic_totals_ok
    }

    pub fn assignments(&self) -> &[Vec<u32>] {
        &self.z
    }

    /// Smoothed posterior means `(φ, η)` from the current state.
    pub fn estimates(&self) -> (Matrix, Matrix) {
        let (k, nw) = (self.k, self.n_words);
        let n = self.words.len();
        let ka = k as f64 * self.alpha;
        let phi = Matrix::from_fn(n, k, |d, t| {
            (self.n_dk[d * k + t] as f64 + self.alpha) / (self.words[d].len() as f64 + ka)
        });
        let nb = nw as f64 * self.beta;
        let eta = Matrix::from_fn(k, nw, |t, w| {
            (self.n_kw[t * nw + w] as f64 + self.beta) / (self.n_k[t] as f64 + nb)
        });
        (phi, eta)
    }

    pub fn into_model(self, tdm: &TermDocMatrix) -> LdaModel {
        let (doc_topic, topic_word) = self.estimates();
        let log_likelihood = lda_log_likelihood(tdm, &doc_topic, &topic_word);
        LdaModel {
            k: self.k,
            alpha: self.alpha,
            beta: self.beta,
            doc_topic,
            topic_word,
            assignments: self.z,
            log_likelihood,
            doc_ids: tdm.doc_ids.clone(),
        }
    }
}

/// `Σ_ij x_ij log Σ_k φ_ik η_kj`.
pub fn lda_log_likelihood(tdm: &TermDocMatrix, phi: &Matrix, eta: &Matrix) -> f64 {
    let mut ll = 0.0;
    for i in 0..tdm.n_docs() {
        for (j, &c) in tdm.row(i).iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p: f64 = (0..phi.cols()).map(|t| phi[(i, t)] * eta[(t, j)]).sum();
            ll += c as f64 * log(p);
        }
    }
    ll
}

pub fn lda_fit(tdm: &TermDocMatrix, cfg: &LdaConfig) -> Result<LdaModel, EmbedError> {
    if cfg.k < 1 {
        return Err(EmbedError::InvalidK(cfg.k));
    }
    let mut s = LdaSampler::new(tdm, cfg.k, cfg.alpha(), cfg.beta, cfg.seed)?;
    for _ in 0..cfg.iters {
        s.sweep();
    }
    Ok(s.into_model(tdm))
}

/// `−2 logL + q log(total tokens)` with `q = K(N−1) + n(K−1)`.
pub fn lda_bic(model: &LdaModel, tdm: &TermDocMatrix) -> f64 {
    let (n, nw, k) = (tdm.n_docs() as f64, tdm.n_words() as f64, model.k as f64);
    let q = k * (nw - 1.0) + n * (k - 1.0);
    -2.0 * model.log_likelihood + q * log(tdm.total() as f64)
}

/// Index of the smallest BIC; ties go to the smaller `K`.
pub fn pick_min_bic(scored: &[(usize, f64)]) -> Option<usize> {
    (0..scored.len()).min_by(|&a, &b| {
        scored[a].1.total_cmp(&scored[b].1).then(scored[a].0.cmp(&scored[b].0))
    })
}

/// Fits every candidate `K` and keeps the BIC minimizer. Returns the chosen
/// model and the `(K, BIC)` table in candidate order.
pub fn lda_select_k(
    tdm: &TermDocMatrix,
    candidates: &[usize],
    base: &LdaConfig,
) -> Result<(LdaModel, Vec<(usize, f64)>), EmbedError> {
    if candidates.is_empty() {
        return Err(EmbedError::NoCandidates);
    }
    let mut models = Vec::with_capacity(candidates.len());
    let mut scored = Vec::with_capacity(candidates.len());
    for &k in candidates {
        let cfg = LdaConfig { k, alpha: base.alpha, ..base.clone() };
        let m = lda_fit(tdm, &cfg)?;
        scored.push((k, lda_bic(&m, tdm)));
        models.push(m);
    }
    let best = pick_min_bic(&scored).expect("nonempty");
    Ok((models.swap_remove(best), scored))
}
