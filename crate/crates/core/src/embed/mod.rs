//! Document embeddings: topic models, matrix factorizations and
//! aggregated external word vectors.

mod aggregate;
mod lda;
mod lsa;
mod nmf;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;

pub use aggregate::{
    aggregate_word_vectors, align_word_vectors, parse_word_vectors, Coverage, WordVectors,
};
pub use lda::{
    lda_bic, lda_fit, lda_log_likelihood, lda_select_k, pick_min_bic, LdaConfig, LdaModel, LdaSampler,
};
pub use lsa::{lsa_fit, lsa_matrix, Svd};
pub use nmf::{nmf_fit, nmf_matrix, NmfConfig};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EmbedError {
    #[error("invalid topic count {0}")]
    InvalidK(usize),
    #[error("rank {p} exceeds min(n, N) = {max}")]
    RankTooLarge { p: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty input matrix")]
    EmptyMatrix,
    #[error("no embedding row for paper {0}")]
    MissingDoc(u32),
    #[error("embedding row for unexpected paper {0}")]
    UnexpectedDoc(u32),
    #[error("malformed row {0}")]
    MalformedRow(usize),
    #[error("non-finite value in row {0}")]
    NonFiniteValue(usize),
    #[error("no candidates given")]
    NoCandidates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EmbedMethod {
    /// Row-normalized counts used directly.
    Bow,
    Lda,
    Lsa,
    Nmf,
    /// Word vectors averaged through the normalized counts.
    Aggregate,
    /// Loaded from a file.
    External,
}

impl EmbedMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            EmbedMethod::Bow => "bow",
            EmbedMethod::Lda => "lda",
            EmbedMethod::Lsa => "lsa",
            EmbedMethod::Nmf => "nmf",
            EmbedMethod::Aggregate => "aggregate",
            EmbedMethod::External => "external",
        }
    }
}

impl fmt::Display for EmbedMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for EmbedMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "bow" => EmbedMethod::Bow,
            "lda" => EmbedMethod::Lda,
            "lsa" => EmbedMethod::Lsa,
            "nmf" => EmbedMethod::Nmf,
            "aggregate" => EmbedMethod::Aggregate,
            "external" => EmbedMethod::External,
            other => return Err(alloc::format!("unknown embedding method {other:?}")),
        })
    }
}

/// `n × p` document features aligned with `doc_ids`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocEmbedding {
    pub values: Matrix,
    pub method: EmbedMethod,
    pub doc_ids: Vec<u32>,
}

impl DocEmbedding {
    pub fn dim(&self) -> usize {
        self.values.cols()
    }

    pub fn select_rows(&self, idx: &[usize]) -> DocEmbedding {
        DocEmbedding {
            values: self.values.select_rows(idx),
            method: self.method,
            doc_ids: idx.iter().map(|&i| self.doc_ids[i]).collect(),
        }
    }

    /// Builds an embedding from rows keyed by paper id, ordered as
    /// `expected_docs`. Every expected id must appear exactly once.
    pub fn from_keyed_rows(
        rows: Vec<(u32, Vec<f64>)>,
        expected_docs: &[u32],
        method: EmbedMethod,
    ) -> Result<DocEmbedding, EmbedError> {
        let dim = rows.first().map_or(0, |r| r.1.len());
        let mut by_id = alloc::collections::BTreeMap::new();
        for (line, (id, v)) in rows.into_iter().enumerate() {
            if v.len() != dim || dim == 0 {
                return Err(EmbedError::MalformedRow(line + 1));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(EmbedError::NonFiniteValue(line + 1));
            }
            if !expected_docs.contains(&id) {
                return Err(EmbedError::UnexpectedDoc(id));
            }
            if by_id.insert(id, v).is_some() {
                return Err(EmbedError::MalformedRow(line + 1));
            }
        }
        let mut data = Vec::with_capacity(expected_docs.len() * dim);
        for id in expected_docs {
            data.extend(by_id.remove(id).ok_or(EmbedError::MissingDoc(*id))?);
        }
        Ok(DocEmbedding {
            values: Matrix::from_vec(expected_docs.len(), dim, data),
            method,
            doc_ids: expected_docs.to_vec(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorMethod {
    Lsa,
    Nmf,
}

/// `X ≈ S·H` with `S` of shape `n × p` and `H` of shape `p × N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorModel {
    pub method: FactorMethod,
    pub s: Matrix,
    pub h: Matrix,
    pub rank: usize,
    /// Final squared Frobenius reconstruction error.
    pub objective: f64,
    /// Objective after every NMF iteration (empty for LSA).
    pub trace: Vec<f64>,
    /// Singular values (empty for NMF).
    pub singular_values: Vec<f64>,
    pub doc_ids: Vec<u32>,
}

impl FactorModel {
    pub fn embedding(&self) -> DocEmbedding {
        DocEmbedding {
            values: self.s.clone(),
            method: match self.method {
                FactorMethod::Lsa => EmbedMethod::Lsa,
                FactorMethod::Nmf => EmbedMethod::Nmf,
            },
            doc_ids: self.doc_ids.clone(),
        }
    }
}

/// Row-normalized counts as features.
pub fn bow_embedding(tdm: &crate::bow::TermDocMatrix) -> DocEmbedding {
    let r = crate::bow::row_normalize(tdm);
    DocEmbedding { values: r.values, method: EmbedMethod::Bow, doc_ids: r.doc_ids }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn keyed_rows() {
        let rows = vec![(2, vec![1.0, 2.0]), (1, vec![3.0, 4.0])];
        let e = DocEmbedding::from_keyed_rows(rows.clone(), &[1, 2], EmbedMethod::External).unwrap();
        assert_eq!(e.values.to_rows(), [vec![3.0, 4.0], vec![1.0, 2.0]]);
        assert_eq!(
            DocEmbedding::from_keyed_rows(rows.clone(), &[1, 2, 3], EmbedMethod::External),
            Err(EmbedError::MissingDoc(3))
        );
        assert_eq!(
            DocEmbedding::from_keyed_rows(rows, &[1], EmbedMethod::External),
            Err(EmbedError::UnexpectedDoc(2))
        );
        let bad = vec![(1, vec![f64::NAN, 0.0])];
        assert_eq!(
            DocEmbedding::from_keyed_rows(bad, &[1], EmbedMethod::External),
            Err(EmbedError::NonFiniteValue(1))
        );
        let ragged = vec![(1, vec![0.0, 0.0]), (2, vec![1.0])];
        assert_eq!(
            DocEmbedding::from_keyed_rows(ragged, &[1, 2], EmbedMethod::External),
            Err(EmbedError::MalformedRow(2))
        );
    }
}
