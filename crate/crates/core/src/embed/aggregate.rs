use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{DocEmbedding, EmbedError, EmbedMethod};
use crate::bow::RowNormalizedMatrix;
use crate::linalg::Matrix;

/// Word vectors keyed by word.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WordVectors {
    pub dim: usize,
    pub vectors: BTreeMap<String, Vec<f64>>,
}

/// How much of a vocabulary found a vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub found: usize,
    pub total: usize,
    /// Vocabulary words that got the zero vector.
    pub missing: Vec<String>,
}

/// Parses `word v1 … vd` lines (whitespace separated). Blank lines are
/// skipped; a first line of exactly two integers (the word2vec header) is
/// ignored.
pub fn parse_word_vectors(text: &str) -> Result<WordVectors, EmbedError> {
    let mut out = WordVectors::default();
    for (lineno, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        let Some(word) = parts.next() else { continue };
        let rest: Vec<&str> = parts.collect();
        if lineno == 0 && rest.len() == 1 && word.parse::<u64>().is_ok() && rest[0].parse::<u64>().is_ok() {
            continue;
        }
        let mut v = Vec::with_capacity(rest.len());
        for r in rest {
            let x: f64 = r.parse().map_err(|_| EmbedError::MalformedRow(lineno + 1))?;
            if !x.is_finite() {
                return Err(EmbedError::NonFiniteValue(lineno + 1));
            }
            v.push(x);
        }
        if v.is_empty() || (out.dim != 0 && v.len() != out.dim) {
            return Err(EmbedError::MalformedRow(lineno + 1));
        }
        out.dim = v.len();
        out.vectors.insert(word.to_lowercase(), v);
    }
    Ok(out)
}

/// `N × d` matrix with one row per vocabulary word; missing words get zeros.
pub fn align_word_vectors(wv: &WordVectors, vocab: &[String]) -> (Matrix, Coverage) {
    let mut m = Matrix::zeros(vocab.len(), wv.dim);
    let mut missing = Vec::new();
    for (j, w) in vocab.iter().enumerate() {
        match wv.vectors.get(w) {
            Some(v) => m.row_mut(j).copy_from_slice(v),
            None => missing.push(w.to_string()),
        }
    }
    let cov = Coverage { found: vocab.len() - missing.len(), total: vocab.len(), missing };
    (m, cov)
}

/// `Z_D = X̃ · Z_W`.
pub fn aggregate_word_vectors(x_norm: &RowNormalizedMatrix, word_vectors: &Matrix) -> Result<DocEmbedding, EmbedError> {
    let expected = x_norm.values.cols();
    if word_vectors.rows() != expected {
        return Err(EmbedError::DimensionMismatch { expected, got: word_vectors.rows() });
    }
    Ok(DocEmbedding {
        values: x_norm.values.matmul(word_vectors),
        method: EmbedMethod::Aggregate,
        doc_ids: x_norm.doc_ids.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bow::{row_normalize, InputType, TermDocMatrix};
    use alloc::vec;

    fn words(ws: &[&str]) -> Vec<String> {
        ws.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn one_word_docs_copy_vectors() {
        let t = TermDocMatrix::from_rows(&[vec![4, 0], vec![0, 1]], vec![1, 2], words(&["a", "b"]), InputType::Type2);
        let zw = Matrix::from_rows(&[[1.0, 2.0, 3.0], [-1.0, 0.5, 0.0]]);
        let zd = aggregate_word_vectors(&row_normalize(&t), &zw).unwrap();
        assert_eq!(zd.values, zw);
    }

    #[test]
    fn uniform_doc_is_mean() {
        let t = TermDocMatrix::from_rows(&[vec![2, 2]], vec![7], words(&["a", "b"]), InputType::Type2);
        let zw = Matrix::from_rows(&[[1.0, 4.0], [3.0, 0.0]]);
        let zd = aggregate_word_vectors(&row_normalize(&t), &zw).unwrap();
        assert_eq!(zd.values.row(0), [2.0, 2.0]);
        assert_eq!(zd.doc_ids, [7]);
    }

    #[test]
    fn mismatch() {
        let t = TermDocMatrix::from_rows(&[vec![1, 1]], vec![1], words(&["a", "b"]), InputType::Type2);
        let zw = Matrix::zeros(3, 2);
        assert_eq!(
            aggregate_word_vectors(&row_normalize(&t), &zw),
            Err(EmbedError::DimensionMismatch { expected: 2, got: 3 })
        );
    }

    #[test]
    fn parse_and_align() {
        let wv = parse_word_vectors("3 2\nupon 0.5 1\nWhilst -1 2e-1\n\n").unwrap();
        assert_eq!(wv.dim, 2);
        let (m, cov) = align_word_vectors(&wv, &words(&["on", "upon", "whilst"]));
        assert_eq!(m.to_rows(), [vec![0.0, 0.0], vec![0.5, 1.0], vec![-1.0, 0.2]]);
        assert_eq!((cov.found, cov.total), (2, 3));
        assert_eq!(cov.missing, ["on"]);
        assert_eq!(parse_word_vectors("a 1 2\nb 1"), Err(EmbedError::MalformedRow(2)));
        assert_eq!(parse_word_vectors("a 1 x"), Err(EmbedError::MalformedRow(1)));
        assert_eq!(parse_word_vectors("a 1 inf"), Err(EmbedError::NonFiniteValue(1)));
    }
}
