//! Term-document count matrices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Author, Corpus, LabelTable, WordLists, CENSUS};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BowError {
    #[error("no word survives the {0} filter")]
    EmptyVocabulary(InputType),
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
}

/// Which words become columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InputType {
    /// All lemmas except stopwords.
    Type1,
    /// All lemmas.
    Type2,
    /// Lemmas on the marker-word list.
    Type3,
}

impl InputType {
    pub const ALL: [InputType; 3] = [InputType::Type1, InputType::Type2, InputType::Type3];

    pub fn as_str(self) -> &'static str {
        match self {
            InputType::Type1 => "type1",
            InputType::Type2 => "type2",
            InputType::Type3 => "type3",
        }
    }
}

impl fmt::Display for InputType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InputType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "type1" | "1" => Ok(InputType::Type1),
            "type2" | "2" => Ok(InputType::Type2),
            "type3" | "3" => Ok(InputType::Type3),
            other => Err(alloc::format!("unknown input type {other:?}")),
        }
    }
}

/// Dense `n × N` count matrix, rows = documents, columns = sorted vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDocMatrix {
    counts: Vec<u32>,
    pub doc_ids: Vec<u32>,
    pub vocab: Vec<String>,
    pub input_type: InputType,
}

impl TermDocMatrix {
    /// Panics if `counts.len() != doc_ids.len() * vocab.len()`.
    pub fn new(counts: Vec<u32>, doc_ids: Vec<u32>, vocab: Vec<String>, input_type: InputType) -> Self {
        assert_eq!(counts.len(), doc_ids.len() * vocab.len(), "tdm shape");
        TermDocMatrix { counts, doc_ids, vocab, input_type }
    }

    pub fn from_rows(rows: &[Vec<u32>], doc_ids: Vec<u32>, vocab: Vec<String>, input_type: InputType) -> Self {
        let counts = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(counts, doc_ids, vocab, input_type)
    }

    pub fn n_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn n_words(&self) -> usize {
        self.vocab.len()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        let n = self.vocab.len();
        &self.counts[i * n..(i + 1) * n]
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.counts[i * self.vocab.len() + j]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.n_docs()).map(|i| self.row(i).iter().map(|&c| c as u64).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let mut s = vec![0u64; self.n_words()];
        for i in 0..self.n_docs() {
            for (a, &c) in s.iter_mut().zip(self.row(i)) {
                *a += c as u64;
            }
        }
        s
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_vec(self.n_docs(), self.n_words(), self.counts.iter().map(|&c| c as f64).collect())
    }

    pub fn row_index(&self, id: u32) -> Option<usize> {
        self.doc_ids.iter().position(|&d| d == id)
    }

    pub fn col_index(&self, word: &str) -> Option<usize> {
        self.vocab.binary_search_by(|w| w.as_str().cmp(word)).ok()
    }

    /// Rows in the given order. Columns keep the parent vocabulary, so a
    /// subset may carry all-zero columns.
    pub fn select_rows(&self, idx: &[usize]) -> TermDocMatrix {
        let mut counts = Vec::with_capacity(idx.len() * self.n_words());
        for &i in idx {
            counts.extend_from_slice(self.row(i));
        }
        TermDocMatrix {
            counts,
            doc_ids: idx.iter().map(|&i| self.doc_ids[i]).collect(),
            vocab: self.vocab.clone(),
            input_type: self.input_type,
        }
    }

    /// Column-wise sum over the given rows.
    pub fn pooled(&self, idx: &[usize]) -> Vec<u64> {
        let mut s = vec![0u64; self.n_words()];
        for &i in idx {
            for (a, &c) in s.iter_mut().zip(self.row(i)) {
                *a += c as u64;
            }
        }
        s
    }
}

pub fn build_tdm(corpus: &Corpus, input_type: InputType) -> Result<TermDocMatrix, BowError> {
    build_tdm_with(corpus, input_type, &WordLists::bundled())
}

/// Counts each document's tokens over the word set chosen by `input_type`.
pub fn build_tdm_with(corpus: &Corpus, input_type: InputType, lists: &WordLists) -> Result<TermDocMatrix, BowError> {
    let keep = |w: &str| match input_type {
        InputType::Type1 => !lists.stopwords.contains(w),
        InputType::Type2 => true,
        InputType::Type3 => lists.markers.contains(w),
    };
    let vocab_set: BTreeSet<&str> = corpus
        .documents
        .iter()
        .flat_map(|d| d.tokens.iter().map(String::as_str))
        .filter(|w| keep(w))
        .collect();
    if vocab_set.is_empty() {
        return Err(BowError::EmptyVocabulary(input_type));
    }
    let index: BTreeMap<&str, usize> = vocab_set.iter().enumerate().map(|(j, w)| (*w, j)).collect();
    let n_words = index.len();
    let mut counts = vec![0u32; corpus.len() * n_words];
    for (i, d) in corpus.documents.iter().enumerate() {
        for t in &d.tokens {
            if let Some(&j) = index.get(t.as_str()) {
                counts[i * n_words + j] += 1;
            }
        }
    }
    Ok(TermDocMatrix {
        counts,
        doc_ids: corpus.ids(),
        vocab: vocab_set.into_iter().map(String::from).collect(),
        input_type,
    })
}

/// Rows scaled to sum to one; `zero_rows[i]` marks rows with no counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowNormalizedMatrix {
    pub values: Matrix,
    pub zero_rows: Vec<bool>,
    pub doc_ids: Vec<u32>,
    pub vocab: Vec<String>,
}

pub fn row_normalize(tdm: &TermDocMatrix) -> RowNormalizedMatrix {
    let (n, p) = (tdm.n_docs(), tdm.n_words());
    let mut values = Matrix::zeros(n, p);
    let mut zero_rows = vec![false; n];
    for i in 0..n {
        let s: u64 = tdm.row(i).iter().map(|&c| c as u64).sum();
        if s == 0 {
            zero_rows[i] = true;
            continue;
        }
        for (v, &c) in values.row_mut(i).iter_mut().zip(tdm.row(i)) {
            *v = c as f64 / s as f64;
        }
    }
    RowNormalizedMatrix { values, zero_rows, doc_ids: tdm.doc_ids.clone(), vocab: tdm.vocab.clone() }
}

/// Row positions of the training (Hamilton, Madison), test (disputed) and
/// joint papers. Jay's papers land in none of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitIndex {
    pub train: Vec<usize>,
    /// `true` for Madison, aligned with `train`.
    pub train_madison: Vec<bool>,
    pub test: Vec<usize>,
    pub joint: Vec<usize>,
}

/// Splits positions of `doc_ids` by label. When all 85 papers are present the
/// label census must match the authorship table.
pub fn split_indices(doc_ids: &[u32], labels: &LabelTable) -> Result<SplitIndex, BowError> {
    let mut s = SplitIndex { train: vec![], train_madison: vec![], test: vec![], joint: vec![] };
    let mut census: BTreeMap<Author, usize> = BTreeMap::new();
    for (i, &id) in doc_ids.iter().enumerate() {
        let a = labels
            .get(id)
            .ok_or_else(|| BowError::LabelMismatch(alloc::format!("no label for paper {id}")))?;
        *census.entry(a).or_insert(0) += 1;
        match a {
            Author::Hamilton | Author::Madison => {
                s.train.push(i);
                s.train_madison.push(a == Author::Madison);
            }
            Author::Disputed => s.test.push(i),
            Author::Joint => s.joint.push(i),
            Author::Jay => {}
        }
    }
    if doc_ids.len() == crate::corpus::N_PAPERS as usize {
        for (a, n) in CENSUS {
            let got = census.get(&a).copied().unwrap_or(0);
            if got != n {
                return Err(BowError::LabelMismatch(alloc::format!("{got} {a} papers, expected {n}")));
            }
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TdmSplit {
    pub train: TermDocMatrix,
    pub train_madison: Vec<bool>,
    pub test: TermDocMatrix,
    pub joint: TermDocMatrix,
}

pub fn split_train_test(tdm: &TermDocMatrix, labels: &LabelTable) -> Result<TdmSplit, BowError> {
    let idx = split_indices(&tdm.doc_ids, labels)?;
    Ok(TdmSplit {
        train: tdm.select_rows(&idx.train),
        train_madison: idx.train_madison,
        test: tdm.select_rows(&idx.test),
        joint: tdm.select_rows(&idx.joint),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;
    use alloc::string::ToString;

    fn doc(id: u32, toks: &[&str], label: Author) -> Document {
        Document {
            id,
            title: String::new(),
            raw_text: String::new(),
            tokens: toks.iter().map(|s| s.to_string()).collect(),
            label,
        }
    }

    fn corpus(docs: Vec<Document>) -> Corpus {
        Corpus::from_documents(docs, "test")
    }

    #[test]
    fn single_doc_type2() {
        let c = corpus(vec![doc(1, &["on", "on"], Author::Hamilton)]);
        let t = build_tdm(&c, InputType::Type2).unwrap();
        assert_eq!((t.n_docs(), t.n_words()), (1, 1));
        assert_eq!(t.get(0, 0), 2);
    }

    #[test]
    fn stopword_only_corpus_has_no_type1_vocab() {
        let c = corpus(vec![doc(1, &["the", "of", "and"], Author::Hamilton)]);
        assert_eq!(build_tdm(&c, InputType::Type1), Err(BowError::EmptyVocabulary(InputType::Type1)));
    }

    #[test]
    fn types_nest_and_sort() {
        let c = corpus(vec![
            doc(1, &["upon", "the", "union", "zeal", "whilst"], Author::Hamilton),
            doc(2, &["the", "commerce", "upon"], Author::Madison),
        ]);
        let t1 = build_tdm(&c, InputType::Type1).unwrap();
        let t2 = build_tdm(&c, InputType::Type2).unwrap();
        let t3 = build_tdm(&c, InputType::Type3).unwrap();
        assert_eq!(t2.vocab, ["commerce", "the", "union", "upon", "whilst", "zeal"]);
        assert!(!t1.vocab.contains(&"the".to_string()));
        assert!(t1.vocab.iter().all(|w| t2.vocab.contains(w)));
        assert_eq!(t3.vocab, ["the", "upon", "whilst"]);
        assert_eq!(t3.row_sums(), [3, 2]);
        assert!(t3.col_sums().iter().all(|&s| s > 0));
        assert_eq!(t2.col_index("union"), Some(2));
    }

    #[test]
    fn normalization() {
        let v = |s: &[&str]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let t = TermDocMatrix::from_rows(&[vec![1, 3], vec![4, 0], vec![0, 0]], vec![1, 2, 3], v(&["a", "b"]), InputType::Type2);
        let r = row_normalize(&t);
        assert_eq!(r.values.to_rows(), [vec![0.25, 0.75], vec![1.0, 0.0], vec![0.0, 0.0]]);
        assert_eq!(r.zero_rows, [false, false, true]);
        let t = TermDocMatrix::from_rows(&[vec![2, 2]], vec![1], v(&["a", "b"]), InputType::Type2);
        assert_eq!(row_normalize(&t).values.row(0), [0.5, 0.5]);
    }

    #[test]
    fn splits() {
        let labels = LabelTable::bundled();
        let all: Vec<u32> = (1..=85).collect();
        let s = split_indices(&all, &labels).unwrap();
        assert_eq!((s.train.len(), s.test.len(), s.joint.len()), (65, 12, 3));
        assert_eq!(s.train_madison.iter().filter(|&&m| m).count(), 14);

        let ham: Vec<u32> = all.iter().copied().filter(|&i| labels.get(i) == Some(Author::Hamilton)).collect();
        let s = split_indices(&ham, &labels).unwrap();
        assert_eq!((s.train.len(), s.test.len(), s.joint.len()), (51, 0, 0));

        let mut missing = labels.clone();
        missing.0.remove(&10);
        assert!(matches!(split_indices(&all, &missing), Err(BowError::LabelMismatch(_))));

        let mut wrong = labels.clone();
        wrong.0.insert(1, Author::Madison);
        assert!(matches!(split_indices(&all, &wrong), Err(BowError::LabelMismatch(_))));
    }
}
