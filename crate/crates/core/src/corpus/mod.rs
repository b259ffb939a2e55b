//! Corpus ingestion: paper splitting, labels, tokens and counts.

mod lemma;
mod tokenize;
mod wordlists;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use lemma::{lemmatize, Lemmatizer};
pub use tokenize::tokenize;
pub use wordlists::{
    Author, LabelTable, WordList, WordListKind, WordLists, CENSUS, FUNCTION70_TXT, LABELS_CSV,
    MARKERS_TXT, STOPWORDS_TXT, VERBS_TXT,
};

pub const N_PAPERS: u32 = 85;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("paper No. {0} not found in source")]
    MissingPaper(u32),
    #[error("paper No. {0} appears more than once")]
    DuplicatePaper(u32),
    #[error("paper number {0} outside 1..=85")]
    PaperOutOfRange(u32),
    #[error("only {0} papers found, expected 85")]
    TooFewPapers(usize),
    #[error("paper No. {0} has no tokens after preprocessing")]
    EmptyDocument(u32),
    #[error("no label for paper No. {0}")]
    Unlabeled(u32),
    #[error("unknown authorship label {0:?}")]
    BadLabel(String),
    #[error("malformed label row at line {0}")]
    BadLabelRow(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: u32,
    pub title: String,
    pub raw_text: String,
    pub tokens: Vec<String>,
    pub label: Author,
}

impl Document {
    /// Tokenizes (and optionally lemmatizes) `raw_text`.
    pub fn new(id: u32, title: &str, raw_text: &str, label: Author, lemmatizer: Option<&Lemmatizer>) -> Self {
        let toks = tokenize(raw_text);
        let tokens = match lemmatizer {
            Some(l) => l.lemmatize(&toks),
            None => toks,
        };
        Document { id, title: title.to_string(), raw_text: raw_text.to_string(), tokens, label }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseOptions {
    /// Map tokens to lemmas (on by default).
    pub lemmatize: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { lemmatize: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    pub options: ParseOptions,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub provenance: Provenance,
}

impl Corpus {
    /// Wraps already built documents, e.g. a subset or a synthetic corpus.
    pub fn from_documents(documents: Vec<Document>, source: &str) -> Self {
        Corpus {
            documents,
            provenance: Provenance { source: source.to_string(), options: ParseOptions::default() },
        }
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn get(&self, id: u32) -> Option<&Document> {
        self.documents.iter().find(|d| d.id == id)
    }

    pub fn ids(&self) -> Vec<u32> {
        self.documents.iter().map(|d| d.id).collect()
    }

    pub fn labels(&self) -> LabelTable {
        LabelTable(self.documents.iter().map(|d| (d.id, d.label)).collect())
    }
}

/// A header line such as `FEDERALIST No. 10` or `THE FEDERALIST. NO. 10`.
fn header_number(line: &str) -> Option<u32> {
    let up = line.trim().to_ascii_uppercase();
    let rest = up.strip_prefix("THE ").unwrap_or(&up).trim_start();
    let rest = rest.strip_prefix("FEDERALIST")?;
    let rest = rest.strip_prefix('.').unwrap_or(rest).trim_start();
    let rest = rest.strip_prefix("NO")?;
    let rest = rest.strip_prefix('.').unwrap_or(rest).trim();
    let rest = rest.strip_suffix('.').unwrap_or(rest);
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

/// Gutenberg `*** START` / `*** END` markers bound the text when present.
fn strip_boilerplate(text: &str) -> &str {
    let mut body = text;
    if let Some(p) = body.find("*** START") {
        body = &body[p..];
        body = body.find('\n').map_or("", |nl| &body[nl + 1..]);
    }
    if let Some(p) = body.find("*** END") {
        body = &body[..p];
    }
    body
}

fn is_salutation(line: &str) -> bool {
    line.to_ascii_lowercase().starts_with("to the people of the state of new york")
}

fn is_preamble(line: &str) -> bool {
    let low = line.to_ascii_lowercase();
    let letters: Vec<char> = line.chars().filter(|c| c.is_alphabetic()).collect();
    low.starts_with("for the ")
        || low.starts_with("from the ")
        || low.starts_with("from mclean")
        || (!letters.is_empty() && letters.iter().all(|c| c.is_uppercase()))
}

fn is_signature(line: &str) -> bool {
    line.trim().trim_end_matches('.').eq_ignore_ascii_case("publius")
}

struct Section<'a> {
    number: u32,
    lines: Vec<&'a str>,
}

fn split_sections(text: &str) -> Vec<Section<'_>> {
    let mut out: Vec<Section<'_>> = Vec::new();
    for line in text.lines() {
        if let Some(n) = header_number(line) {
            out.push(Section { number: n, lines: Vec::new() });
        } else if let Some(s) = out.last_mut() {
            s.lines.push(line.trim_end_matches('\r'));
        }
    }
    out
}

/// (title, body) of one paper's lines.
fn title_and_body(lines: &[&str]) -> (String, String) {
    let nonempty: Vec<(usize, &str)> =
        lines.iter().enumerate().filter(|(_, l)| !l.trim().is_empty()).map(|(i, l)| (i, *l)).collect();
    let title = nonempty.first().map(|(_, l)| l.trim().to_string()).unwrap_or_default();
    let end = lines.iter().rposition(|l| is_signature(l)).unwrap_or(lines.len());
    let start = match lines[..end].iter().position(|l| is_salutation(l.trim())) {
        Some(p) => p + 1,
        None => {
            let mut s = nonempty.first().map_or(0, |(i, _)| i + 1);
            while s < end && (lines[s].trim().is_empty() || is_preamble(lines[s].trim())) {
                s += 1;
            }
            s
        }
    };
    let body = if start < end { lines[start..end].join("\n") } else { String::new() };
    (title, body.trim().to_string())
}

/// Splits the ebook into papers, attaches labels and builds token streams.
///
/// The text between a paper's salutation line and its final `PUBLIUS`
/// signature becomes its body. A second copy of No. 70 is dropped; any other
/// repeated number is an error.
pub fn parse_corpus(
    text: &str,
    labels: &LabelTable,
    options: &ParseOptions,
    source: &str,
) -> Result<Corpus, CorpusError> {
    let lemmatizer = options.lemmatize.then(Lemmatizer::bundled);
    parse_corpus_with(text, labels, options, source, lemmatizer.as_ref())
}

/// [`parse_corpus`] with a caller-supplied lemmatizer (`None` skips lemmas).
pub fn parse_corpus_with(
    text: &str,
    labels: &LabelTable,
    options: &ParseOptions,
    source: &str,
    lemmatizer: Option<&Lemmatizer>,
) -> Result<Corpus, CorpusError> {
    let body = strip_boilerplate(text);
    let mut by_id: BTreeMap<u32, Section<'_>> = BTreeMap::new();
    for s in split_sections(body) {
        if s.number == 0 || s.number > N_PAPERS {
            return Err(CorpusError::PaperOutOfRange(s.number));
        }
        if by_id.contains_key(&s.number) {
            if s.number == 70 {
                continue;
            }
            return Err(CorpusError::DuplicatePaper(s.number));
        }
        by_id.insert(s.number, s);
    }
    if by_id.len() < 2 {
        return Err(CorpusError::TooFewPapers(by_id.len()));
    }
    if let Some(missing) = (1..=N_PAPERS).find(|n| !by_id.contains_key(n)) {
        return Err(CorpusError::MissingPaper(missing));
    }
    let lem = if options.lemmatize { lemmatizer } else { None };
    let mut documents = Vec::with_capacity(by_id.len());
    for (id, s) in &by_id {
        let label = labels.get(*id).ok_or(CorpusError::Unlabeled(*id))?;
        let (title, raw) = title_and_body(&s.lines);
        let doc = Document::new(*id, &title, &raw, label, lem);
        if doc.tokens.is_empty() {
            return Err(CorpusError::EmptyDocument(*id));
        }
        documents.push(doc);
    }
    Ok(Corpus {
        documents,
        provenance: Provenance { source: source.to_string(), options: options.clone() },
    })
}

/// Occurrences of each vocabulary word in the document's tokens.
pub fn word_counts(doc: &Document, vocab: &[String]) -> Vec<u32> {
    let index: BTreeMap<&str, usize> = vocab.iter().enumerate().map(|(j, w)| (w.as_str(), j)).collect();
    let mut out = alloc::vec![0u32; vocab.len()];
    for t in &doc.tokens {
        if let Some(&j) = index.get(t.as_str()) {
            out[j] += 1;
        }
    }
    out
}
