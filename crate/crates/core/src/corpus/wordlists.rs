use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CorpusError;

pub const STOPWORDS_TXT: &str = include_str!("../../data/stopwords.txt");
pub const FUNCTION70_TXT: &str = include_str!("../../data/function70.txt");
pub const MARKERS_TXT: &str = include_str!("../../data/marker145.txt");
pub const LABELS_CSV: &str = include_str!("../../data/labels.csv");
pub const VERBS_TXT: &str = include_str!("../../data/verbs.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WordListKind {
    Stopwords,
    FunctionWords70,
    MarkerWords145,
}

impl WordListKind {
    pub fn file_name(self) -> &'static str {
        match self {
            WordListKind::Stopwords => "stopwords.txt",
            WordListKind::FunctionWords70 => "function70.txt",
            WordListKind::MarkerWords145 => "marker145.txt",
        }
    }

    fn bundled_text(self) -> &'static str {
        match self {
            WordListKind::Stopwords => STOPWORDS_TXT,
            WordListKind::FunctionWords70 => FUNCTION70_TXT,
            WordListKind::MarkerWords145 => MARKERS_TXT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordList {
    pub kind: WordListKind,
    pub words: BTreeSet<String>,
}

impl WordList {
    /// One word per line; blank lines and `#` comments are skipped.
    pub fn parse(kind: WordListKind, text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.to_lowercase().replace('\u{2019}', "'"))
            .collect();
        WordList { kind, words }
    }

    pub fn bundled(kind: WordListKind) -> Self {
        Self::parse(kind, kind.bundled_text())
    }

    pub fn contains(&self, w: &str) -> bool {
        self.words.contains(w)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// The three lists the term-document constructions need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordLists {
    pub stopwords: WordList,
    pub function70: WordList,
    pub markers: WordList,
}

impl WordLists {
    pub fn bundled() -> Self {
        WordLists {
            stopwords: WordList::bundled(WordListKind::Stopwords),
            function70: WordList::bundled(WordListKind::FunctionWords70),
            markers: WordList::bundled(WordListKind::MarkerWords145),
        }
    }

    /// Union of all three lists.
    pub fn closed_class(&self) -> BTreeSet<String> {
        let mut s = self.stopwords.words.clone();
        s.extend(self.function70.words.iter().cloned());
        s.extend(self.markers.words.iter().cloned());
        s
    }
}

impl Default for WordLists {
    fn default() -> Self {
        Self::bundled()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Author {
    Hamilton,
    Madison,
    Jay,
    Disputed,
    Joint,
}

impl Author {
    pub const ALL: [Author; 5] =
        [Author::Hamilton, Author::Madison, Author::Jay, Author::Disputed, Author::Joint];

    pub fn as_str(self) -> &'static str {
        match self {
            Author::Hamilton => "Hamilton",
            Author::Madison => "Madison",
            Author::Jay => "Jay",
            Author::Disputed => "Disputed",
            Author::Joint => "Joint",
        }
    }
}

impl fmt::Display for Author {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Author {
    type Err = CorpusError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Author::ALL
            .iter()
            .copied()
            .find(|a| a.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| CorpusError::BadLabel(s.to_string()))
    }
}

/// Paper number → authorship label.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LabelTable(pub BTreeMap<u32, Author>);

impl LabelTable {
    /// `paper_id,label` rows with an optional header.
    pub fn parse_csv(text: &str) -> Result<Self, CorpusError> {
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',');
            let (Some(id), Some(label), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(CorpusError::BadLabelRow(lineno + 1));
            };
            let Ok(id) = id.trim().parse::<u32>() else {
                if lineno == 0 {
                    continue;
                }
                return Err(CorpusError::BadLabelRow(lineno + 1));
            };
            if map.insert(id, label.parse()?).is_some() {
                return Err(CorpusError::BadLabelRow(lineno + 1));
            }
        }
        Ok(LabelTable(map))
    }

    pub fn bundled() -> Self {
        Self::parse_csv(LABELS_CSV).expect("bundled labels.csv is well formed")
    }

    pub fn get(&self, id: u32) -> Option<Author> {
        self.0.get(&id).copied()
    }

    pub fn census(&self) -> BTreeMap<Author, usize> {
        let mut c = BTreeMap::new();
        for a in self.0.values() {
            *c.entry(*a).or_insert(0) += 1;
        }
        c
    }
}

/// Expected label counts for the full 85-paper corpus.
pub const CENSUS: [(Author, usize); 5] = [
    (Author::Hamilton, 51),
    (Author::Madison, 14),
    (Author::Jay, 5),
    (Author::Disputed, 12),
    (Author::Joint, 3),
];

pub(crate) fn lines_of(text: &str) -> Vec<&str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_sizes() {
        let wl = WordLists::bundled();
        assert_eq!(wl.function70.len(), 70);
        assert_eq!(wl.stopwords.len(), 174);
        // 70 + 106 distinct entries, see the README note on the marker list
        assert_eq!(wl.markers.len(), 176);
        assert!(wl.function70.words.is_subset(&wl.markers.words));
        assert!(wl.stopwords.contains("i'm"));
    }

    #[test]
    fn label_census() {
        let t = LabelTable::bundled();
        assert_eq!(t.0.len(), 85);
        let c = t.census();
        for (a, n) in CENSUS {
            assert_eq!(c[&a], n, "{a}");
        }
        for id in [18, 19, 20] {
            assert_eq!(t.get(id), Some(Author::Joint));
        }
        for id in (49..=58).chain([62, 63]) {
            assert_eq!(t.get(id), Some(Author::Disputed));
        }
    }

    #[test]
    fn label_parse_errors() {
        assert_eq!(LabelTable::parse_csv("1,Nobody"), Err(CorpusError::BadLabel("Nobody".into())));
        assert_eq!(LabelTable::parse_csv("1,Jay\nx,Jay"), Err(CorpusError::BadLabelRow(2)));
    }
}
