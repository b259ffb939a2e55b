use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::wordlists::{lines_of, WordLists, VERBS_TXT};

const IRREGULAR: &[(&str, &str)] = &[
    ("better", "good"),
    ("best", "good"),
    ("worse", "bad"),
    ("worst", "bad"),
    ("men", "man"),
    ("women", "woman"),
    ("children", "child"),
    ("feet", "foot"),
    ("teeth", "tooth"),
    ("mice", "mouse"),
    ("geese", "goose"),
    ("oxen", "ox"),
    ("wives", "wife"),
    ("lives", "life"),
    ("knives", "knife"),
    ("halves", "half"),
    ("leaves", "leaf"),
    ("criteria", "criterion"),
    ("phenomena", "phenomenon"),
];

const MODALS: &[&str] =
    &["could", "would", "should", "might", "must", "shall", "will", "may", "can", "ought"];

/// Words ending in `s` that are not plurals.
const KEEP_S: &[&str] = &[
    "always", "perhaps", "sometimes", "afterwards", "towards", "besides", "whereas", "news",
    "series", "species", "thus", "yes", "less", "unless", "alias", "canvas", "atlas", "was",
    "has", "does", "its", "his", "hers", "ours", "yours", "theirs", "this", "us", "as", "is",
    "means", "amongst", "whilst", "upwards", "downwards", "backwards", "forwards", "nowadays",
    "overseas", "bias", "gas", "politics", "ethics", "economics", "alms", "riches", "tidings",
    "thanks", "odds", "arms", "annals",
];

/// Dictionary lemmatizer: irregular table, modal guard, verb inflection
/// table, and plural rules guarded by the closed-class word lists.
#[derive(Debug, Clone)]
pub struct Lemmatizer {
    irregular: BTreeMap<String, String>,
    modals: BTreeSet<String>,
    verb_form: BTreeMap<String, String>,
    verb_lemma: BTreeSet<String>,
    closed: BTreeSet<String>,
    keep_s: BTreeSet<String>,
}

impl Lemmatizer {
    pub fn new(verb_table: &str, lists: &WordLists) -> Self {
        let mut verb_form = BTreeMap::new();
        let mut verb_lemma = BTreeSet::new();
        for line in lines_of(verb_table) {
            let mut it = line.split_whitespace();
            let Some(lemma) = it.next() else { continue };
            verb_lemma.insert(lemma.to_string());
            for form in it {
                if form != lemma {
                    verb_form.entry(form.to_string()).or_insert_with(|| lemma.to_string());
                }
            }
        }
        let own = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        Lemmatizer {
            irregular: IRREGULAR.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            modals: own(MODALS),
            verb_form,
            verb_lemma,
            closed: lists.closed_class(),
            keep_s: own(KEEP_S),
        }
    }

    pub fn bundled() -> Self {
        Self::new(VERBS_TXT, &WordLists::bundled())
    }

    fn step<'a>(&'a self, w: &'a str) -> &'a str {
        if let Some(l) = self.irregular.get(w) {
            return l;
        }
        if self.modals.contains(w) || self.verb_lemma.contains(w) {
            return w;
        }
        if let Some(l) = self.verb_form.get(w) {
            // a listed word only moves onto another listed word
            if !self.closed.contains(w) || self.closed.contains(l.as_str()) {
                return l;
            }
            return w;
        }
        if self.closed.contains(w) {
            return w;
        }
        self.depluralize(w)
    }

    fn depluralize<'a>(&self, w: &'a str) -> &'a str {
        let n = w.len();
        if n < 4 || !w.ends_with('s') || self.keep_s.contains(w) {
            return w;
        }
        if w.ends_with("ies") && n > 4 {
            // caller re-appends the y
            return w;
        }
        for suf in ["sses", "xes", "ches", "shes"] {
            if w.ends_with(suf) {
                return &w[..n - 2];
            }
        }
        if ["ss", "us", "is", "ics", "'s"].iter().any(|s| w.ends_with(s)) {
            return w;
        }
        &w[..n - 1]
    }

    fn step_owned(&self, w: &str) -> String {
        let n = w.len();
        if n > 4
            && w.ends_with("ies")
            && !self.irregular.contains_key(w)
            && !self.verb_form.contains_key(w)
            && !self.verb_lemma.contains(w)
            && !self.closed.contains(w)
            && !self.keep_s.contains(w)
        {
            let mut s = String::from(&w[..n - 3]);
            s.push('y');
            return s;
        }
        self.step(w).to_string()
    }

    /// Lemma of a single lowercase token. Rules are iterated to a fixed point,
    /// so the result is always its own lemma.
    pub fn lemma(&self, w: &str) -> String {
        let mut seen: Vec<String> = Vec::new();
        let mut cur = w.to_string();
        loop {
            let next = self.step_owned(&cur);
            if next == cur {
                return cur;
            }
            if seen.contains(&next) {
                // a cycle: settle on its smallest member
                seen.push(cur);
                let start = seen.iter().position(|s| *s == next).unwrap_or(0);
                return seen[start..].iter().min().cloned().unwrap_or(next);
            }
            seen.push(core::mem::replace(&mut cur, next));
        }
    }

    pub fn lemmatize(&self, tokens: &[String]) -> Vec<String> {
        let mut cache: BTreeMap<&str, String> = BTreeMap::new();
        tokens
            .iter()
            .map(|t| cache.entry(t.as_str()).or_insert_with(|| self.lemma(t)).clone())
            .collect()
    }
}

#[cfg(feature = "std")]
fn shared() -> &'static Lemmatizer {
    static CELL: std::sync::OnceLock<Lemmatizer> = std::sync::OnceLock::new();
    CELL.get_or_init(Lemmatizer::bundled)
}

/// Lemmatizes with the bundled dictionary and word lists.
pub fn lemmatize(tokens: &[String]) -> Vec<String> {
    #[cfg(feature = "std")]
    {
        shared().lemmatize(tokens)
    }
    #[cfg(not(feature = "std"))]
    {
        Lemmatizer::bundled().lemmatize(tokens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn lem(ws: &[&str]) -> Vec<String> {
        let v: Vec<String> = ws.iter().map(|s| s.to_string()).collect();
        lemmatize(&v)
    }

    #[test]
    fn textbook_cases() {
        assert_eq!(lem(&["running"]), ["run"]);
        assert_eq!(lem(&["better"]), ["good"]);
        assert_eq!(lem(&["upon", "whilst"]), ["upon", "whilst"]);
    }

    #[test]
    fn verbs_and_plurals() {
        assert_eq!(lem(&["was", "were", "is", "had"]), ["be", "be", "be", "have"]);
        assert_eq!(lem(&["states", "powers", "bodies", "taxes", "churches"]), [
            "state", "power", "body", "tax", "church"
        ]);
        assert_eq!(lem(&["always", "thus", "less", "class", "consensus", "basis", "politics"]), [
            "always", "thus", "less", "class", "consensus", "basis", "politics"
        ]);
        assert_eq!(lem(&["nation's", "would", "might"]), ["nation's", "would", "might"]);
        // marker words whose verb lemma is unlisted keep their surface form
        assert_eq!(lem(&["asserted", "decides", "others"]), ["asserted", "decide", "others"]);
    }

    #[test]
    fn idempotent_on_samples() {
        let l = Lemmatizer::bundled();
        for w in ["lies", "saw", "found", "leaves", "series", "ties", "lives", "axes", "news"] {
            let a = l.lemma(w);
            assert_eq!(l.lemma(&a), a, "{w}");
        }
        assert_eq!(lem(&[]), Vec::<String>::new());
        assert_eq!(lem(&["x"]), vec!["x".to_string()]);
    }
}
