use proptest::prelude::*;
use stylus_core::corpus::{tokenize, Lemmatizer};

proptest! {
    #[test]
    fn lemmatize_is_idempotent(words in prop::collection::vec("[a-z]{1,12}(s|es|ies|ed|ing)?", 1..40)) {
        let lem = Lemmatizer::bundled();
        let toks: Vec<String> = words;
        let once = lem.lemmatize(&toks);
        let twice = lem.lemmatize(&once);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn tokens_are_lowercase_words(s in "\\PC{0,200}") {
        for t in tokenize(&s) {
            prop_assert!(!t.is_empty());
            prop_assert!(t.chars().all(|c| c.is_ascii_lowercase() || c == '\''));
            prop_assert!(!t.starts_with('\'') && !t.ends_with('\''));
        }
    }
}

#[test]
fn known_lemmas() {
    let lem = Lemmatizer::bundled();
    let cases = [("running", "run"), ("better", "good"), ("was", "be"), ("is", "be"), ("papers", "paper"), ("states", "state")];
    for (w, want) in cases {
        assert_eq!(lem.lemma(w), want, "{w}");
    }
}
