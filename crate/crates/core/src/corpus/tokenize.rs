use alloc::string::String;
use alloc::vec::Vec;

/// Lowercased word tokens.
///
/// Any character outside `[a-z']` after lowercasing is a boundary, so digits,
/// punctuation and dashes all split. Curly apostrophes count as `'`. Tokens
/// lose leading and trailing apostrophes, and tokens left empty are dropped.
pub fn tokenize(raw: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in raw.chars() {
        let ch = match ch {
            '\u{2019}' | '\u{2018}' | '\u{02bc}' => '\'',
            c => c,
        };
        let mut push = |c: char| {
            if c.is_ascii_lowercase() || c == '\'' {
                cur.push(c);
                true
            } else {
                false
            }
        };
        let mut boundary = false;
        if ch.is_ascii() {
            boundary = !push(ch.to_ascii_lowercase());
        } else {
            for c in ch.to_lowercase() {
                if !push(c) {
                    boundary = true;
                }
            }
        }
        if boundary {
            flush(&mut cur, &mut out);
        }
    }
    flush(&mut cur, &mut out);
    out
}

fn flush(cur: &mut String, out: &mut Vec<String>) {
    let t = cur.trim_matches('\'');
    if !t.is_empty() {
        out.push(String::from(t));
    }
    cur.clear();
}
