use unicode_normalization::char::is_combining_mark;

fn is_hyphen(c: char) -> bool {
    matches!(c, '-' | '\u{2010}' | '\u{2011}')
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '\u{02BC}')
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_combining_mark(c)
}

/// Splits `text` into lowercase word tokens.
///
/// Whitespace and hyphens separate words and are dropped. Apostrophes are
/// dropped inside words and a trailing possessive `'s` is removed. Every
/// other non-alphanumeric character becomes a one-character punctuation
/// token, which downstream stages treat as a hard boundary.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut chars = text.chars().peekable();

    while let Some(c) = chars.next() {
        if is_word_char(c) {
            cur.extend(c.to_lowercase());
        } else if is_apostrophe(c) {
            if !cur.is_empty() {
                let mut look = chars.clone();
                let possessive =
                    matches!(look.next(), Some('s' | 'S')) && look.peek().is_none_or(|n| !is_word_char(*n));
                if possessive {
                    chars.next();
                }
            }
        } else if c.is_whitespace() || is_hyphen(c) {
            flush(&mut cur, &mut out);
        } else {
            flush(&mut cur, &mut out);
            out.push(c.to_string());
        }
    }
    flush(&mut cur, &mut out);
    out
}

fn flush(cur: &mut String, out: &mut Vec<String>) {
    if !cur.is_empty() {
        out.push(std::mem::take(cur));
    }
}

/// True when the token is made of letters only (no digits, no punctuation).
pub fn is_alphabetic_token(token: &str) -> bool {
    !token.is_empty() && token.chars().all(|c| c.is_alphabetic() || is_combining_mark(c))
}

/// True for the single-character punctuation tokens emitted by [`tokenize`].
pub fn is_punctuation_token(token: &str) -> bool {
    let mut it = token.chars();
    matches!((it.next(), it.next()), (Some(c), None) if !is_word_char(c))
}
