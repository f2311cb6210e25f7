use std::fmt;

use serde::{Deserialize, Serialize};

use super::stopwords::Stopwords;
use super::tokenize::is_alphabetic_token;

/// A bigram or trigram of lemmas, stored space-joined.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NGram(String);

impl NGram {
    /// Builds an n-gram from 2 or 3 lemmas.
    pub fn new<S: AsRef<str>>(lemmas: &[S]) -> Option<Self> {
        if !(2..=3).contains(&lemmas.len()) || lemmas.iter().any(|l| l.as_ref().is_empty()) {
            return None;
        }
        let parts: Vec<&str> = lemmas.iter().map(|l| l.as_ref()).collect();
        Some(NGram(parts.join(" ")))
    }

    /// Wraps an already normalized, space-joined lemma string.
    pub fn from_normalized(s: &str) -> Option<Self> {
        let parts: Vec<&str> = s.split(' ').collect();
        Self::new(&parts)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.0.split(' ')
    }

    pub fn len(&self) -> usize {
        self.lemmas().count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for NGram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// All contiguous bigrams and trigrams of `lemmas`, in order of start position.
///
/// A window is dropped when it starts or ends with a stopword or when any of
/// its tokens is not purely alphabetic.
pub fn extract_ngrams<S: AsRef<str>>(lemmas: &[S], stopwords: &Stopwords) -> Vec<NGram> {
    let mut out = Vec::new();
    for i in 0..lemmas.len() {
        for n in 2..=3 {
            let Some(win) = lemmas.get(i..i + n) else {
                break;
            };
            if !win.iter().all(|t| is_alphabetic_token(t.as_ref())) {
                continue;
            }
            if stopwords.contains(win[0].as_ref()) || stopwords.contains(win[n - 1].as_ref()) {
                continue;
            }
            out.extend(NGram::new(win));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Lemmatizer;

    fn sw() -> Stopwords {
        Stopwords::bundled(&Lemmatizer::default())
    }

    fn strs(v: &[NGram]) -> Vec<&str> {
        v.iter().map(|g| g.as_str()).collect()
    }

    #[test]
    fn contiguous_windows() {
        let g = extract_ngrams(&["deep", "learning", "model"], &Stopwords::empty());
        assert_eq!(strs(&g), ["deep learning", "deep learning model", "learning model"]);
    }

    #[test]
    fn stopword_boundaries() {
        let g = extract_ngrams(&["the", "deep", "learning"], &sw());
        assert_eq!(strs(&g), ["deep learning"]);
        let g = extract_ngrams(&["state", "of", "the", "art"], &sw());
        assert!(g.is_empty());
        let g = extract_ngrams(&["state", "of", "art"], &sw());
        assert_eq!(strs(&g), ["state of art"]);
    }

    #[test]
    fn digits_and_punctuation_break_windows() {
        let g = extract_ngrams(&["deep", ",", "learning", "3d", "model"], &Stopwords::empty());
        assert!(g.is_empty());
        assert!(extract_ngrams::<&str>(&[], &sw()).is_empty());
    }

    #[test]
    fn ngram_constructor_guards() {
        assert!(NGram::new(&["a"]).is_none());
        assert!(NGram::new(&["a", "b", "c", "d"]).is_none());
        assert!(NGram::from_normalized("neural  network").is_none());
        let g = NGram::from_normalized("neural network").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.lemmas().collect::<Vec<_>>(), ["neural", "network"]);
    }
}
