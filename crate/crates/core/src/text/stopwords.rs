use std::collections::BTreeSet;
use std::path::Path;

use super::lemma::Lemmatizer;
use crate::error::{Error, Result};

const DEFAULT_STOPWORDS: &str = include_str!("data/stopwords_v1.txt");

/// Version tag of the bundled list; fixtures pin this.
pub const STOPWORDS_VERSION: &str = "v1";

/// Stopword lemmas. Entries are stored both as written and lemmatized so a
/// check against a lemma never misses an inflected list entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stopwords {
    words: BTreeSet<String>,
}

impl Stopwords {
    pub fn bundled(lemmatizer: &Lemmatizer) -> Self {
        Self::parse(DEFAULT_STOPWORDS, lemmatizer)
    }

    pub fn from_file(path: &Path, lemmatizer: &Lemmatizer) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text, lemmatizer))
    }

    pub fn parse(text: &str, lemmatizer: &Lemmatizer) -> Self {
        let mut words = BTreeSet::new();
        for line in text.lines() {
            let w = line.trim();
            if w.is_empty() || w.starts_with('#') {
                continue;
            }
            let folded = super::lemma::fold(w);
            words.insert(lemmatizer.lemmatize(&folded));
            words.insert(folded);
        }
        Stopwords { words }
    }

    pub fn empty() -> Self {
        Stopwords { words: BTreeSet::new() }
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.words.contains(lemma)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_list_contains_function_words() {
        let sw = Stopwords::bundled(&Lemmatizer::default());
        for w in ["the", "of", "for", "and", "be", "have"] {
            assert!(sw.contains(w), "{w}");
        }
        assert!(!sw.contains("learn"));
        assert!(!sw.contains("network"));
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let sw = Stopwords::parse("# header\n\nthe\n  towards \n", &Lemmatizer::default());
        assert!(sw.contains("the"));
        assert!(sw.contains("toward"));
        assert!(!sw.contains("# header"));
    }
}
