//! Tokenization, lemmatization, POS tagging and n-gram extraction.

pub mod lemma;
pub mod ngram;
pub mod pos;
pub mod stopwords;
pub mod tokenize;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use lemma::{fold, Lemmatizer, LEMMA_TABLE_VERSION};
pub use ngram::{extract_ngrams, NGram};
pub use pos::{CoarsePos, PosLexicon, POS_LEXICON_VERSION};
pub use stopwords::{Stopwords, STOPWORDS_VERSION};
pub use tokenize::{is_alphabetic_token, is_punctuation_token, tokenize};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub coarse_pos: CoarsePos,
}

/// The full normalization stack shared by every corpus-facing stage.
#[derive(Debug, Clone)]
pub struct Normalizer {
    pub lemmatizer: Lemmatizer,
    pub stopwords: Stopwords,
    pub pos: PosLexicon,
}

impl Default for Normalizer {
    fn default() -> Self {
        let lemmatizer = Lemmatizer::default();
        let stopwords = Stopwords::bundled(&lemmatizer);
        Normalizer {
            lemmatizer,
            stopwords,
            pos: PosLexicon::default(),
        }
    }
}

impl Normalizer {
    /// Bundled resources, each optionally replaced or extended from a file.
    pub fn from_files(
        lemma_exceptions: Option<&Path>,
        stopwords: Option<&Path>,
        pos_lexicon: Option<&Path>,
    ) -> Result<Self> {
        let lemmatizer = match lemma_exceptions {
            Some(p) => Lemmatizer::with_exceptions_file(p)?,
            None => Lemmatizer::default(),
        };
        let stopwords = match stopwords {
            Some(p) => Stopwords::from_file(p, &lemmatizer)?,
            None => Stopwords::bundled(&lemmatizer),
        };
        let pos = match pos_lexicon {
            Some(p) => PosLexicon::with_file(p)?,
            None => PosLexicon::default(),
        };
        Ok(Normalizer {
            lemmatizer,
            stopwords,
            pos,
        })
    }

    pub fn lemmas(&self, text: &str) -> Vec<String> {
        tokenize(text).iter().map(|t| self.lemmatizer.lemmatize(t)).collect()
    }

    pub fn analyze(&self, text: &str) -> Vec<Token> {
        let surfaces = tokenize(text);
        let lemmas: Vec<String> = surfaces.iter().map(|t| self.lemmatizer.lemmatize(t)).collect();
        let tags = self.pos.tag(&surfaces, &lemmas);
        surfaces
            .into_iter()
            .zip(lemmas)
            .zip(tags)
            .map(|((surface, lemma), coarse_pos)| Token {
                surface,
                lemma,
                coarse_pos,
            })
            .collect()
    }

    pub fn ngrams(&self, text: &str) -> Vec<NGram> {
        extract_ngrams(&self.lemmas(text), &self.stopwords)
    }

    /// N-grams of several text fields; windows never cross field boundaries.
    pub fn ngrams_of<'a>(&self, fields: impl IntoIterator<Item = &'a str>) -> Vec<NGram> {
        fields.into_iter().flat_map(|f| self.ngrams(f)).collect()
    }

    /// Normalizes a listed phrase (concept term, blocklist entry) to an n-gram.
    pub fn phrase_ngram(&self, phrase: &str) -> Option<NGram> {
        let lemmas = self.lemmas(phrase);
        if lemmas.iter().all(|l| is_alphabetic_token(l)) {
            NGram::new(&lemmas)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemmas_are_folded_lowercase_and_nonempty() {
        let n = Normalizer::default();
        let toks = n.analyze("Détecting Networks, quickly");
        let lemmas: Vec<_> = toks.iter().map(|t| t.lemma.as_str()).collect();
        assert_eq!(lemmas, ["detect", "network", ",", "quickly"]);
    }

    #[test]
    fn ngrams_normalize_inflections() {
        let n = Normalizer::default();
        let g: Vec<_> = n
            .ngrams("Convolutional Neural Networks")
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(
            g,
            ["convolutional neural", "convolutional neural network", "neural network"]
        );
        assert_eq!(n.phrase_ngram("deep learning").unwrap(), n.ngrams("deep learning")[0]);
        assert!(n.phrase_ngram("learning").is_none());
    }

    #[test]
    fn fields_do_not_join() {
        let n = Normalizer::default();
        let g = n.ngrams_of(["deep", "learning"]);
        assert!(g.is_empty());
    }
}
