use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::vector::SparseVector;
use crate::ai::AiNgramLexicon;
use crate::counts::Counts;
use crate::error::Error;
use crate::text::NGram;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectMeasure {
    Dot,
    Sum,
    Wavg,
}

impl DirectMeasure {
    pub const ALL: [DirectMeasure; 3] = [DirectMeasure::Dot, DirectMeasure::Sum, DirectMeasure::Wavg];

    pub fn name(self) -> &'static str {
        match self {
            DirectMeasure::Dot => "dot",
            DirectMeasure::Sum => "sum",
            DirectMeasure::Wavg => "wavg",
        }
    }
}

impl FromStr for DirectMeasure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown direct measure `{s}`")))
    }
}

impl fmt::Display for DirectMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A document seen by the direct framework: its year and title+abstract n-grams.
#[derive(Debug, Clone, Copy)]
pub struct NgramDoc<'a> {
    pub year: i32,
    pub ngrams: &'a [NGram],
}

/// Ĝ_AI^t: lexicon n-gram counts of AI documents with `start <= year < t`,
/// divided by the number of those documents. `None` when there are none.
pub fn build_ai_ngram_vector(
    ai_docs: &[NgramDoc<'_>],
    t: i32,
    start: i32,
    lexicon: &AiNgramLexicon,
    unique_per_doc: bool,
) -> Option<SparseVector<NGram>> {
    let mut c: Counts<NGram> = Counts::new();
    for d in ai_docs.iter().filter(|d| d.year >= start && d.year < t) {
        let kept: Vec<NGram> = d.ngrams.iter().filter(|g| lexicon.contains(g)).cloned().collect();
        c.add_doc(&kept, unique_per_doc);
    }
    (c.doc_count() > 0).then(|| SparseVector::per_doc(&c, c.doc_count()))
}

/// Ĝ_B^t: all n-gram counts of the entity's documents in year `t` per document.
pub fn build_field_ngram_vector(docs: &[NgramDoc<'_>], t: i32, unique_per_doc: bool) -> Option<SparseVector<NGram>> {
    let mut c: Counts<NGram> = Counts::new();
    for d in docs.iter().filter(|d| d.year == t) {
        c.add_doc(d.ngrams, unique_per_doc);
    }
    (c.doc_count() > 0).then(|| SparseVector::per_doc(&c, c.doc_count()))
}

/// `None` only for `wavg` when the AI vector has no mass.
pub fn direct_score<K: Ord + Clone>(
    field: &SparseVector<K>,
    ai: &SparseVector<K>,
    measure: DirectMeasure,
) -> Option<f64> {
    match measure {
        DirectMeasure::Dot => Some(field.dot(ai)),
        DirectMeasure::Sum => Some(field.sum_over_support(ai)),
        DirectMeasure::Wavg => {
            let mass = ai.sum();
            (mass > 0.0).then(|| field.dot(ai) / mass)
        }
    }
}
