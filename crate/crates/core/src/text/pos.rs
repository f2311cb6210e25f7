//! Coarse part-of-speech tagging from a word lexicon plus suffix heuristics.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::tokenize::{is_alphabetic_token, is_punctuation_token};
use crate::error::{Error, Result};

const DEFAULT_LEXICON: &str = include_str!("data/pos_lexicon_v1.csv");

pub const POS_LEXICON_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoarsePos {
    Verb,
    Noun,
    Adjective,
    Determiner,
    Other,
}

impl CoarsePos {
    fn bit(self) -> u8 {
        match self {
            CoarsePos::Verb => 1,
            CoarsePos::Noun => 2,
            CoarsePos::Adjective => 4,
            CoarsePos::Determiner => 8,
            CoarsePos::Other => 16,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.trim().to_ascii_lowercase().as_str() {
            "verb" => CoarsePos::Verb,
            "noun" => CoarsePos::Noun,
            "adjective" | "adj" => CoarsePos::Adjective,
            "determiner" | "det" => CoarsePos::Determiner,
            "other" => CoarsePos::Other,
            _ => return None,
        })
    }
}

impl fmt::Display for CoarsePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CoarsePos::Verb => "verb",
            CoarsePos::Noun => "noun",
            CoarsePos::Adjective => "adjective",
            CoarsePos::Determiner => "determiner",
            CoarsePos::Other => "other",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct PosSet(u8);

impl PosSet {
    fn with(self, p: CoarsePos) -> Self {
        PosSet(self.0 | p.bit())
    }
    fn has(self, p: CoarsePos) -> bool {
        self.0 & p.bit() != 0
    }
    fn single(self) -> Option<CoarsePos> {
        if self.0.count_ones() != 1 {
            return None;
        }
        [
            CoarsePos::Verb,
            CoarsePos::Noun,
            CoarsePos::Adjective,
            CoarsePos::Determiner,
            CoarsePos::Other,
        ]
        .into_iter()
        .find(|p| self.has(*p))
    }
}

/// Word to POS-candidates table. A lemma listed with several tags is ambiguous.
#[derive(Debug, Clone)]
pub struct PosLexicon {
    entries: HashMap<String, PosSet>,
}

impl Default for PosLexicon {
    fn default() -> Self {
        Self::parse(DEFAULT_LEXICON, "<bundled>").expect("bundled POS lexicon parses")
    }
}

impl PosLexicon {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut entries: HashMap<String, PosSet> = HashMap::new();
        for (i, row) in rdr.records().enumerate() {
            let row = row?;
            let word = row.get(0).unwrap_or("");
            let pos = row
                .get(1)
                .and_then(CoarsePos::parse)
                .ok_or_else(|| Error::Data(format!("{origin}: row {} has an unknown pos", i + 2)))?;
            if word.is_empty() {
                return Err(Error::Data(format!("{origin}: row {} has an empty lemma", i + 2)));
            }
            let e = entries.entry(word.to_lowercase()).or_default();
            *e = e.with(pos);
        }
        Ok(PosLexicon { entries })
    }

    /// Bundled lexicon extended by the rows of `path`.
    pub fn with_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lex = PosLexicon::default();
        let extra = PosLexicon::parse(&text, &path.display().to_string())?;
        for (k, v) in extra.entries {
            let e = lex.entries.entry(k).or_default();
            *e = PosSet(e.0 | v.0);
        }
        Ok(lex)
    }

    fn lookup(&self, surface: &str, lemma: &str) -> Option<PosSet> {
        self.entries.get(surface).or_else(|| self.entries.get(lemma)).copied()
    }

    /// Tags a lowercased token sequence given its lemmas.
    pub fn tag(&self, surfaces: &[String], lemmas: &[String]) -> Vec<CoarsePos> {
        debug_assert_eq!(surfaces.len(), lemmas.len());
        let mut tags: Vec<CoarsePos> = Vec::with_capacity(surfaces.len());
        for (i, (s, l)) in surfaces.iter().zip(lemmas).enumerate() {
            let prev = if i == 0 { None } else { Some(tags[i - 1]) };
            let prev_lemma = if i == 0 { None } else { Some(lemmas[i - 1].as_str()) };
            tags.push(self.tag_one(s, l, prev, prev_lemma));
        }
        tags
    }

    fn tag_one(&self, surface: &str, lemma: &str, prev: Option<CoarsePos>, prev_lemma: Option<&str>) -> CoarsePos {
        if is_punctuation_token(surface) {
            return CoarsePos::Other;
        }
        if !is_alphabetic_token(surface) {
            return CoarsePos::Noun;
        }
        let cands = self
            .lookup(surface, lemma)
            .unwrap_or_else(|| suffix_candidates(surface, lemma));

        let inflected = surface != lemma;
        let gerund = inflected && surface.ends_with("ing");
        let participle = inflected && surface.ends_with("ed");

        if cands.has(CoarsePos::Verb) && gerund {
            return match prev {
                None | Some(CoarsePos::Other) => CoarsePos::Verb,
                _ => CoarsePos::Noun,
            };
        }
        if cands.has(CoarsePos::Verb) && participle {
            return CoarsePos::Adjective;
        }
        if let Some(p) = cands.single() {
            return p;
        }
        if prev_lemma == Some("to") && cands.has(CoarsePos::Verb) {
            return CoarsePos::Verb;
        }
        if prev == Some(CoarsePos::Determiner) {
            if cands.has(CoarsePos::Noun) {
                return CoarsePos::Noun;
            }
            if cands.has(CoarsePos::Adjective) {
                return CoarsePos::Adjective;
            }
        }
        for p in [
            CoarsePos::Noun,
            CoarsePos::Adjective,
            CoarsePos::Verb,
            CoarsePos::Determiner,
        ] {
            if cands.has(p) {
                return p;
            }
        }
        CoarsePos::Other
    }
}

const NON_ADVERB_LY: &[&str] = &["ply", "oly", "aly", "ely"];
const VERB_ENDINGS: &[&str] = &["ize", "ify", "yse"];
const NOUN_ENDINGS: &[&str] = &[
    "tion", "sion", "ment", "ness", "ity", "ance", "ence", "ism", "ogy", "ship", "ure", "ist", "ics", "ery", "er", "or",
];
const ADJ_ENDINGS: &[&str] = &[
    "al", "ic", "ive", "ous", "ful", "less", "able", "ible", "ary", "ian", "ese", "ish",
];

fn suffix_candidates(surface: &str, lemma: &str) -> PosSet {
    let set = PosSet::default();
    if surface.len() >= 5 && surface.ends_with("ly") && !NON_ADVERB_LY.iter().any(|e| surface.ends_with(e)) {
        return set.with(CoarsePos::Other);
    }
    let inflected = surface != lemma;
    if inflected && surface.ends_with("ing") {
        return set.with(CoarsePos::Verb).with(CoarsePos::Noun);
    }
    if inflected && surface.ends_with("ed") {
        return set.with(CoarsePos::Verb).with(CoarsePos::Adjective);
    }
    if VERB_ENDINGS.iter().any(|e| lemma.ends_with(e)) {
        return set.with(CoarsePos::Verb);
    }
    if NOUN_ENDINGS.iter().any(|e| lemma.ends_with(e)) {
        return set.with(CoarsePos::Noun);
    }
    if ADJ_ENDINGS.iter().any(|e| lemma.ends_with(e)) {
        return set.with(CoarsePos::Adjective);
    }
    set.with(CoarsePos::Noun)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Normalizer;

    fn tags(text: &str) -> Vec<(String, CoarsePos)> {
        let n = Normalizer::default();
        n.analyze(text).into_iter().map(|t| (t.surface, t.coarse_pos)).collect()
    }

    #[test]
    fn worked_title_tags() {
        use CoarsePos::*;
        let got: Vec<_> = tags("Using Bayesian networks to analyze medical data")
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        assert_eq!(got, [Verb, Adjective, Noun, Other, Verb, Adjective, Noun]);
    }

    #[test]
    fn gerund_after_modifier_is_noun() {
        let t = tags("A deep learning approach for predicting structure");
        assert_eq!(t[2], ("learning".into(), CoarsePos::Noun));
        assert_eq!(t[5], ("predicting".into(), CoarsePos::Verb));
    }

    #[test]
    fn ambiguous_defaults_to_noun_unless_after_to() {
        assert_eq!(tags("model selection")[0].1, CoarsePos::Noun);
        assert_eq!(tags("how to model traffic")[2].1, CoarsePos::Verb);
        assert_eq!(tags("the model")[1].1, CoarsePos::Noun);
    }

    #[test]
    fn suffix_fallbacks() {
        assert_eq!(tags("vectorize")[0].1, CoarsePos::Verb);
        assert_eq!(tags("discretization")[0].1, CoarsePos::Noun);
        assert_eq!(tags("rapidly")[0].1, CoarsePos::Other);
        assert_eq!(tags("xylophone")[0].1, CoarsePos::Noun);
    }

    #[test]
    fn lexicon_file_extends_bundled() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("pos.csv");
        std::fs::write(&p, "lemma,pos\nxylophone,verb\n").unwrap();
        let lex = PosLexicon::with_file(&p).unwrap();
        let s = vec!["xylophone".to_string()];
        assert_eq!(lex.tag(&s, &s), [CoarsePos::Verb]);
        let bad = dir.path().join("bad.csv");
        std::fs::write(&bad, "lemma,pos\nfoo,gerund\n").unwrap();
        assert!(PosLexicon::with_file(&bad).is_err());
    }
}
