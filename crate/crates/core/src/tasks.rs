//! Verb–noun pair extraction from titles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::counts::Counts;
use crate::error::{Error, Result};
use crate::text::{CoarsePos, Normalizer, Token};

pub type TaskCounts = Counts<VerbNounPair>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VerbNounPair {
    pub verb: String,
    pub noun: String,
}

impl VerbNounPair {
    pub fn new(verb: impl Into<String>, noun: impl Into<String>) -> Self {
        VerbNounPair {
            verb: verb.into(),
            noun: noun.into(),
        }
    }
}

impl fmt::Display for VerbNounPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.verb, self.noun)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractOptions {
    pub max_gap: usize,
    pub include_prep_objects: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            max_gap: 4,
            include_prep_objects: false,
        }
    }
}

const PREP_MARKERS: &[&str] = &["of", "to", "for"];

/// Shallow direct-object rule over a tagged title.
///
/// For every verb, the tokens to its right are scanned while they are
/// determiners, adjectives or nouns (at most `max_gap` of them); the last noun
/// seen is the object.
pub fn extract_from_tokens(tokens: &[Token], opts: &ExtractOptions) -> Vec<VerbNounPair> {
    let mut out = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if t.coarse_pos != CoarsePos::Verb {
            continue;
        }
        let mut start = i + 1;
        if let Some(next) = tokens.get(start) {
            if PREP_MARKERS.contains(&next.lemma.as_str()) {
                if !opts.include_prep_objects {
                    continue;
                }
                start += 1;
            }
        }
        let mut head: Option<&str> = None;
        for tok in tokens.iter().skip(start).take(opts.max_gap) {
            match tok.coarse_pos {
                CoarsePos::Noun => head = Some(&tok.lemma),
                CoarsePos::Determiner | CoarsePos::Adjective => {}
                CoarsePos::Verb | CoarsePos::Other => break,
            }
        }
        if let Some(noun) = head {
            out.push(VerbNounPair::new(t.lemma.clone(), noun));
        }
    }
    out
}

pub fn extract_verb_noun_pairs(norm: &Normalizer, title: &str, opts: &ExtractOptions) -> Vec<VerbNounPair> {
    extract_from_tokens(&norm.analyze(title), opts)
}

/// Curated exclusions and the optional synonym table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaskFilter {
    verbs: BTreeSet<String>,
    nouns: BTreeSet<String>,
    pairs: BTreeSet<VerbNounPair>,
    synonyms: BTreeMap<String, String>,
}

impl TaskFilter {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Any path may be `None`; entries are lemmatized on load.
    pub fn load(
        norm: &Normalizer,
        verbs: Option<&Path>,
        nouns: Option<&Path>,
        pairs: Option<&Path>,
        synonyms: Option<&Path>,
    ) -> Result<Self> {
        let mut f = TaskFilter::default();
        if let Some(p) = synonyms {
            for row in read_csv_rows(p, &["lemma", "canonical"])? {
                let from = norm.lemmatizer.lemmatize(&row[0]);
                let to = norm.lemmatizer.lemmatize(&row[1]);
                if !from.is_empty() && !to.is_empty() {
                    f.synonyms.insert(from, to);
                }
            }
        }
        if let Some(p) = verbs {
            for w in read_word_list(p)? {
                let l = f.canon(&norm.lemmatizer.lemmatize(&w)).to_string();
                f.verbs.insert(l);
            }
        }
        if let Some(p) = nouns {
            for w in read_word_list(p)? {
                let l = f.canon(&norm.lemmatizer.lemmatize(&w)).to_string();
                f.nouns.insert(l);
            }
        }
        if let Some(p) = pairs {
            for row in read_csv_rows(p, &["verb", "noun"])? {
                let v = f.canon(&norm.lemmatizer.lemmatize(&row[0])).to_string();
                let n = f.canon(&norm.lemmatizer.lemmatize(&row[1])).to_string();
                f.pairs.insert(VerbNounPair::new(v, n));
            }
        }
        Ok(f)
    }

    pub fn block_verb(&mut self, verb: &str) {
        self.verbs.insert(verb.to_string());
    }

    pub fn block_noun(&mut self, noun: &str) {
        self.nouns.insert(noun.to_string());
    }

    pub fn block_pair(&mut self, pair: VerbNounPair) {
        self.pairs.insert(pair);
    }

    pub fn add_synonym(&mut self, lemma: &str, canonical: &str) {
        self.synonyms.insert(lemma.to_string(), canonical.to_string());
    }

    fn canon<'a>(&'a self, lemma: &'a str) -> &'a str {
        self.synonyms.get(lemma).map_or(lemma, |s| s.as_str())
    }

    /// Canonicalizes a pair and drops it if any blocklist matches.
    pub fn apply(&self, pair: &VerbNounPair) -> Option<VerbNounPair> {
        let p = VerbNounPair::new(self.canon(&pair.verb), self.canon(&pair.noun));
        if self.verbs.contains(&p.verb) || self.nouns.contains(&p.noun) || self.pairs.contains(&p) {
            None
        } else {
            Some(p)
        }
    }
}

/// Pairs of one title after filtering. When `preparsed` is given it replaces
/// rule extraction; its entries are lemmatized like extracted ones.
pub fn document_pairs(
    norm: &Normalizer,
    title: &str,
    preparsed: Option<&[(String, String)]>,
    opts: &ExtractOptions,
    filter: &TaskFilter,
) -> Vec<VerbNounPair> {
    let raw: Vec<VerbNounPair> = match preparsed {
        Some(pp) => pp
            .iter()
            .map(|(v, n)| VerbNounPair::new(norm.lemmatizer.lemmatize(v), norm.lemmatizer.lemmatize(n)))
            .filter(|p| !p.verb.is_empty() && !p.noun.is_empty())
            .collect(),
        None => extract_verb_noun_pairs(norm, title, opts),
    };
    raw.iter().filter_map(|p| filter.apply(p)).collect()
}

/// Counts filtered pairs over a set of titles (one document per title).
pub fn count_pairs<'a>(
    norm: &Normalizer,
    titles: impl IntoIterator<Item = &'a str>,
    opts: &ExtractOptions,
    filter: &TaskFilter,
) -> TaskCounts {
    let mut c = TaskCounts::new();
    for t in titles {
        let pairs = document_pairs(norm, t, None, opts, filter);
        c.add_doc(&pairs, false);
    }
    c
}

fn read_word_list(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect())
}

pub(crate) fn read_csv_rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<String>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let got: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if got.len() < header.len() || got.iter().zip(header).any(|(a, b)| a != b) {
        return Err(Error::Data(format!(
            "{}: expected header `{}`, found `{}`",
            path.display(),
            header.join(","),
            got.join(",")
        )));
    }
    let mut rows = Vec::new();
    for r in rdr.records() {
        let r = r?;
        rows.push(r.iter().map(str::to_string).collect());
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(title: &str) -> Vec<(String, String)> {
        let n = Normalizer::default();
        extract_verb_noun_pairs(&n, title, &ExtractOptions::default())
            .into_iter()
            .map(|p| (p.verb, p.noun))
            .collect()
    }

    fn p(v: &str, n: &str) -> (String, String) {
        (v.into(), n.into())
    }

    #[test]
    fn worked_examples() {
        assert_eq!(
            pairs("Using Bayesian networks to analyze medical data"),
            [p("use", "network"), p("analyze", "data")]
        );
        assert_eq!(
            pairs("Learning representations of graphs"),
            [p("learn", "representation")]
        );
        assert!(pairs("").is_empty());
        assert_eq!(pairs("Predicting protein structure"), [p("predict", "structure")]);
    }

    #[test]
    fn prepositional_objects_are_optional() {
        let n = Normalizer::default();
        let title = "Searching for optimal designs";
        assert!(extract_verb_noun_pairs(&n, title, &ExtractOptions::default()).is_empty());
        let opts = ExtractOptions {
            include_prep_objects: true,
            ..Default::default()
        };
        assert_eq!(
            extract_verb_noun_pairs(&n, title, &opts),
            [VerbNounPair::new("search", "design")]
        );
    }

    #[test]
    fn window_stops_at_punctuation_and_gap() {
        assert!(pairs("Detecting: anomalies").is_empty());
        let n = Normalizer::default();
        let opts = ExtractOptions {
            max_gap: 1,
            ..Default::default()
        };
        assert!(extract_verb_noun_pairs(&n, "Detecting rare anomalies", &opts).is_empty());
        assert_eq!(pairs("Detecting rare anomalies"), [p("detect", "anomaly")]);
    }

    #[test]
    fn filters_and_synonyms() {
        let n = Normalizer::default();
        let mut f = TaskFilter::empty();
        f.block_verb("be");
        f.add_synonym("forecast", "predict");
        assert_eq!(f.apply(&VerbNounPair::new("be", "thing")), None);
        assert_eq!(
            f.apply(&VerbNounPair::new("forecast", "demand")),
            Some(VerbNounPair::new("predict", "demand"))
        );
        let c = count_pairs(&n, ["Predicting protein structure"; 3], &ExtractOptions::default(), &f);
        assert_eq!(c.get(&VerbNounPair::new("predict", "structure")), 3);
        assert_eq!(c.doc_count(), 3);
    }

    #[test]
    fn preparsed_mode_agrees_with_rule_mode() {
        let n = Normalizer::default();
        let title = "Using Bayesian networks to analyze medical data";
        let given = vec![
            ("using".to_string(), "networks".to_string()),
            ("analyze".to_string(), "data".to_string()),
        ];
        let opts = ExtractOptions::default();
        let f = TaskFilter::empty();
        assert_eq!(
            document_pairs(&n, title, Some(&given), &opts, &f),
            document_pairs(&n, title, None, &opts, &f)
        );
    }

    #[test]
    fn filter_files_load() {
        let dir = tempfile::tempdir().unwrap();
        let v = dir.path().join("verbs.txt");
        let nn = dir.path().join("nouns.txt");
        let pp = dir.path().join("pairs.csv");
        let s = dir.path().join("syn.csv");
        std::fs::write(&v, "# verbs\nbeing\n").unwrap();
        std::fs::write(&nn, "things\n").unwrap();
        std::fs::write(&pp, "verb,noun\nusing,methods\n").unwrap();
        std::fs::write(&s, "lemma,canonical\nforecasting,predict\n").unwrap();
        let n = Normalizer::default();
        let f = TaskFilter::load(&n, Some(&v), Some(&nn), Some(&pp), Some(&s)).unwrap();
        assert!(f.apply(&VerbNounPair::new("be", "x")).is_none());
        assert!(f.apply(&VerbNounPair::new("x", "thing")).is_none());
        assert!(f.apply(&VerbNounPair::new("use", "method")).is_none());
        assert_eq!(f.apply(&VerbNounPair::new("forecast", "y")).unwrap().verb, "predict");
        std::fs::write(&pp, "a,b\nx,y\n").unwrap();
        assert!(TaskFilter::load(&n, None, None, Some(&pp), None).is_err());
    }
}
