//! AI labels for papers and patents, the AI n-gram lexicon, and the
//! precision/recall harness.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::corpus::authors::keyed_rng;
use crate::corpus::{PaperCorpus, PatentRecord, Taxonomy};
use crate::error::{Error, Result};
use crate::tasks::read_csv_rows;
use crate::text::{NGram, Normalizer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AiMode {
    FiveFields,
    Top20Fields,
    External,
}

impl AiMode {
    pub fn name(self) -> &'static str {
        match self {
            AiMode::FiveFields => "five_fields",
            AiMode::Top20Fields => "top20_fields",
            AiMode::External => "external",
        }
    }
}

impl FromStr for AiMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "five_fields" => Ok(AiMode::FiveFields),
            "top20_fields" => Ok(AiMode::Top20Fields),
            "external" => Ok(AiMode::External),
            other => Err(Error::Config(format!("unknown AI definition mode `{other}`"))),
        }
    }
}

impl fmt::Display for AiMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ids flagged as AI under one named definition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AiLabelSet {
    pub definition: String,
    pub ids: BTreeSet<String>,
    pub note: String,
}

impl AiLabelSet {
    pub fn contains(&self, id: &str) -> bool {
        self.ids.contains(id)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Per-paper flags aligned with the corpus order.
    pub fn flags(&self, corpus: &PaperCorpus) -> Vec<bool> {
        corpus.papers().iter().map(|p| self.contains(&p.id)).collect()
    }
}

/// Reads one id per line; blank lines and `#` comments are skipped.
pub fn read_id_list(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect())
}

pub fn label_ai_papers(
    corpus: &PaperCorpus,
    taxonomy: &Taxonomy,
    mode: AiMode,
    external_ids: Option<&[String]>,
) -> Result<AiLabelSet> {
    let by_fields = |fields: &BTreeSet<String>| -> BTreeSet<String> {
        corpus
            .papers()
            .iter()
            .filter(|p| fields.contains(&p.field))
            .map(|p| p.id.clone())
            .collect()
    };
    let (ids, note) = match mode {
        AiMode::FiveFields => (
            by_fields(&taxonomy.ai_fields),
            format!("field in {} designated AI fields", taxonomy.ai_fields.len()),
        ),
        AiMode::Top20Fields => {
            if taxonomy.extended_ai_fields.is_empty() {
                return Err(Error::Config(
                    "top20_fields mode needs `extended_ai_fields` in the taxonomy".into(),
                ));
            }
            (
                by_fields(&taxonomy.extended_ai_fields),
                format!("field in {} extended AI fields", taxonomy.extended_ai_fields.len()),
            )
        }
        AiMode::External => {
            let list =
                external_ids.ok_or_else(|| Error::Config("external mode needs an external AI label file".into()))?;
            let present: BTreeSet<String> = list
                .iter()
                .filter(|id| corpus.index_of(id).is_some())
                .cloned()
                .collect();
            let missing = list.iter().collect::<BTreeSet<_>>().len() - present.len();
            if missing > 0 {
                log::warn!("{missing} external AI ids are not in the paper corpus");
            }
            (present, format!("external list; {missing} ids not in corpus"))
        }
    };
    Ok(AiLabelSet {
        definition: mode.name().to_string(),
        ids,
        note,
    })
}

/// Normalized key phrases for patent title matching.
pub fn normalize_keyphrases(norm: &Normalizer, phrases: &[String]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = phrases
        .iter()
        .map(|p| norm.lemmas(p))
        .filter(|l| !l.is_empty())
        .collect();
    out.sort();
    out.dedup();
    out
}

fn contains_seq(hay: &[String], needle: &[String]) -> bool {
    !needle.is_empty() && hay.windows(needle.len()).any(|w| w == needle)
}

/// A patent is AI when a CPC code starts with a listed code or its
/// lemmatized title contains a listed phrase.
pub fn label_ai_patents(
    patents: &[PatentRecord],
    cpc_codes: &[String],
    keyphrases: &[Vec<String>],
    norm: &Normalizer,
) -> AiLabelSet {
    let codes: Vec<String> = cpc_codes
        .iter()
        .map(|c| c.trim().to_uppercase().replace(' ', ""))
        .filter(|c| !c.is_empty())
        .collect();
    if codes.is_empty() && keyphrases.is_empty() {
        log::warn!("no AI CPC codes or key phrases configured; no patent is AI");
    }
    let ids = patents
        .iter()
        .filter(|p| {
            let by_code = p.cpc_codes.iter().any(|c| {
                let c = c.trim().to_uppercase().replace(' ', "");
                codes.iter().any(|k| c.starts_with(k.as_str()))
            });
            by_code || {
                let lemmas = norm.lemmas(&p.title);
                keyphrases.iter().any(|k| contains_seq(&lemmas, k))
            }
        })
        .map(|p| p.id.clone())
        .collect();
    AiLabelSet {
        definition: "patent_cpc_or_phrase".into(),
        ids,
        note: format!("{} codes, {} phrases", codes.len(), keyphrases.len()),
    }
}

/// AI n-grams with their occurrence counts in the AI corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AiNgramLexicon {
    pub terms: BTreeMap<NGram, u64>,
}

impl AiNgramLexicon {
    pub fn contains(&self, g: &NGram) -> bool {
        self.terms.contains_key(g)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &NGram> {
        self.terms.keys()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = NGram>) -> Self {
        AiNgramLexicon {
            terms: terms.into_iter().map(|g| (g, 0)).collect(),
        }
    }
}

/// Lexicon = n-grams seen in AI papers ∩ concept terms − blocklist.
///
/// `ai_paper_ngrams` holds the title+abstract n-grams of each AI paper.
pub fn derive_ai_ngram_lexicon<'a>(
    ai_paper_ngrams: impl IntoIterator<Item = &'a [NGram]>,
    taxonomy: &Taxonomy,
) -> AiNgramLexicon {
    let mut terms: BTreeMap<NGram, u64> = BTreeMap::new();
    for doc in ai_paper_ngrams {
        for g in doc {
            if taxonomy.ai_concept_terms.contains(g) && !taxonomy.ngram_blocklist.contains(g) {
                *terms.entry(g.clone()).or_insert(0) += 1;
            }
        }
    }
    if terms.is_empty() {
        log::warn!("AI n-gram lexicon is empty; direct scores will be zero or undefined");
    }
    AiNgramLexicon { terms }
}

/// A paper is AI-using when any of its n-grams is in the lexicon.
pub fn mark_ai_using(paper_ngrams: &[Vec<NGram>], lexicon: &AiNgramLexicon) -> Vec<bool> {
    paper_ngrams
        .iter()
        .map(|gs| gs.iter().any(|g| lexicon.contains(g)))
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn precision(&self) -> Option<f64> {
        let d = self.tp + self.fp;
        (d > 0).then(|| self.tp as f64 / d as f64)
    }

    pub fn recall(&self) -> Option<f64> {
        let d = self.tp + self.fn_;
        (d > 0).then(|| self.tp as f64 / d as f64)
    }
}

/// Reads `id,is_ai` where `is_ai` is one of 1/0, true/false, yes/no.
pub fn read_manual_labels(path: &Path) -> Result<BTreeMap<String, bool>> {
    let mut out = BTreeMap::new();
    for row in read_csv_rows(path, &["id", "is_ai"])? {
        let v = match row[1].trim().to_lowercase().as_str() {
            "1" | "true" | "yes" => true,
            "0" | "false" | "no" => false,
            other => {
                return Err(Error::Data(format!(
                    "{}: `{other}` is not a boolean label",
                    path.display()
                )))
            }
        };
        out.insert(row[0].clone(), v);
    }
    Ok(out)
}

/// Confusion counts of `flagged` against manual labels on a sample.
pub fn precision_recall(
    sample: &[String],
    flagged: impl Fn(&str) -> bool,
    labels: &BTreeMap<String, bool>,
) -> Result<Confusion> {
    let missing: Vec<&str> = sample
        .iter()
        .filter(|id| !labels.contains_key(id.as_str()))
        .map(String::as_str)
        .collect();
    if !missing.is_empty() {
        return Err(Error::Data(format!(
            "no manual label for sampled ids: {}",
            missing.join(", ")
        )));
    }
    let mut c = Confusion::default();
    for id in sample {
        match (flagged(id), labels[id.as_str()]) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

/// Seeded sample of `n` ids without replacement, returned in sampled order.
pub fn sample_ids(ids: &[String], n: usize, seed: u64) -> Vec<String> {
    let mut sorted: Vec<String> = ids.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut rng = keyed_rng(seed, "label-sample");
    sorted.shuffle(&mut rng);
    sorted.truncate(n);
    sorted
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ng(s: &str) -> NGram {
        NGram::from_normalized(s).unwrap()
    }

    #[test]
    fn patent_rules() {
        let n = Normalizer::default();
        let pats = vec![
            PatentRecord {
                id: "a".into(),
                year: 2000,
                title: "Widget".into(),
                cpc_codes: vec!["G06N3/08".into()],
                vn_pairs: None,
            },
            PatentRecord {
                id: "b".into(),
                year: 2000,
                title: "Neural network accelerator".into(),
                cpc_codes: vec!["H01L".into()],
                vn_pairs: None,
            },
            PatentRecord {
                id: "c".into(),
                year: 2000,
                title: "Network of neural cells".into(),
                cpc_codes: vec!["A61B".into()],
                vn_pairs: None,
            },
        ];
        let phrases = normalize_keyphrases(&n, &["neural networks".into()]);
        let l = label_ai_patents(&pats, &["G06N".into()], &phrases, &n);
        assert_eq!(l.ids.iter().map(String::as_str).collect::<Vec<_>>(), ["a", "b"]);
        assert!(label_ai_patents(&pats, &[], &[], &n).is_empty());
    }

    #[test]
    fn marking_is_monotone_in_lexicon() {
        let docs = vec![vec![ng("deep learn")], vec![ng("patient cohort")], vec![]];
        let small = AiNgramLexicon::from_terms([ng("deep learn")]);
        let big = AiNgramLexicon::from_terms([ng("deep learn"), ng("patient cohort")]);
        let a = mark_ai_using(&docs, &small);
        let b = mark_ai_using(&docs, &big);
        assert_eq!(a, [true, false, false]);
        assert!(a.iter().zip(&b).all(|(x, y)| !x || *y));
    }

    #[test]
    fn two_sample_protocol() {
        let mut labels = BTreeMap::new();
        let flagged: Vec<String> = (0..100).map(|i| format!("f{i:03}")).collect();
        for (i, id) in flagged.iter().enumerate() {
            labels.insert(id.clone(), i < 83);
        }
        let c = precision_recall(&flagged, |_| true, &labels).unwrap();
        assert_eq!(c.precision(), Some(0.83));

        let refs: Vec<String> = (0..100).map(|i| format!("r{i:03}")).collect();
        for id in &refs {
            labels.insert(id.clone(), true);
        }
        let covered = |id: &str| id[1..].parse::<usize>().unwrap() < 88;
        let c = precision_recall(&refs, covered, &labels).unwrap();
        assert_eq!(c.recall(), Some(0.88));

        let err = precision_recall(&["zz".into()], |_| true, &labels).unwrap_err();
        assert!(err.to_string().contains("zz"));
    }

    #[test]
    fn sampler_is_seeded() {
        let ids: Vec<String> = (0..50).map(|i| i.to_string()).collect();
        assert_eq!(sample_ids(&ids, 10, 3), sample_ids(&ids, 10, 3));
        assert_ne!(sample_ids(&ids, 10, 3), sample_ids(&ids, 10, 4));
        assert_eq!(sample_ids(&ids, 100, 3).len(), 50);
    }
}
