//! Randomized mini-corpora and brute-force recomputations that share no code
//! with the scoring engine beyond the public record types.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sciai_core::ai::AiNgramLexicon;
use sciai_core::corpus::{PaperCorpus, PaperRecord, PatentRecord, Taxonomy};
use sciai_core::scoring::{ScoreEngine, ScoringInput, ScoringSettings};
use sciai_core::tasks::{ExtractOptions, TaskFilter};
use sciai_core::text::{NGram, Normalizer};

/// Words that are their own lemma, alphabetic and not stopwords.
pub const WORDS: [&str; 10] = [
    "kernel", "graph", "quantum", "tensor", "neural", "lattice", "spectral", "sparse", "random", "protein",
];

pub const VERBS: [&str; 4] = ["detect", "predict", "classify", "segment"];
pub const NOUNS: [&str; 4] = ["image", "protein", "signal", "network"];

pub const FIELDS: [(&str, &str); 4] = [("f0", "alpha"), ("f1", "alpha"), ("f2", "beta"), ("f3", "beta")];
pub const YEARS: (i32, i32) = (2000, 2004);

pub fn taxonomy(norm: &Normalizer) -> Taxonomy {
    let fields: Vec<String> = FIELDS
        .iter()
        .map(|(f, d)| format!(r#"{{"id": "{f}", "parent": "{d}"}}"#))
        .collect();
    let json = format!(
        r#"{{"disciplines": ["alpha", "beta"], "fields": [{}], "ai_fields": ["f0"], "cs_discipline": "alpha"}}"#,
        fields.join(", ")
    );
    Taxonomy::from_json(&json, norm).unwrap()
}

pub struct MiniCorpus {
    pub papers: Vec<PaperRecord>,
    pub ai: BTreeMap<String, bool>,
    pub patents: Vec<PatentRecord>,
    /// lexicon entries as word sequences
    pub lexicon: Vec<Vec<&'static str>>,
}

fn words(rng: &mut ChaCha8Rng, n: usize) -> String {
    let mut out = String::new();
    for i in 0..n {
        if i > 0 {
            // an occasional comma splits the text into separate windows
            out.push_str(if rng.gen_bool(0.1) { ", " } else { " " });
        }
        out.push_str(WORDS.choose(rng).unwrap());
    }
    out
}

fn pairs(rng: &mut ChaCha8Rng) -> Vec<(String, String)> {
    (0..rng.gen_range(0..3))
        .map(|_| {
            (
                VERBS.choose(rng).unwrap().to_string(),
                NOUNS.choose(rng).unwrap().to_string(),
            )
        })
        .collect()
}

pub fn mini_corpus(seed: u64, max_papers: usize, max_lexicon: usize) -> MiniCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_papers);
    let mut papers = Vec::new();
    let mut ai = BTreeMap::new();
    for i in 0..n {
        let (field, discipline) = FIELDS[rng.gen_range(0..FIELDS.len())];
        let id = format!("p{i:03}");
        ai.insert(id.clone(), rng.gen_bool(0.4));
        let title_len = rng.gen_range(1..8);
        let abstract_len = rng.gen_range(0..16);
        papers.push(PaperRecord {
            id,
            year: rng.gen_range(YEARS.0..=YEARS.1),
            title: words(&mut rng, title_len),
            abstract_text: words(&mut rng, abstract_len),
            discipline: discipline.into(),
            field: field.into(),
            doi: None,
            authors: vec![],
            references: vec![],
            first_author_last_name: None,
            vn_pairs: Some(pairs(&mut rng)),
        });
    }
    let patents = (0..rng.gen_range(0..6))
        .map(|i| PatentRecord {
            id: format!("US{i}"),
            year: rng.gen_range(YEARS.0..=YEARS.1),
            title: String::new(),
            cpc_codes: vec![],
            vn_pairs: Some(pairs(&mut rng)),
        })
        .collect();
    let lexicon = (0..rng.gen_range(1..=max_lexicon))
        .map(|_| {
            let len = rng.gen_range(2..=3);
            (0..len).map(|_| *WORDS.choose(&mut rng).unwrap()).collect()
        })
        .collect();
    MiniCorpus {
        papers,
        ai,
        patents,
        lexicon,
    }
}

pub struct Prepared {
    pub corpus: PaperCorpus,
    pub input: ScoringInput,
    pub lexicon: AiNgramLexicon,
}

impl MiniCorpus {
    pub fn prepare(&self, norm: &Normalizer) -> Prepared {
        let tax = taxonomy(norm);
        let corpus = PaperCorpus::from_records(self.papers.clone());
        let flags: Vec<bool> = corpus.papers().iter().map(|p| self.ai[&p.id]).collect();
        let ngrams: Vec<Vec<NGram>> = corpus
            .papers()
            .iter()
            .map(|p| norm.ngrams_of([p.title.as_str(), p.abstract_text.as_str()]))
            .collect();
        let patents: Vec<&PatentRecord> = self.patents.iter().collect();
        let input = ScoringInput::prepare(
            &corpus,
            &tax,
            &flags,
            &ngrams,
            &patents,
            norm,
            &ExtractOptions::default(),
            &TaskFilter::empty(),
        );
        let lexicon = AiNgramLexicon::from_terms(self.lexicon.iter().map(|w| NGram::new(w).unwrap()));
        Prepared { corpus, input, lexicon }
    }
}

impl Prepared {
    pub fn engine(&self, shards: usize) -> ScoreEngine<'_> {
        let settings = ScoringSettings {
            shards,
            ..ScoringSettings::default()
        };
        ScoreEngine::new(&self.input, &self.lexicon, settings)
    }
}

/// Occurrences of the word sequence `g` in `text`, never across a comma.
pub fn count_windows(text: &str, g: &[&str]) -> usize {
    text.split(',')
        .map(|seg| {
            let toks: Vec<&str> = seg.split_whitespace().collect();
            toks.windows(g.len()).filter(|w| *w == g).count()
        })
        .sum()
}

fn in_entity(p: &PaperRecord, entity: &str) -> bool {
    p.field == entity || p.discipline == entity
}

/// Dot-product direct score recomputed from the raw text.
pub fn brute_direct_dot(mc: &MiniCorpus, entity: &str, year: i32) -> Option<f64> {
    let count = |p: &PaperRecord, g: &[&str]| (count_windows(&p.title, g) + count_windows(&p.abstract_text, g)) as f64;
    let ai_docs: Vec<&PaperRecord> = mc.papers.iter().filter(|p| mc.ai[&p.id] && p.year < year).collect();
    let docs: Vec<&PaperRecord> = mc
        .papers
        .iter()
        .filter(|p| in_entity(p, entity) && p.year == year)
        .collect();
    if ai_docs.is_empty() || docs.is_empty() {
        return None;
    }
    let mut lex = mc.lexicon.clone();
    lex.sort();
    lex.dedup();
    let mut total = 0.0;
    for g in &lex {
        let a: f64 = ai_docs.iter().map(|p| count(p, g)).sum::<f64>() / ai_docs.len() as f64;
        let b: f64 = docs.iter().map(|p| count(p, g)).sum::<f64>() / docs.len() as f64;
        total += a * b;
    }
    Some(total)
}

type Pair = (String, String);

fn unit(w: BTreeMap<Pair, f64>) -> BTreeMap<Pair, f64> {
    let s: f64 = w.values().sum();
    if s <= 0.0 {
        return BTreeMap::new();
    }
    w.into_iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|(k, v)| (k, v / s))
        .collect()
}

/// dot_norm potential score recomputed with a literal tf-idf over one document
/// per field active in `year` plus one merged AI document.
pub fn brute_potential_dot_norm(mc: &MiniCorpus, entity: &str, year: i32) -> Option<f64> {
    let tally = |items: &mut dyn Iterator<Item = &Vec<(String, String)>>| {
        let mut m: BTreeMap<Pair, f64> = BTreeMap::new();
        for ps in items {
            for p in ps {
                *m.entry(p.clone()).or_insert(0.0) += 1.0;
            }
        }
        m
    };
    let ai_papers: Vec<&PaperRecord> = mc.papers.iter().filter(|p| mc.ai[&p.id] && p.year < year).collect();
    if ai_papers.is_empty() || !mc.papers.iter().any(|p| in_entity(p, entity) && p.year == year) {
        return None;
    }
    let paper_side = tally(&mut ai_papers.iter().map(|p| p.vn_pairs.as_ref().unwrap()));
    let patents: Vec<&PatentRecord> = mc.patents.iter().filter(|p| p.year < year).collect();
    let patent_side = tally(&mut patents.iter().map(|p| p.vn_pairs.as_ref().unwrap()));

    let mut field_docs: Vec<BTreeMap<Pair, f64>> = Vec::new();
    for (f, _) in FIELDS {
        let ps: Vec<&PaperRecord> = mc.papers.iter().filter(|p| p.field == f && p.year == year).collect();
        if !ps.is_empty() {
            field_docs.push(tally(&mut ps.iter().map(|p| p.vn_pairs.as_ref().unwrap())));
        }
    }
    let mut ai_doc = paper_side.clone();
    for (k, v) in &patent_side {
        *ai_doc.entry(k.clone()).or_insert(0.0) += v;
    }
    let n_docs = field_docs.len() as f64 + 1.0;
    let idf = |k: &Pair| {
        let df = field_docs.iter().filter(|d| d.get(k).is_some_and(|c| *c > 0.0)).count()
            + usize::from(ai_doc.get(k).is_some_and(|c| *c > 0.0));
        ((n_docs / (1.0 + df as f64)).ln() + 1.0).max(0.0)
    };
    let weigh = |m: &BTreeMap<Pair, f64>| unit(m.iter().map(|(k, c)| (k.clone(), c * idf(k))).collect());

    let paper_w = weigh(&paper_side);
    let patent_w = weigh(&patent_side);
    // a side without any pair has no distribution to average in
    let cap = if patent_w.is_empty() {
        paper_w
    } else if paper_w.is_empty() {
        patent_w
    } else {
        let mut keys: Vec<&Pair> = paper_w.keys().chain(patent_w.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| {
                let v = (paper_w.get(k).unwrap_or(&0.0) + patent_w.get(k).unwrap_or(&0.0)) / 2.0;
                (k.clone(), v)
            })
            .filter(|(_, v)| *v > 0.0)
            .collect()
    };
    let task_counts = tally(
        &mut mc
            .papers
            .iter()
            .filter(|p| in_entity(p, entity) && p.year == year)
            .map(|p| p.vn_pairs.as_ref().unwrap()),
    );
    let task = weigh(&task_counts);
    let den: f64 = cap.values().map(|v| v * v).sum();
    if den <= 0.0 {
        return None;
    }
    let num: f64 = task.iter().map(|(k, v)| v * cap.get(k).unwrap_or(&0.0)).sum();
    Some(num / den)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
