use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sciai_core::ai::{precision_recall, sample_ids};
use sciai_core::analytics::hit_flags;
use sciai_core::corpus::{CitationGraph, PaperCorpus, PaperRecord};

fn paper(id: String, year: i32, field: &str, references: Vec<String>) -> PaperRecord {
    PaperRecord {
        id,
        year,
        title: "t".into(),
        abstract_text: String::new(),
        discipline: "d".into(),
        field: field.into(),
        doi: None,
        authors: vec![],
        references,
        first_author_last_name: None,
        vn_pairs: None,
    }
}

/// Cells of random size over three fields and five years; every paper cites
/// a random handful of earlier papers, so citation counts collide often.
fn random_corpus(seed: u64, sizes: std::ops::RangeInclusive<usize>) -> PaperCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut papers: Vec<PaperRecord> = Vec::new();
    for year in 2000..2005 {
        for field in ["fa", "fb", "fc"] {
            let n = rng.gen_range(sizes.clone());
            for k in 0..n {
                let refs = if papers.is_empty() {
                    vec![]
                } else {
                    (0..rng.gen_range(0..4))
                        .map(|_| papers[rng.gen_range(0..papers.len())].id.clone())
                        .collect()
                };
                papers.push(paper(format!("{field}-{year}-{k:04}"), year, field, refs));
            }
        }
    }
    PaperCorpus::from_records(papers)
}

/// Top ⌈N/20⌉ of each cell by received citations, ties by id.
fn brute_hits(corpus: &PaperCorpus) -> Vec<bool> {
    let mut received: BTreeMap<&str, usize> = BTreeMap::new();
    for p in corpus.papers() {
        let mut refs: Vec<&String> = p.references.iter().collect();
        refs.sort();
        refs.dedup();
        for r in refs {
            *received.entry(r.as_str()).or_insert(0) += 1;
        }
    }
    // (index, citations, id) per (field, year)
    type Cell<'a> = Vec<(usize, usize, &'a str)>;
    let mut cells: BTreeMap<(&str, i32), Cell> = BTreeMap::new();
    for (i, p) in corpus.papers().iter().enumerate() {
        let c = received.get(p.id.as_str()).copied().unwrap_or(0);
        cells
            .entry((p.field.as_str(), p.year))
            .or_default()
            .push((i, c, p.id.as_str()));
    }
    let mut out = vec![false; corpus.len()];
    for (_, mut v) in cells {
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(b.2)));
        let k = (v.len() as f64 * 0.05).ceil() as usize;
        for (i, _, _) in v.into_iter().take(k) {
            out[i] = true;
        }
    }
    out
}

#[test]
fn hit_flags_match_brute_force() {
    for seed in 0..30 {
        let corpus = random_corpus(seed, 1..=60);
        let graph = CitationGraph::build(&corpus);
        assert_eq!(hit_flags(&corpus, &graph), brute_hits(&corpus), "seed {seed}");
    }
}

#[test]
fn hit_rate_on_uniform_corpus_is_five_percent() {
    let corpus = random_corpus(99, 200..=200);
    let hits = hit_flags(&corpus, &CitationGraph::build(&corpus));
    let rate = hits.iter().filter(|h| **h).count() as f64 / hits.len() as f64;
    assert!((rate - 0.05).abs() <= 0.01, "{rate}");
}

#[test]
fn precision_and_recall_from_labeled_samples() {
    // 100 flagged papers of which 83 are hand-labeled AI, and 100 reference
    // positives of which 88 are flagged
    let mut labels = BTreeMap::new();
    let flagged_sample: Vec<String> = (0..100).map(|i| format!("f{i:03}")).collect();
    for (i, id) in flagged_sample.iter().enumerate() {
        labels.insert(id.clone(), i < 83);
    }
    let positive_sample: Vec<String> = (0..100).map(|i| format!("r{i:03}")).collect();
    for id in &positive_sample {
        labels.insert(id.clone(), true);
    }
    let flagged = |id: &str| id.starts_with('f') || id < "r088";
    let p = precision_recall(&flagged_sample, flagged, &labels).unwrap();
    let r = precision_recall(&positive_sample, flagged, &labels).unwrap();
    assert_eq!(p.precision(), Some(0.83));
    assert_eq!(r.recall(), Some(0.88));
    assert!(precision_recall(&["zzz".to_string()], flagged, &labels).is_err());
}

#[test]
fn sampling_is_seeded_and_order_free() {
    let ids: Vec<String> = (0..500).map(|i| format!("p{i}")).collect();
    let mut rev = ids.clone();
    rev.reverse();
    assert_eq!(sample_ids(&ids, 100, 3), sample_ids(&rev, 100, 3));
    assert_ne!(sample_ids(&ids, 100, 3), sample_ids(&ids, 100, 4));
    assert_eq!(sample_ids(&ids[..10], 100, 3).len(), 10);
}
