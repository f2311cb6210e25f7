//! Synthetic workloads shared by the benchmarks in `benches/`.

use sciai_core::ai::{derive_ai_ngram_lexicon, label_ai_papers, AiMode, AiNgramLexicon};
use sciai_core::corpus::{PaperCorpus, Taxonomy};
use sciai_core::scoring::ScoringInput;
use sciai_core::synth::{generate, SynthSpec};
use sciai_core::tasks::{ExtractOptions, TaskFilter};
use sciai_core::text::{NGram, Normalizer};

pub struct Workload {
    pub norm: Normalizer,
    pub corpus: PaperCorpus,
    pub input: ScoringInput,
    pub lexicon: AiNgramLexicon,
}

impl Workload {
    pub fn years(&self) -> Vec<i32> {
        let lo = self.corpus.papers().iter().map(|p| p.year).min().unwrap_or(0);
        let hi = self.corpus.papers().iter().map(|p| p.year).max().unwrap_or(0);
        (lo + 1..=hi).collect()
    }
}

/// The synthetic corpus at `papers_per_cell`, labeled and prepared for scoring.
pub fn workload(papers_per_cell: usize) -> Workload {
    let synth = generate(&SynthSpec {
        papers_per_cell,
        syllabi: 0,
        ..SynthSpec::default()
    });
    let norm = Normalizer::default();
    let taxonomy = Taxonomy::from_json(&synth.taxonomy_json, &norm).unwrap();
    let corpus = PaperCorpus::from_records(synth.papers);
    let ai_flags = label_ai_papers(&corpus, &taxonomy, AiMode::FiveFields, None)
        .unwrap()
        .flags(&corpus);
    let ngrams: Vec<Vec<NGram>> = corpus
        .papers()
        .iter()
        .map(|p| norm.ngrams_of([p.title.as_str(), p.abstract_text.as_str()]))
        .collect();
    let patents = synth.patents;
    let input = ScoringInput::prepare(
        &corpus,
        &taxonomy,
        &ai_flags,
        &ngrams,
        &patents.iter().collect::<Vec<_>>(),
        &norm,
        &ExtractOptions::default(),
        &TaskFilter::empty(),
    );
    let lexicon = derive_ai_ngram_lexicon(
        ngrams
            .iter()
            .zip(&ai_flags)
            .filter(|(_, a)| **a)
            .map(|(g, _)| g.as_slice()),
        &taxonomy,
    );
    Workload {
        norm,
        corpus,
        input,
        lexicon,
    }
}
