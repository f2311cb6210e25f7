mod common;

use common::*;
use sciai_core::scoring::{
    decompose_all, DirectMeasure, Level, Measure, PotentialMeasure, ScoreEngine, ScoringSettings,
};
use sciai_core::text::Normalizer;

#[test]
fn vocabulary_is_lemma_invariant() {
    let norm = Normalizer::default();
    for w in WORDS.iter().chain(&VERBS).chain(&NOUNS) {
        assert_eq!(norm.lemmas(w), vec![w.to_string()], "{w}");
        assert!(!norm.stopwords.contains(w), "{w}");
    }
}

fn entities() -> Vec<(Level, &'static str)> {
    let mut v: Vec<(Level, &str)> = FIELDS.iter().map(|(f, _)| (Level::Field, *f)).collect();
    v.push((Level::Discipline, "alpha"));
    v.push((Level::Discipline, "beta"));
    v
}

fn idx(input: &sciai_core::scoring::ScoringInput, level: Level, e: &str) -> usize {
    input.entities(level).iter().position(|x| x == e).unwrap()
}

#[test]
fn direct_dot_matches_brute_force_on_200_corpora() {
    let norm = Normalizer::default();
    let t0 = std::time::Instant::now();
    let mut compared = 0;
    for seed in 0..200 {
        let mc = mini_corpus(seed, 50, 10);
        let prep = mc.prepare(&norm);
        let engine = prep.engine(1 + (seed as usize % 3));
        for year in YEARS.0..=YEARS.1 {
            let cells = engine.score_year(year, year);
            for (level, e) in entities() {
                let got = cells[&(level, idx(&prep.input, level, e))].get(Measure::Direct(DirectMeasure::Dot));
                let want = brute_direct_dot(&mc, e, year);
                match (got, want) {
                    (Some(g), Some(w)) => {
                        assert!(close(g, w, 1e-12), "seed {seed} {e} {year}: {g} vs {w}");
                        compared += 1;
                    }
                    (None, None) => {}
                    other => panic!("seed {seed} {e} {year}: null mismatch {other:?}"),
                }
            }
        }
    }
    assert!(compared > 1000, "only {compared} defined cells");
    assert!(t0.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn potential_dot_norm_matches_literal_tfidf() {
    let norm = Normalizer::default();
    for seed in 0..100 {
        let mc = mini_corpus(1000 + seed, 40, 5);
        let prep = mc.prepare(&norm);
        let engine = prep.engine(2);
        for year in YEARS.0..=YEARS.1 {
            let cells = engine.score_year(year, year);
            for (level, e) in entities() {
                let got =
                    cells[&(level, idx(&prep.input, level, e))].get(Measure::Potential(PotentialMeasure::DotNorm));
                let want = brute_potential_dot_norm(&mc, e, year);
                match (got, want) {
                    (Some(g), Some(w)) => assert!(close(g, w, 1e-12), "seed {seed} {e} {year}: {g} vs {w}"),
                    (None, None) => {}
                    other => panic!("seed {seed} {e} {year}: null mismatch {other:?}"),
                }
            }
        }
    }
}

#[test]
fn shard_count_does_not_change_scores() {
    let norm = Normalizer::default();
    for seed in 0..20 {
        let mc = mini_corpus(5000 + seed, 50, 10);
        let prep = mc.prepare(&norm);
        let years: Vec<i32> = (YEARS.0..=YEARS.1).collect();
        let one = prep.engine(1).score_years(&years);
        for shards in [2, 3, 8] {
            assert_eq!(prep.engine(shards).score_years(&years), one);
        }
    }
}

#[test]
fn decomposition_sums_to_live_score() {
    let norm = Normalizer::default();
    let (t1, t2) = (2002, 2004);
    for seed in 0..100 {
        let mc = mini_corpus(2000 + seed, 50, 10);
        let prep = mc.prepare(&norm);
        let engine = prep.engine(1);
        let live = engine.score_year(t2, t2);
        for m in [
            Measure::Direct(DirectMeasure::Dot),
            Measure::Potential(PotentialMeasure::DotNorm),
        ] {
            let (decs, _) = decompose_all(&engine, &prep.input, Level::Discipline, m, t1, t2).unwrap();
            for d in decs {
                let s = live[&(Level::Discipline, idx(&prep.input, Level::Discipline, &d.entity))]
                    .get(m)
                    .unwrap();
                assert!((d.x + d.y + d.z - s).abs() <= 1e-12, "seed {seed}: {d:?} vs {s}");
            }
        }
    }
}

#[test]
fn decomposition_has_no_new_part_without_later_ai_documents() {
    let norm = Normalizer::default();
    let (t1, t2) = (2002, 2004);
    let mut checked = 0;
    for seed in 0..100 {
        let mut mc = mini_corpus(3000 + seed, 50, 10);
        for p in &mc.papers {
            if p.year >= t1 {
                mc.ai.insert(p.id.clone(), false);
            }
        }
        mc.patents.retain(|p| p.year < t1);
        let prep = mc.prepare(&norm);
        let engine = ScoreEngine::new(&prep.input, &prep.lexicon, ScoringSettings::default());
        for m in [
            Measure::Direct(DirectMeasure::Dot),
            Measure::Potential(PotentialMeasure::DotNorm),
        ] {
            let (decs, _) = decompose_all(&engine, &prep.input, Level::Discipline, m, t1, t2).unwrap();
            for d in decs {
                assert_eq!(d.x, 0.0, "seed {seed}: {d:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 50);
}
