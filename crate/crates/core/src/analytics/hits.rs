use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::{CitationGraph, PaperCorpus};
use crate::scoring::Level;

/// ⌈N/20⌉ in integer arithmetic, the size of a top-5% set.
pub fn top_five_percent(n: usize) -> usize {
    n.div_ceil(20)
}

/// Flags the top ⌈5% · N⌉ papers of every (field, year) cell by received
/// citations, ties broken by ascending paper id.
pub fn hit_flags(corpus: &PaperCorpus, graph: &CitationGraph) -> Vec<bool> {
    let mut cells: BTreeMap<(&str, i32), Vec<usize>> = BTreeMap::new();
    for (i, p) in corpus.papers().iter().enumerate() {
        cells.entry((p.field.as_str(), p.year)).or_default().push(i);
    }
    let mut flags = vec![false; corpus.len()];
    for (_, mut members) in cells {
        members.sort_by(|&a, &b| {
            graph
                .received(b)
                .cmp(&graph.received(a))
                .then_with(|| corpus.get(a).id.cmp(&corpus.get(b).id))
        });
        for &i in members.iter().take(top_five_percent(members.len())) {
            flags[i] = true;
        }
    }
    flags
}

pub(crate) fn unit_of(corpus: &PaperCorpus, i: usize, level: Level) -> &str {
    let p = corpus.get(i);
    match level {
        Level::Field => &p.field,
        Level::Discipline => &p.discipline,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiumRow {
    pub entity: String,
    pub ai_papers: usize,
    pub ai_hits: usize,
    pub non_ai_papers: usize,
    pub non_ai_hits: usize,
    pub ai_hit_rate: Option<f64>,
    pub non_ai_hit_rate: Option<f64>,
    /// hit rate of AI-using papers over that of the others
    pub ratio: Option<f64>,
}

fn rate(k: usize, n: usize) -> Option<f64> {
    (n > 0).then(|| k as f64 / n as f64)
}

pub fn citation_premium(corpus: &PaperCorpus, level: Level, ai_using: &[bool], hits: &[bool]) -> Vec<PremiumRow> {
    let mut acc: BTreeMap<&str, [usize; 4]> = BTreeMap::new();
    for i in 0..corpus.len() {
        let e = acc.entry(unit_of(corpus, i, level)).or_default();
        let base = if ai_using[i] { 0 } else { 2 };
        e[base] += 1;
        if hits[i] {
            e[base + 1] += 1;
        }
    }
    acc.into_iter()
        .map(|(entity, [an, ah, nn, nh])| {
            let ai_rate = rate(ah, an);
            let non_rate = rate(nh, nn);
            PremiumRow {
                entity: entity.to_string(),
                ai_papers: an,
                ai_hits: ah,
                non_ai_papers: nn,
                non_ai_hits: nh,
                ai_hit_rate: ai_rate,
                non_ai_hit_rate: non_rate,
                ratio: match (ai_rate, non_rate) {
                    (Some(a), Some(b)) if b > 0.0 => Some(a / b),
                    _ => None,
                },
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SocRow {
    pub entity: String,
    pub ai_citations: usize,
    pub ai_outside: usize,
    pub non_ai_citations: usize,
    pub non_ai_outside: usize,
    pub ai_soc: Option<f64>,
    pub non_ai_soc: Option<f64>,
    pub ratio: Option<f64>,
}

/// Share of received in-corpus citations coming from a different unit at
/// `level`, pooled over each entity's AI-using and other papers.
pub fn outside_citation_share(
    corpus: &PaperCorpus,
    graph: &CitationGraph,
    level: Level,
    ai_using: &[bool],
) -> Vec<SocRow> {
    let mut acc: BTreeMap<&str, [usize; 4]> = BTreeMap::new();
    for (i, &using) in ai_using.iter().enumerate().take(corpus.len()) {
        let unit = unit_of(corpus, i, level);
        let e = acc.entry(unit).or_default();
        let base = if using { 0 } else { 2 };
        for &c in graph.citers_of(i) {
            e[base] += 1;
            if unit_of(corpus, c, level) != unit {
                e[base + 1] += 1;
            }
        }
    }
    acc.into_iter()
        .map(|(entity, [ac, ao, nc, no])| {
            let a = rate(ao, ac);
            let n = rate(no, nc);
            SocRow {
                entity: entity.to_string(),
                ai_citations: ac,
                ai_outside: ao,
                non_ai_citations: nc,
                non_ai_outside: no,
                ai_soc: a,
                non_ai_soc: n,
                ratio: match (a, n) {
                    (Some(a), Some(n)) if n > 0.0 => Some(a / n),
                    _ => None,
                },
            }
        })
        .collect()
}

/// SOC of a single paper; `None` when it has no in-corpus citations.
pub fn paper_soc(corpus: &PaperCorpus, graph: &CitationGraph, i: usize, level: Level) -> Option<f64> {
    let citers = graph.citers_of(i);
    let unit = unit_of(corpus, i, level);
    let out = citers.iter().filter(|&&c| unit_of(corpus, c, level) != unit).count();
    rate(out, citers.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PaperRecord;

    pub(crate) fn paper(id: &str, field: &str, year: i32, refs: &[&str]) -> PaperRecord {
        PaperRecord {
            id: id.into(),
            year,
            title: String::new(),
            abstract_text: String::new(),
            discipline: format!("d-{field}"),
            field: field.into(),
            doi: None,
            authors: vec![],
            references: refs.iter().map(|s| s.to_string()).collect(),
            first_author_last_name: None,
            vn_pairs: None,
        }
    }

    #[test]
    fn ceil_rule_sizes() {
        assert_eq!(top_five_percent(1), 1);
        assert_eq!(top_five_percent(40), 2);
        assert_eq!(top_five_percent(41), 3);
        assert_eq!(top_five_percent(60), 3);
        assert_eq!(top_five_percent(0), 0);
    }

    #[test]
    fn hits_rank_by_citations_then_id() {
        let mut ps: Vec<PaperRecord> = (0..40).map(|i| paper(&format!("p{i:02}"), "f", 2000, &[])).collect();
        ps.push(paper("c1", "g", 2001, &["p30"]));
        ps.push(paper("c2", "g", 2001, &["p30", "p31"]));
        let c = PaperCorpus::from_records(ps);
        let g = CitationGraph::build(&c);
        let h = hit_flags(&c, &g);
        let flagged: Vec<&str> = (0..c.len()).filter(|&i| h[i]).map(|i| c.get(i).id.as_str()).collect();
        // f/2000 has 40 papers → 2 hits; g/2001 has 2 → 1 hit (id tie-break).
        assert_eq!(flagged, ["c1", "p30", "p31"]);
    }

    #[test]
    fn soc_counts_and_premium() {
        let c = PaperCorpus::from_records(vec![
            paper("a", "f", 2000, &[]),
            paper("b", "f", 2001, &["a"]),
            paper("x", "g", 2001, &["a"]),
            paper("y", "g", 2001, &["a"]),
            paper("z", "h", 2001, &["a", "ext"]),
        ]);
        let g = CitationGraph::build(&c);
        assert_eq!(paper_soc(&c, &g, 0, Level::Field), Some(0.75));
        assert_eq!(paper_soc(&c, &g, 1, Level::Field), None);
        let ai = vec![true, false, false, false, false];
        let rows = outside_citation_share(&c, &g, Level::Field, &ai);
        assert_eq!(rows[0].ai_soc, Some(0.75));
        assert_eq!(rows[0].non_ai_soc, None);

        let hits = vec![true, false, false, false, true];
        let p = citation_premium(&c, Level::Field, &ai, &hits);
        assert_eq!(p[0].entity, "f");
        assert_eq!(p[0].ai_hit_rate, Some(1.0));
        assert_eq!(p[0].non_ai_hit_rate, Some(0.0));
        assert_eq!(p[0].ratio, None);
    }
}
