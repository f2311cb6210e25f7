use std::collections::BTreeSet;

use super::PaperCorpus;

/// Citation edges between corpus papers, with both directions indexed.
#[derive(Debug, Clone, Default)]
pub struct CitationGraph {
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
    external: Vec<Vec<String>>,
}

impl CitationGraph {
    /// Repeated references from one paper to the same target count once.
    pub fn build(corpus: &PaperCorpus) -> Self {
        let n = corpus.len();
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        let mut external = vec![Vec::new(); n];
        for (i, p) in corpus.papers().iter().enumerate() {
            let mut internal = BTreeSet::new();
            let mut ext = BTreeSet::new();
            for r in &p.references {
                match corpus.index_of(r) {
                    Some(j) => {
                        internal.insert(j);
                    }
                    None => {
                        ext.insert(r.clone());
                    }
                }
            }
            for &j in &internal {
                incoming[j].push(i);
            }
            outgoing[i] = internal.into_iter().collect();
            external[i] = ext.into_iter().collect();
        }
        CitationGraph {
            outgoing,
            incoming,
            external,
        }
    }

    /// Corpus papers cited by paper `i`.
    pub fn cited_by_paper(&self, i: usize) -> &[usize] {
        &self.outgoing[i]
    }

    /// Corpus papers citing paper `i`, in ascending index order.
    pub fn citers_of(&self, i: usize) -> &[usize] {
        &self.incoming[i]
    }

    /// Cited ids of paper `i` that are not in the corpus.
    pub fn external_targets(&self, i: usize) -> &[String] {
        &self.external[i]
    }

    pub fn received(&self, i: usize) -> usize {
        self.incoming[i].len()
    }

    pub fn edge_count(&self) -> usize {
        self.outgoing.iter().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PaperRecord;

    fn paper(id: &str, refs: &[&str]) -> PaperRecord {
        PaperRecord {
            id: id.into(),
            year: 2000,
            title: String::new(),
            abstract_text: String::new(),
            discipline: "d".into(),
            field: "f".into(),
            doi: None,
            authors: vec![],
            references: refs.iter().map(|s| s.to_string()).collect(),
            first_author_last_name: None,
            vn_pairs: None,
        }
    }

    #[test]
    fn directions_are_consistent() {
        let c = PaperCorpus::from_records(vec![
            paper("a", &["b", "c", "zz", "b"]),
            paper("b", &["c"]),
            paper("c", &[]),
        ]);
        let g = CitationGraph::build(&c);
        let (a, b, cc) = (0, 1, 2);
        assert_eq!(g.cited_by_paper(a), [b, cc]);
        assert_eq!(g.citers_of(cc), [a, b]);
        assert_eq!(g.external_targets(a), ["zz"]);
        assert_eq!(g.received(b), 1);
        for i in 0..3 {
            for &j in g.cited_by_paper(i) {
                assert!(g.citers_of(j).contains(&i));
            }
        }
        assert_eq!(g.edge_count(), 3);
    }
}
