use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{SyllabusLinks, SyllabusRecord};

/// Which syllabi count toward a discipline's education level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EducationFilter {
    pub name: String,
    pub min_refs: usize,
    pub max_refs: Option<usize>,
    pub years: (i32, i32),
}

impl EducationFilter {
    pub fn default_filter() -> Self {
        EducationFilter {
            name: "default".into(),
            min_refs: 5,
            max_refs: None,
            years: (2014, 2018),
        }
    }

    /// The default and the four alternative filters.
    pub fn presets() -> Vec<Self> {
        let d = Self::default_filter();
        vec![
            d.clone(),
            EducationFilter {
                name: "refs_10_plus".into(),
                min_refs: 10,
                ..d.clone()
            },
            EducationFilter {
                name: "refs_1_to_5".into(),
                min_refs: 1,
                max_refs: Some(5),
                ..d.clone()
            },
            EducationFilter {
                name: "years_2008_2013".into(),
                years: (2008, 2013),
                ..d.clone()
            },
            EducationFilter {
                name: "years_2000_2007".into(),
                years: (2000, 2007),
                ..d
            },
        ]
    }

    pub fn admits(&self, year: i32, matched: usize) -> bool {
        year >= self.years.0
            && year <= self.years.1
            && matched >= self.min_refs
            && self.max_refs.is_none_or(|m| matched <= m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EducationRow {
    pub discipline: String,
    pub filter: String,
    pub syllabi: usize,
    pub links: usize,
    pub ai_links: usize,
    pub ai_syllabi: usize,
    /// AI links / all matched links
    pub citation_share: Option<f64>,
    /// syllabi with at least one AI link / syllabi
    pub syllabus_share: Option<f64>,
}

/// Education levels per discipline. `discipline_of` gives each syllabus's
/// crosswalked discipline (absent = unclassified, skipped).
pub fn education_levels(
    syllabi: &[SyllabusRecord],
    discipline_of: &BTreeMap<String, String>,
    links: &SyllabusLinks,
    ai_papers: &[bool],
    filter: &EducationFilter,
    disciplines: &[String],
) -> Vec<EducationRow> {
    let mut acc: BTreeMap<&str, [usize; 4]> = disciplines.iter().map(|d| (d.as_str(), [0; 4])).collect();
    for s in syllabi {
        let Some(d) = discipline_of.get(&s.id) else {
            continue;
        };
        let matched = links.get(&s.id);
        let n = matched.map_or(0, |m| m.len());
        if !filter.admits(s.year, n) {
            continue;
        }
        let ai = matched.map_or(0, |m| m.iter().filter(|&&i| ai_papers[i]).count());
        let e = acc.entry(d.as_str()).or_insert([0; 4]);
        e[0] += 1;
        e[1] += n;
        e[2] += ai;
        e[3] += usize::from(ai > 0);
    }
    acc.into_iter()
        .map(|(d, [syl, links, ai_links, ai_syl])| EducationRow {
            discipline: d.to_string(),
            filter: filter.name.clone(),
            syllabi: syl,
            links,
            ai_links,
            ai_syllabi: ai_syl,
            citation_share: (links > 0).then(|| ai_links as f64 / links as f64),
            syllabus_share: (syl > 0).then(|| ai_syl as f64 / syl as f64),
        })
        .collect()
}
