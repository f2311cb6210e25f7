use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{DemographicGroup, DemographicTable};
use crate::scoring::pairwise_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightingVariant {
    /// Weight of a discipline = the group's headcount there.
    AcrossDisciplines,
    /// Weight of a discipline = the group's share within that discipline.
    WithinShare,
}

impl WeightingVariant {
    pub fn name(self) -> &'static str {
        match self {
            WeightingVariant::AcrossDisciplines => "across",
            WeightingVariant::WithinShare => "within_share",
        }
    }
}

/// Groups making up the dimension `g` belongs to (gender or race).
pub fn dimension_of(g: DemographicGroup) -> &'static [DemographicGroup] {
    use DemographicGroup::*;
    match g {
        Woman | Man => &[Woman, Man],
        _ => &[
            White,
            Asian,
            Black,
            HispanicLatino,
            AmericanIndianAlaskaNative,
            OtherUrm,
        ],
    }
}

/// Share of group `g` within `discipline` on its own dimension.
pub fn within_share(table: &DemographicTable, discipline: &str, g: DemographicGroup) -> Option<f64> {
    let n = table.count(discipline, g)?;
    let parts: Vec<f64> = dimension_of(g)
        .iter()
        .filter_map(|x| table.count(discipline, *x))
        .collect();
    let total = pairwise_sum(&parts);
    (total > 0.0).then(|| n / total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupScore {
    pub score: Option<f64>,
    pub used: Vec<String>,
    /// Disciplines lacking a score or a count.
    pub excluded: Vec<String>,
}

/// Σ_d s_d·w_d / Σ_d w_d over disciplines with both a score and a weight.
pub fn group_weighted_score(
    scores: &BTreeMap<String, Option<f64>>,
    table: &DemographicTable,
    group: DemographicGroup,
    variant: WeightingVariant,
) -> GroupScore {
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut used = Vec::new();
    let mut excluded = Vec::new();
    let mut names: Vec<&str> = scores.keys().map(String::as_str).collect();
    names.extend(table.disciplines());
    names.sort_unstable();
    names.dedup();
    for d in names {
        let w = match variant {
            WeightingVariant::AcrossDisciplines => table.count(d, group),
            WeightingVariant::WithinShare => within_share(table, d, group),
        };
        match (scores.get(d).copied().flatten(), w) {
            (Some(s), Some(w)) => {
                num.push(s * w);
                den.push(w);
                used.push(d.to_string());
            }
            _ => excluded.push(d.to_string()),
        }
    }
    let total = pairwise_sum(&den);
    GroupScore {
        score: (total > 0.0).then(|| pairwise_sum(&num) / total),
        used,
        excluded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scores(v: &[(&str, f64)]) -> BTreeMap<String, Option<f64>> {
        v.iter().map(|(k, s)| (k.to_string(), Some(*s))).collect()
    }

    #[test]
    fn worked_weighting() {
        let mut t = DemographicTable::default();
        t.add("d1", DemographicGroup::Woman, 30.0);
        t.add("d2", DemographicGroup::Woman, 10.0);
        t.add("d1", DemographicGroup::Man, 30.0);
        t.add("d2", DemographicGroup::Man, 10.0);
        let s = scores(&[("d1", 1.0), ("d2", 3.0), ("d3", 9.0)]);
        let w = group_weighted_score(&s, &t, DemographicGroup::Woman, WeightingVariant::AcrossDisciplines);
        assert_eq!(w.score, Some(1.5));
        assert_eq!(w.excluded, ["d3"]);
        let m = group_weighted_score(&s, &t, DemographicGroup::Man, WeightingVariant::AcrossDisciplines);
        assert_eq!(m.score, w.score);
        let within = group_weighted_score(&s, &t, DemographicGroup::Woman, WeightingVariant::WithinShare);
        assert_eq!(within.score, Some(2.0));
        let none = group_weighted_score(&s, &t, DemographicGroup::Black, WeightingVariant::AcrossDisciplines);
        assert_eq!(none.score, None);
    }

    proptest! {
        #[test]
        fn weighted_score_is_convex(rows in prop::collection::vec((0.0f64..5.0, 0.0f64..100.0), 1..12)) {
            let mut t = DemographicTable::default();
            let mut s = BTreeMap::new();
            for (i, (score, n)) in rows.iter().enumerate() {
                let d = format!("d{i}");
                t.add(&d, DemographicGroup::Woman, *n);
                s.insert(d, Some(*score));
            }
            let g = group_weighted_score(&s, &t, DemographicGroup::Woman, WeightingVariant::AcrossDisciplines);
            if let Some(v) = g.score {
                let lo = rows.iter().filter(|r| r.1 > 0.0).map(|r| r.0).fold(f64::INFINITY, f64::min);
                let hi = rows.iter().filter(|r| r.1 > 0.0).map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
            }
        }
    }
}
