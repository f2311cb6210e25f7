use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;

use super::{CrosswalkTable, Taxonomy};
use crate::error::{Error, Result};
use crate::tasks::read_csv_rows;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DemographicGroup {
    Woman,
    Man,
    White,
    Asian,
    Black,
    HispanicLatino,
    AmericanIndianAlaskaNative,
    OtherUrm,
    /// Derived: black + hispanic_latino + american_indian_alaska_native + other_urm.
    Urm,
}

impl DemographicGroup {
    pub const INPUT: [DemographicGroup; 8] = [
        DemographicGroup::Woman,
        DemographicGroup::Man,
        DemographicGroup::White,
        DemographicGroup::Asian,
        DemographicGroup::Black,
        DemographicGroup::HispanicLatino,
        DemographicGroup::AmericanIndianAlaskaNative,
        DemographicGroup::OtherUrm,
    ];

    pub const ALL: [DemographicGroup; 9] = [
        DemographicGroup::Woman,
        DemographicGroup::Man,
        DemographicGroup::White,
        DemographicGroup::Asian,
        DemographicGroup::Black,
        DemographicGroup::HispanicLatino,
        DemographicGroup::AmericanIndianAlaskaNative,
        DemographicGroup::OtherUrm,
        DemographicGroup::Urm,
    ];

    pub const URM_PARTS: [DemographicGroup; 4] = [
        DemographicGroup::Black,
        DemographicGroup::HispanicLatino,
        DemographicGroup::AmericanIndianAlaskaNative,
        DemographicGroup::OtherUrm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DemographicGroup::Woman => "woman",
            DemographicGroup::Man => "man",
            DemographicGroup::White => "white",
            DemographicGroup::Asian => "asian",
            DemographicGroup::Black => "black",
            DemographicGroup::HispanicLatino => "hispanic_latino",
            DemographicGroup::AmericanIndianAlaskaNative => "american_indian_alaska_native",
            DemographicGroup::OtherUrm => "other_urm",
            DemographicGroup::Urm => "urm",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == s.trim())
    }
}

impl fmt::Display for DemographicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Survey counts per (discipline, group). The URM aggregate is derived.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DemographicTable {
    counts: BTreeMap<(String, DemographicGroup), f64>,
    /// Survey discipline keys that could not be mapped.
    pub unmapped: Vec<String>,
}

impl DemographicTable {
    /// Rows whose discipline is not a taxonomy discipline are translated
    /// through `crosswalk` when given; rows mapping to the same discipline add.
    pub fn load(path: &Path, taxonomy: &Taxonomy, crosswalk: Option<&CrosswalkTable>) -> Result<Self> {
        let mut t = DemographicTable::default();
        for row in read_csv_rows(path, &["discipline", "group", "count"])? {
            let group = DemographicGroup::parse(&row[1])
                .filter(|g| *g != DemographicGroup::Urm)
                .ok_or_else(|| Error::Data(format!("{}: unknown group `{}`", path.display(), row[1])))?;
            let count: f64 = row[2]
                .trim()
                .parse()
                .map_err(|_| Error::Data(format!("{}: bad count `{}`", path.display(), row[2])))?;
            if !(count.is_finite() && count >= 0.0) {
                return Err(Error::Data(format!("{}: negative or non-finite count", path.display())));
            }
            let disc = if taxonomy.disciplines.contains(&row[0]) {
                Some(row[0].clone())
            } else {
                crosswalk.and_then(|c| c.lookup(&row[0])).map(str::to_string)
            };
            match disc {
                Some(d) => t.add(&d, group, count),
                None => {
                    if !t.unmapped.contains(&row[0]) {
                        t.unmapped.push(row[0].clone());
                    }
                }
            }
        }
        for u in &t.unmapped {
            log::warn!(
                "{}: survey discipline `{u}` has no mapping; rows dropped",
                path.display()
            );
        }
        Ok(t)
    }

    pub fn add(&mut self, discipline: &str, group: DemographicGroup, count: f64) {
        assert!(group != DemographicGroup::Urm, "URM is derived");
        *self.counts.entry((discipline.to_string(), group)).or_insert(0.0) += count;
    }

    pub fn count(&self, discipline: &str, group: DemographicGroup) -> Option<f64> {
        if group == DemographicGroup::Urm {
            let parts: Vec<f64> = DemographicGroup::URM_PARTS
                .iter()
                .filter_map(|g| self.count(discipline, *g))
                .collect();
            return (!parts.is_empty()).then(|| parts.iter().sum());
        }
        self.counts.get(&(discipline.to_string(), group)).copied()
    }

    pub fn disciplines(&self) -> Vec<&str> {
        let mut d: Vec<&str> = self.counts.keys().map(|(d, _)| d.as_str()).collect();
        d.dedup();
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn urm_is_sum_of_parts() {
        let mut t = DemographicTable::default();
        t.add("bio", DemographicGroup::Black, 2.0);
        t.add("bio", DemographicGroup::HispanicLatino, 3.0);
        t.add("bio", DemographicGroup::OtherUrm, 1.0);
        t.add("bio", DemographicGroup::White, 10.0);
        assert_eq!(t.count("bio", DemographicGroup::Urm), Some(6.0));
        assert_eq!(t.count("cs", DemographicGroup::Urm), None);
        assert_eq!(t.disciplines(), ["bio"]);
    }

    #[test]
    fn group_names_roundtrip() {
        for g in DemographicGroup::ALL {
            assert_eq!(DemographicGroup::parse(g.name()), Some(g));
        }
    }
}
