use std::collections::BTreeMap;
use std::path::Path;

use super::Taxonomy;
use crate::error::{Error, Result};
use crate::tasks::read_csv_rows;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyKind {
    /// Free-text names, matched case-insensitively with collapsed whitespace.
    Name,
    /// CIP codes, matched on their two-digit series.
    Cip,
}

/// Two-digit CIP series of a code: `"11.0104"` → `"11"`, `"1.01"` → `"01"`.
pub fn cip_prefix(code: &str) -> Option<String> {
    let code = code.trim();
    let head = match code.split_once('.') {
        Some((h, _)) => h.to_string(),
        None => code.chars().take(2).collect(),
    };
    if head.is_empty() || !head.chars().all(|c| c.is_ascii_digit()) || head.len() > 2 {
        return None;
    }
    Some(format!("{head:0>2}"))
}

fn name_key(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Mapping from an external taxonomy's keys onto internal disciplines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosswalkTable {
    pub source: String,
    kind: KeyKind,
    entries: BTreeMap<String, String>,
}

impl CrosswalkTable {
    pub fn new(source: &str, kind: KeyKind) -> Self {
        CrosswalkTable {
            source: source.to_string(),
            kind,
            entries: BTreeMap::new(),
        }
    }

    fn key(&self, raw: &str) -> Option<String> {
        match self.kind {
            KeyKind::Name => Some(name_key(raw)).filter(|k| !k.is_empty()),
            KeyKind::Cip => cip_prefix(raw),
        }
    }

    /// Adds an entry; a key mapped to two different disciplines is an error.
    pub fn insert(&mut self, key: &str, discipline: &str) -> Result<()> {
        let k = self
            .key(key)
            .ok_or_else(|| Error::Data(format!("{}: unusable key `{key}`", self.source)))?;
        if let Some(prev) = self.entries.get(&k) {
            if prev != discipline {
                return Err(Error::Data(format!(
                    "{}: key `{key}` mapped to both `{prev}` and `{discipline}`",
                    self.source
                )));
            }
        }
        self.entries.insert(k, discipline.to_string());
        Ok(())
    }

    /// Reads a `source_key,discipline` CSV; every target must be a taxonomy discipline.
    pub fn load(path: &Path, source: &str, kind: KeyKind, taxonomy: &Taxonomy) -> Result<Self> {
        let mut t = CrosswalkTable::new(source, kind);
        for row in read_csv_rows(path, &["source_key", "discipline"])? {
            if !taxonomy.disciplines.contains(&row[1]) {
                return Err(Error::Data(format!(
                    "{}: `{}` maps to unknown discipline `{}`",
                    path.display(),
                    row[0],
                    row[1]
                )));
            }
            t.insert(&row[0], &row[1])?;
        }
        Ok(t)
    }

    pub fn lookup(&self, raw: &str) -> Option<&str> {
        self.key(raw).and_then(|k| self.entries.get(&k)).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Field-name table first, then the CIP table; `None` means unclassified.
pub fn classify_syllabus<'a>(
    field_name: Option<&str>,
    cip_code: Option<&str>,
    names: Option<&'a CrosswalkTable>,
    cips: Option<&'a CrosswalkTable>,
) -> Option<&'a str> {
    let by_name = field_name
        .filter(|f| !f.trim().is_empty())
        .and_then(|f| names.and_then(|t| t.lookup(f)));
    by_name.or_else(|| {
        cip_code
            .filter(|c| !c.trim().is_empty())
            .and_then(|c| cips.and_then(|t| t.lookup(c)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables() -> (CrosswalkTable, CrosswalkTable) {
        let mut names = CrosswalkTable::new("osp", KeyKind::Name);
        names.insert("Political Science", "political science").unwrap();
        let mut cips = CrosswalkTable::new("cip", KeyKind::Cip);
        cips.insert("11", "computer science").unwrap();
        cips.insert("26.0101", "biology").unwrap();
        (names, cips)
    }

    #[test]
    fn name_first_then_cip_then_unclassified() {
        let (n, c) = tables();
        assert_eq!(
            classify_syllabus(Some("political  science"), Some("26.01"), Some(&n), Some(&c)),
            Some("political science")
        );
        assert_eq!(
            classify_syllabus(None, Some("11.0104"), Some(&n), Some(&c)),
            Some("computer science")
        );
        assert_eq!(
            classify_syllabus(Some("Basket Weaving"), Some("26.1309"), Some(&n), Some(&c)),
            Some("biology")
        );
        assert_eq!(classify_syllabus(None, None, Some(&n), Some(&c)), None);
        assert_eq!(
            classify_syllabus(Some("Basket Weaving"), None, Some(&n), Some(&c)),
            None
        );
    }

    #[test]
    fn cip_prefixes() {
        assert_eq!(cip_prefix("11.0104").as_deref(), Some("11"));
        assert_eq!(cip_prefix("1.01").as_deref(), Some("01"));
        assert_eq!(cip_prefix("110104").as_deref(), Some("11"));
        assert_eq!(cip_prefix("ab.01"), None);
    }

    #[test]
    fn conflicting_keys_rejected() {
        let mut t = CrosswalkTable::new("osp", KeyKind::Name);
        t.insert("Biology", "biology").unwrap();
        t.insert("biology", "biology").unwrap();
        assert!(t.insert("BIOLOGY", "chemistry").is_err());
    }
}
