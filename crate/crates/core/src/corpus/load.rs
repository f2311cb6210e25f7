use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

const KEPT_REASONS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationConfig {
    pub paper_years: (i32, i32),
    pub patent_years: (i32, i32),
    pub max_error_rate: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            paper_years: (1960, 2019),
            patent_years: (1976, 2019),
            max_error_rate: 0.01,
        }
    }
}

/// Accepted/rejected counts for one input file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub path: String,
    pub total: usize,
    pub accepted: usize,
    pub rejected: usize,
    /// First rejections as `(line number, reason)`.
    pub reasons: Vec<(usize, String)>,
}

/// Parses a JSON-lines file in parallel, validates each record, drops every
/// record whose id occurs more than once, and returns records sorted by id.
pub fn load_jsonl<T, V, I>(path: &Path, max_error_rate: f64, validate: V, id_of: I) -> Result<(Vec<T>, LoadReport)>
where
    T: DeserializeOwned + Send,
    V: Fn(&T) -> std::result::Result<(), String> + Sync,
    I: Fn(&T) -> &str + Sync,
{
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l))
        .collect();

    let parsed: Vec<(usize, std::result::Result<T, String>)> = lines
        .par_iter()
        .map(|(n, line)| {
            let rec = serde_json::from_str::<T>(line)
                .map_err(|e| format!("parse error: {e}"))
                .and_then(|r| validate(&r).map(|_| r));
            (*n, rec)
        })
        .collect();

    let mut rejected: Vec<(usize, String)> = Vec::new();
    let mut ok: Vec<(usize, T)> = Vec::with_capacity(parsed.len());
    for (n, r) in parsed {
        match r {
            Ok(rec) => ok.push((n, rec)),
            Err(e) => rejected.push((n, e)),
        }
    }

    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (_, rec) in &ok {
        *seen.entry(id_of(rec).to_string()).or_insert(0) += 1;
    }
    let mut records = Vec::with_capacity(ok.len());
    for (n, rec) in ok {
        if seen[id_of(&rec)] > 1 {
            rejected.push((n, format!("duplicate id `{}`", id_of(&rec))));
        } else {
            records.push(rec);
        }
    }
    records.sort_by(|a, b| id_of(a).cmp(id_of(b)));
    rejected.sort();

    let total = lines.len();
    let report = LoadReport {
        path: path.display().to_string(),
        total,
        accepted: records.len(),
        rejected: rejected.len(),
        reasons: rejected.iter().take(KEPT_REASONS).cloned().collect(),
    };
    for (n, why) in rejected.iter().take(KEPT_REASONS) {
        log::warn!("{}:{n}: rejected: {why}", path.display());
    }
    if total > 0 && rejected.len() as f64 > max_error_rate * total as f64 {
        let first = rejected
            .first()
            .map(|(n, w)| format!("line {n}: {w}"))
            .unwrap_or_default();
        return Err(Error::ErrorBudget {
            path: path.to_path_buf(),
            rejected: rejected.len(),
            total,
            max_rate: max_error_rate,
            first,
        });
    }
    Ok((records, report))
}
