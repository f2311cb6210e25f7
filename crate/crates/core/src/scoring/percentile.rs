use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Percentile ranks in [0, 100]: ascending rank over non-null scores, ties
/// sharing their mean rank, scaled by 100 / (n − 1). Null entries are omitted.
pub fn percentile_rank<K: Ord + Clone>(scores: &BTreeMap<K, Option<f64>>) -> Result<BTreeMap<K, f64>> {
    let mut vals: Vec<(f64, &K)> = scores.iter().filter_map(|(k, v)| v.map(|x| (x, k))).collect();
    let n = vals.len();
    if n < 2 {
        return Err(Error::Undefined(format!(
            "percentiles need at least two non-null scores, found {n}"
        )));
    }
    vals.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    let mut out = BTreeMap::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && vals[j + 1].0 == vals[i].0 {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0;
        let pct = 100.0 * rank / (n - 1) as f64;
        for v in &vals[i..=j] {
            out.insert(v.1.clone(), pct);
        }
        i = j + 1;
    }
    Ok(out)
}
