//! Direct (n-gram) and potential (verb–noun task) impact scores.

pub mod direct;
pub mod engine;
pub mod percentile;
pub mod potential;
pub mod vector;

use std::collections::BTreeMap;

use serde::Serialize;

pub use direct::{build_ai_ngram_vector, build_field_ngram_vector, direct_score, DirectMeasure, NgramDoc};
pub use engine::{
    CellScores, Framework, Level, Measure, PatentDoc, ScoreEngine, ScoringDoc, ScoringInput, ScoringSettings,
};
pub use percentile::percentile_rank;
pub use potential::{combine_capability, potential_score, CapabilitySupport, IdfTable, PotentialMeasure};
pub use vector::{pairwise_sum, Normalization, SparseVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScoreKey {
    pub level: Level,
    pub entity: String,
    pub year: i32,
    pub measure: Measure,
}

/// (entity, level, year, measure) → score, with `None` for undefined cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreTable {
    entries: BTreeMap<ScoreKey, Option<f64>>,
}

impl ScoreTable {
    pub fn from_cells(input: &ScoringInput, by_year: &BTreeMap<i32, BTreeMap<(Level, usize), CellScores>>) -> Self {
        let mut entries = BTreeMap::new();
        for (&year, cells) in by_year {
            for (&(level, idx), cell) in cells {
                for m in Measure::all() {
                    entries.insert(
                        ScoreKey {
                            level,
                            entity: input.entities(level)[idx].clone(),
                            year,
                            measure: m,
                        },
                        cell.get(m),
                    );
                }
            }
        }
        ScoreTable { entries }
    }

    pub fn insert(&mut self, key: ScoreKey, value: Option<f64>) {
        self.entries.insert(key, value);
    }

    pub fn get(&self, level: Level, entity: &str, year: i32, measure: Measure) -> Option<f64> {
        self.entries
            .get(&ScoreKey {
                level,
                entity: entity.to_string(),
                year,
                measure,
            })
            .copied()
            .flatten()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ScoreKey, Option<f64>)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// entity → score at one (level, year, measure), nulls included.
    pub fn slice(&self, level: Level, year: i32, measure: Measure) -> BTreeMap<String, Option<f64>> {
        self.entries
            .iter()
            .filter(|(k, _)| k.level == level && k.year == year && k.measure == measure)
            .map(|(k, v)| (k.entity.clone(), *v))
            .collect()
    }

    pub fn years(&self) -> Vec<i32> {
        let mut y: Vec<i32> = self.entries.keys().map(|k| k.year).collect();
        y.sort_unstable();
        y.dedup();
        y
    }
}

/// Score change split into the score at t1 (Z), the gain from capabilities
/// already present at t1 (Y) and the gain from later capabilities (X).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreDecomposition {
    pub entity: String,
    pub framework: Framework,
    pub t1: i32,
    pub t2: i32,
    pub z: f64,
    pub y: f64,
    pub x: f64,
}

impl ScoreDecomposition {
    /// `live_t1`, `frozen_t2` and `live_t2` are S(t1), S_frozen(t2) and S(t2).
    pub fn from_scores(
        entity: &str,
        measure: Measure,
        t1: i32,
        t2: i32,
        live_t1: Option<f64>,
        frozen_t2: Option<f64>,
        live_t2: Option<f64>,
    ) -> Result<Self> {
        match (live_t1, frozen_t2, live_t2) {
            (Some(z), Some(f), Some(s)) => Ok(ScoreDecomposition {
                entity: entity.to_string(),
                framework: measure.framework(),
                t1,
                t2,
                z,
                y: f - z,
                x: s - f,
            }),
            _ => Err(Error::Undefined(format!(
                "{entity}: {} score undefined at {t1} or {t2}",
                measure.framework()
            ))),
        }
    }
}

/// Decomposes every entity of `level` between `t1 < t2` for one measure.
/// Entities with any undefined score are returned in the second list.
pub fn decompose_all(
    engine: &ScoreEngine<'_>,
    input: &ScoringInput,
    level: Level,
    measure: Measure,
    t1: i32,
    t2: i32,
) -> Result<(Vec<ScoreDecomposition>, Vec<String>)> {
    if t1 >= t2 {
        return Err(Error::Config(format!("decomposition needs t1 < t2, got {t1} and {t2}")));
    }
    let live1 = engine.score_year(t1, t1);
    let frozen = engine.score_year(t2, t1);
    let live2 = engine.score_year(t2, t2);
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    for (idx, name) in input.entities(level).iter().enumerate() {
        let k = (level, idx);
        match ScoreDecomposition::from_scores(
            name,
            measure,
            t1,
            t2,
            live1[&k].get(measure),
            frozen[&k].get(measure),
            live2[&k].get(measure),
        ) {
            Ok(d) => out.push(d),
            Err(_) => skipped.push(name.clone()),
        }
    }
    Ok((out, skipped))
}
