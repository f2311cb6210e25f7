use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::text::{NGram, Normalizer};

pub const DEFAULT_CS_DISCIPLINE: &str = "computer science";

#[derive(Debug, Deserialize)]
struct RawField {
    id: String,
    parent: String,
}

#[derive(Debug, Deserialize)]
struct RawTaxonomy {
    disciplines: Vec<String>,
    fields: Vec<RawField>,
    #[serde(default)]
    ai_fields: Vec<String>,
    #[serde(default)]
    extended_ai_fields: Vec<String>,
    #[serde(default)]
    ai_concept_terms: Vec<String>,
    #[serde(default)]
    ngram_blocklist: Vec<String>,
    #[serde(default)]
    cs_discipline: Option<String>,
}

/// Two-level discipline/field taxonomy plus the AI term lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Taxonomy {
    pub disciplines: BTreeSet<String>,
    /// field id → parent discipline id
    pub fields: BTreeMap<String, String>,
    pub ai_fields: BTreeSet<String>,
    /// Field set used by the `top20_fields` labeling mode.
    pub extended_ai_fields: BTreeSet<String>,
    pub ai_concept_terms: BTreeSet<NGram>,
    pub ngram_blocklist: BTreeSet<NGram>,
    pub cs_discipline: String,
    pub warnings: Vec<String>,
}

impl Taxonomy {
    pub fn load(path: &Path, norm: &Normalizer) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let raw: RawTaxonomy =
            serde_json::from_str(&text).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::from_raw(raw, norm).map_err(|e| match e {
            Error::Data(m) => Error::Data(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn from_json(json: &str, norm: &Normalizer) -> Result<Self> {
        let raw: RawTaxonomy = serde_json::from_str(json).map_err(|e| Error::Data(format!("taxonomy: {e}")))?;
        Self::from_raw(raw, norm)
    }

    fn from_raw(raw: RawTaxonomy, norm: &Normalizer) -> Result<Self> {
        let disciplines: BTreeSet<String> = raw.disciplines.into_iter().collect();
        let mut fields = BTreeMap::new();
        for f in raw.fields {
            if !disciplines.contains(&f.parent) {
                return Err(Error::Data(format!(
                    "field `{}` has unknown parent discipline `{}`",
                    f.id, f.parent
                )));
            }
            if let Some(prev) = fields.insert(f.id.clone(), f.parent.clone()) {
                if prev != f.parent {
                    return Err(Error::Data(format!("field `{}` listed under two disciplines", f.id)));
                }
            }
        }
        let check_fields = |set: &[String], what: &str| -> Result<BTreeSet<String>> {
            let mut out = BTreeSet::new();
            for f in set {
                if !fields.contains_key(f) {
                    return Err(Error::Data(format!("{what} entry `{f}` is not a known field")));
                }
                out.insert(f.clone());
            }
            Ok(out)
        };
        let ai_fields = check_fields(&raw.ai_fields, "ai_fields")?;
        let extended_ai_fields = check_fields(&raw.extended_ai_fields, "extended_ai_fields")?;

        let mut warnings = Vec::new();
        let mut normalize_terms = |terms: Vec<String>, what: &str| -> BTreeSet<NGram> {
            let mut out = BTreeSet::new();
            for t in terms {
                match norm.phrase_ngram(&t) {
                    Some(g) => {
                        out.insert(g);
                    }
                    None => warnings.push(format!(
                        "{what} entry `{t}` is not a 2- or 3-word phrase after normalization; ignored"
                    )),
                }
            }
            out
        };
        let mut ai_concept_terms = normalize_terms(raw.ai_concept_terms, "ai_concept_terms");
        let ngram_blocklist = normalize_terms(raw.ngram_blocklist, "ngram_blocklist");
        let clash: Vec<NGram> = ai_concept_terms.intersection(&ngram_blocklist).cloned().collect();
        for g in clash {
            warnings.push(format!(
                "`{g}` is both an AI concept term and blocklisted; blocklist wins"
            ));
            ai_concept_terms.remove(&g);
        }
        let cs_discipline = raw.cs_discipline.unwrap_or_else(|| DEFAULT_CS_DISCIPLINE.to_string());
        for w in &warnings {
            log::warn!("taxonomy: {w}");
        }
        Ok(Taxonomy {
            disciplines,
            fields,
            ai_fields,
            extended_ai_fields,
            ai_concept_terms,
            ngram_blocklist,
            cs_discipline,
            warnings,
        })
    }

    pub fn parent_of(&self, field: &str) -> Option<&str> {
        self.fields.get(field).map(String::as_str)
    }

    pub fn fields_of<'a>(&'a self, discipline: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.fields
            .iter()
            .filter(move |(_, p)| p.as_str() == discipline)
            .map(|(f, _)| f.as_str())
    }
}
