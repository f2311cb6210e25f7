use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub id: String,
    pub year: i32,
    pub title: String,
    #[serde(rename = "abstract", default)]
    pub abstract_text: String,
    pub discipline: String,
    pub field: String,
    #[serde(default)]
    pub doi: Option<String>,
    #[serde(default)]
    pub authors: Vec<String>,
    #[serde(default)]
    pub references: Vec<String>,
    /// Needed only for syllabus matching; papers carry author ids, not names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_author_last_name: Option<String>,
    /// Externally parsed verb–noun pairs for the title.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vn_pairs: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatentRecord {
    pub id: String,
    pub year: i32,
    pub title: String,
    pub cpc_codes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vn_pairs: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ReferenceStub {
    #[serde(default)]
    pub doi: Option<String>,
    #[serde(default)]
    pub title: Option<String>,
    #[serde(default)]
    pub first_author_last_name: Option<String>,
    #[serde(default)]
    pub year: Option<i32>,
}

impl ReferenceStub {
    pub fn is_usable(&self) -> bool {
        let present = |s: &Option<String>| s.as_deref().is_some_and(|v| !v.trim().is_empty());
        present(&self.doi) || (present(&self.title) && present(&self.first_author_last_name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyllabusRecord {
    pub id: String,
    pub year: i32,
    #[serde(default)]
    pub field_name: Option<String>,
    #[serde(default)]
    pub cip_code: Option<String>,
    #[serde(default)]
    pub references: Vec<ReferenceStub>,
}

/// Lowercases, trims, and strips resolver prefixes and all whitespace.
pub fn normalize_doi(doi: &str) -> String {
    let mut d: String = doi.trim().to_lowercase();
    for prefix in [
        "https://doi.org/",
        "http://doi.org/",
        "https://dx.doi.org/",
        "http://dx.doi.org/",
        "doi:",
    ] {
        if let Some(rest) = d.strip_prefix(prefix) {
            d = rest.to_string();
            break;
        }
    }
    d.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Lowercase, punctuation removed, whitespace collapsed.
pub fn normalize_title(title: &str) -> String {
    let cleaned: String = title
        .to_lowercase()
        .chars()
        .filter(|c| c.is_alphanumeric() || c.is_whitespace())
        .collect();
    cleaned.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn normalize_name(name: &str) -> String {
    name.trim().to_lowercase()
}
