use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use sciai_core::ai::AiMode;
use sciai_core::analytics::CareerSettings;
use sciai_core::scoring::{CapabilitySupport, DirectMeasure, PotentialMeasure};
use sciai_core::{Error, Result};

/// Input files. Relative paths resolve against the config file's directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Inputs {
    pub papers: Option<PathBuf>,
    pub taxonomy: Option<PathBuf>,
    pub patents: Option<PathBuf>,
    pub syllabi: Option<PathBuf>,
    pub syllabus_name_crosswalk: Option<PathBuf>,
    pub syllabus_cip_crosswalk: Option<PathBuf>,
    pub author_labels: Option<PathBuf>,
    pub demographics: Option<PathBuf>,
    pub demographics_crosswalk: Option<PathBuf>,
    /// one paper id per line, for `ai.mode = "external"`
    pub external_ai_ids: Option<PathBuf>,
    /// `id,is_ai` hand labels for the precision/recall check
    pub manual_labels: Option<PathBuf>,
    /// directory of published two-column tables to correlate
    pub replication_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub from_year: i32,
    pub to_year: i32,
    pub seed: u64,
    pub shards: usize,
    pub out: PathBuf,
    pub cache: bool,
    pub max_error_rate: f64,
    pub paper_years: (i32, i32),
    pub patent_years: (i32, i32),
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            from_year: 2000,
            to_year: 2019,
            seed: 0,
            shards: 4,
            out: PathBuf::from("out"),
            cache: true,
            max_error_rate: 0.01,
            paper_years: (1960, 2019),
            patent_years: (1976, 2019),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AiSection {
    pub mode: AiMode,
    pub patent_cpc_codes: Vec<String>,
    pub patent_phrases: Vec<String>,
}

impl Default for AiSection {
    fn default() -> Self {
        AiSection {
            mode: AiMode::FiveFields,
            patent_cpc_codes: Vec::new(),
            patent_phrases: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TextSection {
    pub lemma_exceptions: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub pos_lexicon: Option<PathBuf>,
    pub task_verbs: Option<PathBuf>,
    pub task_nouns: Option<PathBuf>,
    pub task_pairs: Option<PathBuf>,
    pub task_synonyms: Option<PathBuf>,
    pub max_gap: usize,
    pub include_prep_objects: bool,
}

impl Default for TextSection {
    fn default() -> Self {
        TextSection {
            lemma_exceptions: None,
            stopwords: None,
            pos_lexicon: None,
            task_verbs: None,
            task_nouns: None,
            task_pairs: None,
            task_synonyms: None,
            max_gap: 4,
            include_prep_objects: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScoringSection {
    pub direct_measure: DirectMeasure,
    pub potential_measure: PotentialMeasure,
    pub eq2_support: CapabilitySupport,
    pub unique_per_doc: bool,
    pub start_year: i32,
    /// AI side frozen at this year for the decomposition; none disables it
    pub freeze_year: Option<i32>,
}

impl Default for ScoringSection {
    fn default() -> Self {
        ScoringSection {
            direct_measure: DirectMeasure::Dot,
            potential_measure: PotentialMeasure::DotNorm,
            eq2_support: CapabilitySupport::Union,
            unique_per_doc: false,
            start_year: 1960,
            freeze_year: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub grouping_quantile: f64,
    pub grouping_years: Vec<i32>,
    pub pooled_t: bool,
    pub top_k: usize,
    pub collab_window: (i32, i32),
    pub min_ai_papers: usize,
    pub career: CareerSettings,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        AnalysisSection {
            grouping_quantile: 0.25,
            grouping_years: vec![2000, 2019],
            pooled_t: false,
            top_k: 3,
            collab_window: (1980, 2019),
            min_ai_papers: 3,
            career: CareerSettings::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub inputs: Inputs,
    pub run: RunSection,
    pub ai: AiSection,
    pub text: TextSection,
    pub scoring: ScoringSection,
    pub analysis: AnalysisSection,
}

fn resolve(base: &Path, p: &mut Option<PathBuf>) {
    if let Some(path) = p {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
}

impl Config {
    /// Parses a TOML config and resolves relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: Config = toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let i = &mut self.inputs;
        for p in [
            &mut i.papers,
            &mut i.taxonomy,
            &mut i.patents,
            &mut i.syllabi,
            &mut i.syllabus_name_crosswalk,
            &mut i.syllabus_cip_crosswalk,
            &mut i.author_labels,
            &mut i.demographics,
            &mut i.demographics_crosswalk,
            &mut i.external_ai_ids,
            &mut i.manual_labels,
            &mut i.replication_dir,
        ] {
            resolve(base, p);
        }
        let t = &mut self.text;
        for p in [
            &mut t.lemma_exceptions,
            &mut t.stopwords,
            &mut t.pos_lexicon,
            &mut t.task_verbs,
            &mut t.task_nouns,
            &mut t.task_pairs,
            &mut t.task_synonyms,
        ] {
            resolve(base, p);
        }
        if self.run.out.is_relative() {
            self.run.out = base.join(&self.run.out);
        }
    }

    /// Every referenced file must exist; ranges must be consistent.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let i = &self.inputs;
        let Some(papers) = &i.papers else {
            return bad("inputs.papers is required".into());
        };
        let Some(taxonomy) = &i.taxonomy else {
            return bad("inputs.taxonomy is required".into());
        };
        let files = [
            ("inputs.papers", Some(papers)),
            ("inputs.taxonomy", Some(taxonomy)),
            ("inputs.patents", i.patents.as_ref()),
            ("inputs.syllabi", i.syllabi.as_ref()),
            ("inputs.syllabus_name_crosswalk", i.syllabus_name_crosswalk.as_ref()),
            ("inputs.syllabus_cip_crosswalk", i.syllabus_cip_crosswalk.as_ref()),
            ("inputs.author_labels", i.author_labels.as_ref()),
            ("inputs.demographics", i.demographics.as_ref()),
            ("inputs.demographics_crosswalk", i.demographics_crosswalk.as_ref()),
            ("inputs.external_ai_ids", i.external_ai_ids.as_ref()),
            ("inputs.manual_labels", i.manual_labels.as_ref()),
            ("text.lemma_exceptions", self.text.lemma_exceptions.as_ref()),
            ("text.stopwords", self.text.stopwords.as_ref()),
            ("text.pos_lexicon", self.text.pos_lexicon.as_ref()),
            ("text.task_verbs", self.text.task_verbs.as_ref()),
            ("text.task_nouns", self.text.task_nouns.as_ref()),
            ("text.task_pairs", self.text.task_pairs.as_ref()),
            ("text.task_synonyms", self.text.task_synonyms.as_ref()),
        ];
        for (key, p) in files {
            if let Some(p) = p {
                if !p.is_file() {
                    return bad(format!("{key}: no such file {}", p.display()));
                }
            }
        }
        let r = &self.run;
        if r.from_year > r.to_year {
            return bad(format!(
                "run.from_year {} is after run.to_year {}",
                r.from_year, r.to_year
            ));
        }
        if r.shards == 0 {
            return bad("run.shards must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&r.max_error_rate) {
            return bad("run.max_error_rate must lie in [0, 1]".into());
        }
        if self.ai.mode == AiMode::External && i.external_ai_ids.is_none() {
            return bad("ai.mode = \"external\" needs inputs.external_ai_ids".into());
        }
        if let Some(f) = self.scoring.freeze_year {
            if f < r.from_year || f >= r.to_year {
                return bad(format!(
                    "scoring.freeze_year {f} must lie in [{}, {})",
                    r.from_year, r.to_year
                ));
            }
        }
        let a = &self.analysis;
        if !(0.0..=0.5).contains(&a.grouping_quantile) {
            return bad("analysis.grouping_quantile must lie in [0, 0.5]".into());
        }
        for y in &a.grouping_years {
            if *y < r.from_year || *y > r.to_year {
                return bad(format!("analysis.grouping_years: {y} is outside the run years"));
            }
        }
        if a.top_k == 0 {
            return bad("analysis.top_k must be at least 1".into());
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).unwrap_or_else(|e| format!("# cannot render config: {e}\n"))
    }
}
