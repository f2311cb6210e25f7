//! Seeded synthetic corpora for benchmarks and end-to-end runs.
//!
//! Fields differ in how often their papers mention AI terms and in how many of
//! their title tasks overlap the AI task list, so direct and potential scores
//! come apart. Adoption grows with the year.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{PaperRecord, PatentRecord, ReferenceStub, SyllabusRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub seed: u64,
    pub years: (i32, i32),
    pub papers_per_cell: usize,
    pub authors_per_discipline: usize,
    pub syllabi: usize,
    pub patents: usize,
    pub patent_years: (i32, i32),
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            seed: 7,
            years: (2000, 2019),
            papers_per_cell: 15,
            authors_per_discipline: 40,
            syllabi: 400,
            patents: 600,
            patent_years: (1990, 2019),
        }
    }
}

struct FieldDef {
    id: &'static str,
    parent: &'static str,
    /// chance a paper mentions AI terms at the end of the period
    affinity: f64,
    /// chance a title task is drawn from the AI task list
    overlap: f64,
    tasks: &'static [(&'static str, &'static str)],
    contexts: &'static [&'static str],
}

const CS: &str = "computer science";

const AI_TASKS: &[(&str, &str)] = &[
    ("Classifying", "images"),
    ("Detecting", "objects"),
    ("Learning", "representations"),
    ("Recognizing", "speech"),
    ("Extracting", "features"),
    ("Segmenting", "images"),
    ("Generating", "text"),
    ("Optimizing", "policies"),
    ("Predicting", "outcomes"),
    ("Improving", "predictions"),
];

const FIELDS: &[FieldDef] = &[
    FieldDef {
        id: "machine learning",
        parent: CS,
        affinity: 1.0,
        overlap: 0.9,
        tasks: &[("Estimating", "parameters"), ("Clustering", "graphs")],
        contexts: &["benchmark data", "large scale"],
    },
    FieldDef {
        id: "artificial intelligence",
        parent: CS,
        affinity: 1.0,
        overlap: 0.85,
        tasks: &[("Planning", "actions"), ("Answering", "queries")],
        contexts: &["autonomous agents", "game playing"],
    },
    FieldDef {
        id: "computer vision",
        parent: CS,
        affinity: 1.0,
        overlap: 0.9,
        tasks: &[("Reconstructing", "scenes"), ("Tracking", "trajectories")],
        contexts: &["video streams", "street scenes"],
    },
    FieldDef {
        id: "natural language processing",
        parent: CS,
        affinity: 1.0,
        overlap: 0.85,
        tasks: &[("Translating", "sentences"), ("Summarizing", "documents")],
        contexts: &["news articles", "social media"],
    },
    FieldDef {
        id: "pattern recognition",
        parent: CS,
        affinity: 1.0,
        overlap: 0.9,
        tasks: &[("Matching", "patterns"), ("Ranking", "candidates")],
        contexts: &["handwritten digits", "biometric data"],
    },
    FieldDef {
        id: "data mining",
        parent: CS,
        affinity: 0.7,
        overlap: 0.6,
        tasks: &[("Mining", "rules"), ("Indexing", "records"), ("Ranking", "items")],
        contexts: &["transaction logs", "web data"],
    },
    FieldDef {
        id: "databases",
        parent: CS,
        affinity: 0.25,
        overlap: 0.25,
        tasks: &[("Indexing", "records"), ("Answering", "queries"), ("Storing", "tables")],
        contexts: &["distributed systems", "cloud storage"],
    },
    FieldDef {
        id: "biological system",
        parent: "biology",
        affinity: 0.55,
        overlap: 0.5,
        tasks: &[
            ("Modeling", "pathways"),
            ("Predicting", "structures"),
            ("Measuring", "responses"),
        ],
        contexts: &["yeast cells", "signaling networks"],
    },
    FieldDef {
        id: "genetics",
        parent: "biology",
        affinity: 0.35,
        overlap: 0.3,
        tasks: &[
            ("Identifying", "genes"),
            ("Mapping", "variants"),
            ("Measuring", "expression"),
        ],
        contexts: &["human populations", "model organisms"],
    },
    FieldDef {
        id: "ecology",
        parent: "biology",
        affinity: 0.15,
        overlap: 0.15,
        tasks: &[
            ("Monitoring", "species"),
            ("Estimating", "abundance"),
            ("Measuring", "growth"),
        ],
        contexts: &["tropical forests", "coastal wetlands"],
    },
    FieldDef {
        id: "optics",
        parent: "physics",
        affinity: 0.2,
        overlap: 0.2,
        tasks: &[
            ("Measuring", "spectra"),
            ("Designing", "lenses"),
            ("Controlling", "beams"),
        ],
        contexts: &["fiber lasers", "thin films"],
    },
    FieldDef {
        id: "condensed matter physics",
        parent: "physics",
        affinity: 0.25,
        overlap: 0.12,
        tasks: &[
            ("Simulating", "materials"),
            ("Characterizing", "phases"),
            ("Measuring", "conductivity"),
        ],
        contexts: &["layered crystals", "low temperature"],
    },
    FieldDef {
        id: "seismology",
        parent: "geology",
        affinity: 0.3,
        overlap: 0.35,
        tasks: &[
            ("Locating", "earthquakes"),
            ("Detecting", "tremors"),
            ("Imaging", "faults"),
        ],
        contexts: &["subduction zones", "dense arrays"],
    },
    FieldDef {
        id: "mineralogy",
        parent: "geology",
        affinity: 0.05,
        overlap: 0.08,
        tasks: &[
            ("Characterizing", "minerals"),
            ("Dating", "rocks"),
            ("Measuring", "composition"),
        ],
        contexts: &["volcanic rocks", "ore deposits"],
    },
    FieldDef {
        id: "econometrics",
        parent: "economics",
        affinity: 0.2,
        overlap: 0.25,
        tasks: &[
            ("Estimating", "effects"),
            ("Testing", "hypotheses"),
            ("Forecasting", "inflation"),
        ],
        contexts: &["panel data", "emerging markets"],
    },
    FieldDef {
        id: "finance",
        parent: "economics",
        affinity: 0.15,
        overlap: 0.2,
        tasks: &[
            ("Pricing", "options"),
            ("Forecasting", "returns"),
            ("Measuring", "risk"),
        ],
        contexts: &["stock markets", "bank lending"],
    },
    FieldDef {
        id: "demography",
        parent: "sociology",
        affinity: 0.05,
        overlap: 0.05,
        tasks: &[
            ("Measuring", "fertility"),
            ("Projecting", "populations"),
            ("Comparing", "cohorts"),
        ],
        contexts: &["rural regions", "census data"],
    },
];

const AI_FIELDS: &[&str] = &[
    "machine learning",
    "artificial intelligence",
    "computer vision",
    "natural language processing",
    "pattern recognition",
];

const EARLY_TERMS: &[&str] = &[
    "support vector machine",
    "neural network",
    "hidden markov model",
    "genetic algorithm",
    "decision tree",
];

const LATE_TERMS: &[&str] = &[
    "deep learning",
    "convolutional neural network",
    "random forest",
    "reinforcement learning",
    "generative adversarial network",
    "machine learning",
];

const ADJECTIVES: &[&str] = &[
    "robust",
    "accurate",
    "efficient",
    "novel",
    "large",
    "small",
    "complex",
    "dynamic",
];

const SURNAMES: &[&str] = &[
    "smith", "garcia", "chen", "kim", "patel", "mueller", "rossi", "silva", "novak", "tanaka", "okafor", "haddad",
    "larsen", "dubois", "ivanova", "cohen", "singh", "nguyen", "murphy", "kowalski",
];

const PATENT_TASKS: &[(&str, &str)] = &[
    ("manufacturing", "devices"),
    ("cooling", "engines"),
    ("storing", "energy"),
    ("coating", "surfaces"),
    ("sealing", "containers"),
];

struct DisciplineDef {
    id: &'static str,
    syllabus_name: &'static str,
    cip: Option<&'static str>,
    survey_name: &'static str,
}

const DISCIPLINES: &[DisciplineDef] = &[
    DisciplineDef {
        id: "biology",
        syllabus_name: "Biology",
        cip: Some("26"),
        survey_name: "Biological sciences",
    },
    DisciplineDef {
        id: CS,
        syllabus_name: "Computer Science",
        cip: Some("11"),
        survey_name: "Computer and information sciences",
    },
    DisciplineDef {
        id: "economics",
        syllabus_name: "Economics",
        cip: Some("52"),
        survey_name: "Economics",
    },
    DisciplineDef {
        id: "geology",
        syllabus_name: "Geology",
        cip: None,
        survey_name: "Earth sciences",
    },
    DisciplineDef {
        id: "physics",
        syllabus_name: "Physics",
        cip: None,
        survey_name: "Physics and astronomy",
    },
    DisciplineDef {
        id: "sociology",
        syllabus_name: "Sociology",
        cip: None,
        survey_name: "Sociology and demography",
    },
];

const RACES: &[(&str, f64)] = &[
    ("white", 0.55),
    ("asian", 0.25),
    ("black", 0.07),
    ("hispanic_latino", 0.08),
    ("american_indian_alaska_native", 0.01),
    ("other_urm", 0.04),
];

/// A generated corpus plus every side table the pipeline reads.
#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub taxonomy_json: String,
    pub papers: Vec<PaperRecord>,
    pub patents: Vec<PatentRecord>,
    pub syllabi: Vec<SyllabusRecord>,
    /// (author, gender, race); empty means unlabeled
    pub author_labels: Vec<(String, String, String)>,
    /// (survey discipline, group, count)
    pub demographics: Vec<(String, String, f64)>,
    pub syllabus_names: Vec<(String, String)>,
    pub syllabus_cips: Vec<(String, String)>,
    pub survey_names: Vec<(String, String)>,
    pub from_year: i32,
    pub to_year: i32,
    pub seed: u64,
}

fn progress(year: i32, years: (i32, i32)) -> f64 {
    let span = (years.1 - years.0).max(1) as f64;
    ((year - years.0) as f64 / span).clamp(0.0, 1.0)
}

fn pick_term(rng: &mut ChaCha8Rng, t: f64) -> &'static str {
    let early = (1.4 - t).max(0.1);
    let late = 0.15 + 2.0 * t * t;
    if rng.gen::<f64>() < early / (early + late) {
        EARLY_TERMS.choose(rng).unwrap()
    } else {
        LATE_TERMS.choose(rng).unwrap()
    }
}

fn discipline_affinity(d: &str) -> f64 {
    let fs: Vec<f64> = FIELDS.iter().filter(|f| f.parent == d).map(|f| f.affinity).collect();
    fs.iter().sum::<f64>() / fs.len().max(1) as f64
}

fn author_id(d: usize, k: usize) -> String {
    format!("a{d}{k:03}")
}

fn surname_of(author: &str) -> &'static str {
    let h = crate::corpus::authors::fnv1a64(author);
    SURNAMES[(h % SURNAMES.len() as u64) as usize]
}

pub fn generate(spec: &SynthSpec) -> SynthCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let disc_index = |d: &str| DISCIPLINES.iter().position(|x| x.id == d).unwrap();
    let pool = |d: usize| {
        if DISCIPLINES[d].id == CS {
            2 * spec.authors_per_discipline
        } else {
            spec.authors_per_discipline
        }
    };
    // the first third of the CS pool works on AI
    let cs = disc_index(CS);
    let ai_specialists = pool(cs) / 3;

    let mut papers: Vec<PaperRecord> = Vec::new();
    let mut ai_using: Vec<bool> = Vec::new();
    for year in spec.years.0..=spec.years.1 {
        let t = progress(year, spec.years);
        for (fi, f) in FIELDS.iter().enumerate() {
            let d = disc_index(f.parent);
            let is_ai_field = AI_FIELDS.contains(&f.id);
            for k in 0..spec.papers_per_cell {
                let uses_ai = is_ai_field || rng.gen::<f64>() < f.affinity * (0.1 + 0.9 * t * t);
                let (verb, noun) = if rng.gen::<f64>() < f.overlap {
                    *AI_TASKS.choose(&mut rng).unwrap()
                } else {
                    *f.tasks.choose(&mut rng).unwrap()
                };
                let adj = ADJECTIVES.choose(&mut rng).unwrap();
                let context = f.contexts.choose(&mut rng).unwrap();
                let term = pick_term(&mut rng, t);
                let title = if uses_ai && !is_ai_field && rng.gen::<f64>() < 0.4 {
                    format!("{verb} {adj} {noun} with {term}")
                } else {
                    format!("{verb} {adj} {noun} in {context}")
                };
                let verb_lc = verb.to_lowercase();
                let abstract_text = if uses_ai {
                    let second = pick_term(&mut rng, t);
                    format!(
                        "We study {context}. Our approach combines {term} and {second} for {verb_lc} {noun}. Results are reported."
                    )
                } else {
                    format!("We study {context}. Our approach relies on {verb_lc} {noun}. Results are reported.")
                };

                let n_auth = rng.gen_range(1..=4);
                let mut authors: Vec<String> = Vec::new();
                for _ in 0..n_auth {
                    let a = if is_ai_field {
                        author_id(cs, rng.gen_range(0..ai_specialists))
                    } else if d == cs {
                        author_id(cs, rng.gen_range(ai_specialists..pool(cs)))
                    } else if rng.gen::<f64>() < 0.05 {
                        let other = rng.gen_range(0..DISCIPLINES.len());
                        author_id(other, rng.gen_range(0..pool(other)))
                    } else {
                        author_id(d, rng.gen_range(0..pool(d)))
                    };
                    if !authors.contains(&a) {
                        authors.push(a);
                    }
                }
                if uses_ai && d != cs && authors.len() > 1 && rng.gen::<f64>() < 0.2 + 0.6 * f.affinity {
                    let last = authors.len() - 1;
                    let a = author_id(cs, rng.gen_range(0..ai_specialists));
                    if !authors.contains(&a) {
                        authors[last] = a;
                    }
                }
                let id = format!("p{year}-{fi:02}-{k:03}");
                papers.push(PaperRecord {
                    doi: Some(format!("10.5555/{id}")),
                    first_author_last_name: Some(surname_of(&authors[0]).to_string()),
                    id,
                    year,
                    title,
                    abstract_text,
                    discipline: f.parent.to_string(),
                    field: f.id.to_string(),
                    authors,
                    references: Vec::new(),
                    vn_pairs: None,
                });
                ai_using.push(uses_ai);
            }
        }
    }

    // citations go to earlier years, mostly within the field, favouring AI-using papers
    let per_year = FIELDS.len() * spec.papers_per_cell;
    let cell =
        |year: i32, fi: usize, k: usize| ((year - spec.years.0) as usize) * per_year + fi * spec.papers_per_cell + k;
    for i in 0..papers.len() {
        let year = papers[i].year;
        if year == spec.years.0 || spec.papers_per_cell == 0 {
            continue;
        }
        let fi = FIELDS.iter().position(|f| f.id == papers[i].field).unwrap();
        let n_refs = rng.gen_range(3..=8);
        let mut refs: Vec<String> = Vec::new();
        for _ in 0..n_refs {
            let draw = |rng: &mut ChaCha8Rng| {
                let y = rng.gen_range(spec.years.0..year);
                let f = if rng.gen::<f64>() < 0.6 {
                    fi
                } else {
                    rng.gen_range(0..FIELDS.len())
                };
                cell(y, f, rng.gen_range(0..spec.papers_per_cell))
            };
            let a = draw(&mut rng);
            let b = draw(&mut rng);
            let j = if ai_using[b] && !ai_using[a] && rng.gen::<f64>() < 0.6 {
                b
            } else {
                a
            };
            refs.push(papers[j].id.clone());
        }
        if rng.gen::<f64>() < 0.1 {
            refs.push(format!("ext-{}", rng.gen_range(0..1000)));
        }
        refs.sort();
        refs.dedup();
        papers[i].references = refs;
    }

    let mut patents = Vec::new();
    for n in 0..spec.patents {
        let year = rng.gen_range(spec.patent_years.0..=spec.patent_years.1);
        let t = progress(year, spec.patent_years);
        let is_ai = rng.gen::<f64>() < 0.15 + 0.5 * t;
        let (verb, noun) = if is_ai {
            *AI_TASKS.choose(&mut rng).unwrap()
        } else {
            *PATENT_TASKS.choose(&mut rng).unwrap()
        };
        let verb = verb.to_lowercase();
        let (title, cpc) = if is_ai && rng.gen::<f64>() < 0.25 {
            (
                format!("Method for {verb} {noun} with a neural network"),
                vec!["G06F17/10".to_string()],
            )
        } else if is_ai {
            (format!("Method for {verb} {noun}"), vec!["G06N3/08".to_string()])
        } else {
            (format!("Apparatus for {verb} {noun}"), vec!["F28D1/02".to_string()])
        };
        patents.push(PatentRecord {
            id: format!("US{:07}", 5_000_000 + n),
            year,
            title,
            cpc_codes: cpc,
            vn_pairs: None,
        });
    }

    let mut syllabi = Vec::new();
    let last_syllabus_year = spec.years.1.min(2018);
    for s in 0..spec.syllabi {
        let d = rng.gen_range(0..DISCIPLINES.len());
        let def = &DISCIPLINES[d];
        let year = rng.gen_range(spec.years.0 + 1..=last_syllabus_year.max(spec.years.0 + 1));
        let (field_name, cip_code) = match rng.gen_range(0..20) {
            0 => (Some("General Studies".to_string()), None),
            1..=3 if def.cip.is_some() => (None, def.cip.map(|c| format!("{c}.0101"))),
            _ => (Some(def.syllabus_name.to_string()), None),
        };
        let own: Vec<usize> = FIELDS
            .iter()
            .enumerate()
            .filter(|(_, f)| f.parent == def.id)
            .map(|(i, _)| i)
            .collect();
        let p_ai = 0.03 + 0.35 * discipline_affinity(def.id);
        let mut references = Vec::new();
        for _ in 0..rng.gen_range(0..=14) {
            let y = rng.gen_range(spec.years.0..year);
            let f = if rng.gen::<f64>() < p_ai {
                let target = *AI_FIELDS.choose(&mut rng).unwrap();
                FIELDS.iter().position(|f| f.id == target).unwrap()
            } else {
                *own.choose(&mut rng).unwrap()
            };
            let p = &papers[cell(y, f, rng.gen_range(0..spec.papers_per_cell.max(1)))];
            let stub = match rng.gen_range(0..20) {
                0 => ReferenceStub {
                    title: Some(p.title.clone()),
                    ..ReferenceStub::default()
                },
                1..=4 => ReferenceStub {
                    title: Some(p.title.to_uppercase()),
                    first_author_last_name: p.first_author_last_name.clone(),
                    year: Some(p.year),
                    ..ReferenceStub::default()
                },
                _ => ReferenceStub {
                    doi: p.doi.as_ref().map(|d| format!("https://doi.org/{d}")),
                    first_author_last_name: p.first_author_last_name.clone(),
                    ..ReferenceStub::default()
                },
            };
            references.push(stub);
        }
        syllabi.push(SyllabusRecord {
            id: format!("s{s:04}"),
            year,
            field_name,
            cip_code,
            references,
        });
    }

    let mut author_labels = Vec::new();
    let mut demographics = Vec::new();
    for (d, def) in DISCIPLINES.iter().enumerate() {
        let aff = discipline_affinity(def.id);
        let p_woman = 0.5 - 0.3 * aff;
        let urm_scale = 1.3 - 0.8 * aff;
        let race_weights: Vec<f64> = RACES
            .iter()
            .map(|(r, w)| {
                if ["black", "hispanic_latino", "american_indian_alaska_native", "other_urm"].contains(r) {
                    w * urm_scale
                } else {
                    *w
                }
            })
            .collect();
        let total_w: f64 = race_weights.iter().sum();
        for k in 0..pool(d) {
            let gender = match rng.gen::<f64>() {
                x if x < 0.1 => "",
                x if x < 0.1 + 0.9 * p_woman => "woman",
                _ => "man",
            };
            let race = if rng.gen::<f64>() < 0.1 {
                ""
            } else {
                let mut x = rng.gen::<f64>() * total_w;
                let mut chosen = RACES[0].0;
                for (i, (r, _)) in RACES.iter().enumerate() {
                    if x < race_weights[i] {
                        chosen = r;
                        break;
                    }
                    x -= race_weights[i];
                }
                chosen
            };
            author_labels.push((author_id(d, k), gender.to_string(), race.to_string()));
        }
        let scientists = 20_000.0 + 1000.0 * d as f64;
        demographics.push((
            def.survey_name.to_string(),
            "woman".to_string(),
            (scientists * p_woman).round(),
        ));
        demographics.push((
            def.survey_name.to_string(),
            "man".to_string(),
            (scientists * (1.0 - p_woman)).round(),
        ));
        for (i, (r, _)) in RACES.iter().enumerate() {
            demographics.push((
                def.survey_name.to_string(),
                r.to_string(),
                (scientists * race_weights[i] / total_w).round(),
            ));
        }
    }
    demographics.push(("Other sciences".to_string(), "woman".to_string(), 100.0));

    let taxonomy = serde_json::json!({
        "disciplines": DISCIPLINES.iter().map(|d| d.id).collect::<Vec<_>>(),
        "fields": FIELDS.iter().map(|f| serde_json::json!({"id": f.id, "parent": f.parent})).collect::<Vec<_>>(),
        "ai_fields": AI_FIELDS,
        "extended_ai_fields": AI_FIELDS.iter().copied().chain(["data mining"]).collect::<Vec<_>>(),
        "ai_concept_terms": EARLY_TERMS.iter().chain(LATE_TERMS).copied().chain(["data set"]).collect::<Vec<_>>(),
        "ngram_blocklist": ["data set"],
        "cs_discipline": CS,
    });

    SynthCorpus {
        taxonomy_json: serde_json::to_string_pretty(&taxonomy).expect("static taxonomy serializes"),
        papers,
        patents,
        syllabi,
        author_labels,
        demographics,
        syllabus_names: DISCIPLINES
            .iter()
            .map(|d| (d.syllabus_name.to_string(), d.id.to_string()))
            .collect(),
        syllabus_cips: DISCIPLINES
            .iter()
            .filter_map(|d| d.cip.map(|c| (c.to_string(), d.id.to_string())))
            .collect(),
        survey_names: DISCIPLINES
            .iter()
            .map(|d| (d.survey_name.to_string(), d.id.to_string()))
            .collect(),
        // the first corpus year only supplies AI history for the next one
        from_year: spec.years.0 + 1,
        to_year: spec.years.1,
        seed: spec.seed,
    }
}

fn write_jsonl<T: serde::Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

impl SynthCorpus {
    /// Writes every input file plus `sciai.toml` into `dir`; returns the config path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        fs::write(dir.join("taxonomy.json"), &self.taxonomy_json).map_err(|e| Error::io(dir, e))?;
        write_jsonl(&dir.join("papers.jsonl"), &self.papers)?;
        write_jsonl(&dir.join("patents.jsonl"), &self.patents)?;
        write_jsonl(&dir.join("syllabi.jsonl"), &self.syllabi)?;
        write_csv(
            &dir.join("authors.csv"),
            &["author_id", "gender", "race"],
            self.author_labels
                .iter()
                .map(|(a, g, r)| vec![a.clone(), g.clone(), r.clone()]),
        )?;
        write_csv(
            &dir.join("demographics.csv"),
            &["discipline", "group", "count"],
            self.demographics
                .iter()
                .map(|(d, g, c)| vec![d.clone(), g.clone(), c.to_string()]),
        )?;
        let pairs = |v: &[(String, String)]| v.iter().map(|(a, b)| vec![a.clone(), b.clone()]).collect::<Vec<_>>();
        write_csv(
            &dir.join("syllabus_names.csv"),
            &["source_key", "discipline"],
            pairs(&self.syllabus_names),
        )?;
        write_csv(
            &dir.join("syllabus_cips.csv"),
            &["source_key", "discipline"],
            pairs(&self.syllabus_cips),
        )?;
        write_csv(
            &dir.join("survey_names.csv"),
            &["source_key", "discipline"],
            pairs(&self.survey_names),
        )?;

        let config = dir.join("sciai.toml");
        let mut f = fs::File::create(&config).map_err(|e| Error::io(&config, e))?;
        write!(
            f,
            r#"[inputs]
papers = "papers.jsonl"
taxonomy = "taxonomy.json"
patents = "patents.jsonl"
syllabi = "syllabi.jsonl"
syllabus_name_crosswalk = "syllabus_names.csv"
syllabus_cip_crosswalk = "syllabus_cips.csv"
author_labels = "authors.csv"
demographics = "demographics.csv"
demographics_crosswalk = "survey_names.csv"

[run]
from_year = {from}
to_year = {to}
seed = {seed}
out = "out"

[ai]
mode = "five_fields"
patent_cpc_codes = ["G06N"]
patent_phrases = ["neural network", "machine learning"]

[scoring]
freeze_year = {freeze}

[analysis]
grouping_years = [{from}, {to}]
"#,
            from = self.from_year,
            to = self.to_year,
            seed = self.seed,
            freeze = (self.from_year + self.to_year) / 2,
        )
        .map_err(|e| Error::io(&config, e))?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tasks::{extract_verb_noun_pairs, ExtractOptions, VerbNounPair};
    use crate::text::Normalizer;

    #[test]
    fn same_seed_same_corpus() {
        let spec = SynthSpec {
            papers_per_cell: 2,
            syllabi: 10,
            patents: 10,
            ..SynthSpec::default()
        };
        let a = generate(&spec);
        let b = generate(&spec);
        assert_eq!(a.papers, b.papers);
        assert_eq!(a.syllabi, b.syllabi);
        assert_eq!(a.papers.len(), FIELDS.len() * 20 * 2);
        let c = generate(&SynthSpec { seed: 8, ..spec });
        assert_ne!(a.papers, c.papers);
    }

    #[test]
    fn every_title_task_is_extracted() {
        let norm = Normalizer::default();
        let opts = ExtractOptions::default();
        let tasks = AI_TASKS.iter().chain(FIELDS.iter().flat_map(|f| f.tasks.iter()));
        let mut bad = Vec::new();
        for (verb, noun) in tasks {
            for tail in ["in panel data", "with deep learning"] {
                let title = format!("{verb} robust {noun} {tail}");
                let pairs = extract_verb_noun_pairs(&norm, &title, &opts);
                let want = VerbNounPair::new(norm.lemmas(verb).join(" "), norm.lemmas(noun).join(" "));
                if pairs != vec![want.clone()] {
                    bad.push(format!("{title}: {pairs:?}"));
                }
            }
        }
        assert!(bad.is_empty(), "{bad:#?}");
        for (verb, noun) in AI_TASKS.iter().chain(PATENT_TASKS) {
            let title = format!("Method for {} {noun}", verb.to_lowercase());
            assert_eq!(extract_verb_noun_pairs(&norm, &title, &opts).len(), 1, "{title}");
        }
    }

    #[test]
    fn concept_terms_normalize() {
        let norm = Normalizer::default();
        for t in EARLY_TERMS.iter().chain(LATE_TERMS) {
            let g = norm.phrase_ngram(t).unwrap();
            let abs = format!("Our approach combines {t} and more.");
            assert!(norm.ngrams(&abs).contains(&g), "{t}");
        }
    }
}
