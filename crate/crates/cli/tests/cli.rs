use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sciai(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sciai"))
        .args(args)
        .current_dir(cwd)
        .env("RUST_LOG", "error")
        .output()
        .unwrap()
}

fn golden_inputs(dir: &Path) {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden");
    for f in ["papers.jsonl", "taxonomy.json", "sciai.toml"] {
        fs::copy(src.join(f), dir.join(f)).unwrap();
    }
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    golden_inputs(dir.path());

    let out = sciai(
        &[
            "run",
            "--config",
            "sciai.toml",
            "--from-year",
            "2003",
            "--to-year",
            "2001",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("from_year"));

    fs::write(
        dir.path().join("bad.toml"),
        "[inputs]\npapers = \"missing.jsonl\"\ntaxonomy = \"taxonomy.json\"\n",
    )
    .unwrap();
    let out = sciai(&["run", "--config", "bad.toml"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    fs::write(dir.path().join("typo.toml"), "[run]\nshardz = 3\n").unwrap();
    assert_eq!(
        sciai(&["run", "--config", "typo.toml"], dir.path()).status.code(),
        Some(1)
    );

    let out = sciai(
        &["run", "--config", "sciai.toml", "--direct-measure", "cosine"],
        dir.path(),
    );
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn data_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    golden_inputs(dir.path());
    // one malformed line in fourteen is over the default 1% budget
    let mut papers = fs::read_to_string(dir.path().join("papers.jsonl")).unwrap();
    papers.push_str("{broken\n");
    fs::write(dir.path().join("papers.jsonl"), papers).unwrap();
    let out = sciai(&["ingest", "--config", "sciai.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn effective_config_reflects_overrides() {
    let dir = tempfile::tempdir().unwrap();
    golden_inputs(dir.path());
    let out = sciai(
        &[
            "run",
            "--config",
            "sciai.toml",
            "--seed",
            "42",
            "--shards",
            "3",
            "--pooled-t",
            "--print-effective-config",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let cfg: toml::Value = toml::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(cfg["run"]["seed"].as_integer(), Some(42));
    assert_eq!(cfg["run"]["shards"].as_integer(), Some(3));
    assert_eq!(cfg["analysis"]["pooled_t"].as_bool(), Some(true));
    assert_eq!(cfg["scoring"]["freeze_year"].as_integer(), Some(2001));
    // nothing is run
    assert!(!dir.path().join("out").exists());
}

#[test]
fn stages_run_cumulatively() {
    let dir = tempfile::tempdir().unwrap();
    golden_inputs(dir.path());
    assert!(sciai(&["label", "--config", "sciai.toml"], dir.path()).status.success());
    let out = dir.path().join("out");
    assert!(out.join("labels.csv").is_file());
    assert!(!out.join("scores.csv").exists());
    let report: serde_json::Value = serde_json::from_slice(&fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["stage"], "label");

    // the second run reuses the prepared inputs
    assert!(sciai(&["score", "--config", "sciai.toml"], dir.path()).status.success());
    assert!(out.join("scores.csv").is_file());
    let meta: serde_json::Value = serde_json::from_slice(&fs::read(out.join("run_meta.json")).unwrap()).unwrap();
    assert_eq!(meta["cache_hit"], true);
}
