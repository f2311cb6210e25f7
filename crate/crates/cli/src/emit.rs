use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use sciai_core::{Error, Result};

/// Shortest round-trip decimal; negative zero prints as `0`.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

/// Nulls are empty cells.
pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `bytes` next to `path` and renames it into place, so readers never
/// see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Output tables of one run, with their checksums.
#[derive(Debug)]
pub struct Emitter {
    out: PathBuf,
    checksums: BTreeMap<String, String>,
    rows: BTreeMap<String, usize>,
}

impl Emitter {
    pub fn new(out: &Path) -> Self {
        Emitter {
            out: out.to_path_buf(),
            checksums: BTreeMap::new(),
            rows: BTreeMap::new(),
        }
    }

    pub fn out_dir(&self) -> &Path {
        &self.out
    }

    pub fn csv<I>(&mut self, rel: &str, header: &[&str], rows: I) -> Result<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(header)?;
        let mut n = 0;
        for r in rows {
            debug_assert_eq!(r.len(), header.len(), "{rel}");
            w.write_record(&r)?;
            n += 1;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Internal(format!("csv buffer for {rel}: {e}")))?;
        self.rows.insert(rel.to_string(), n);
        self.file(rel, &bytes)
    }

    pub fn json<T: serde::Serialize>(&mut self, rel: &str, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.file(rel, &bytes)
    }

    /// Writes a file and records its checksum.
    pub fn file(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        write_atomic(&self.out.join(rel), bytes)?;
        self.checksums.insert(rel.to_string(), sha256_hex(bytes));
        Ok(())
    }

    pub fn checksums(&self) -> &BTreeMap<String, String> {
        &self.checksums
    }

    pub fn row_counts(&self) -> &BTreeMap<String, usize> {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_and_writes() {
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(0.1), "0.1");
        assert_eq!(opt(None), "");
        let dir = tempfile::tempdir().unwrap();
        let mut e = Emitter::new(dir.path());
        e.csv("a/t.csv", &["x", "y"], vec![vec!["1".into(), "".into()]])
            .unwrap();
        assert_eq!(fs::read_to_string(dir.path().join("a/t.csv")).unwrap(), "x,y\n1,\n");
        e.csv("empty.csv", &["x"], Vec::<Vec<String>>::new()).unwrap();
        assert_eq!(fs::read_to_string(dir.path().join("empty.csv")).unwrap(), "x\n");
        assert_eq!(e.checksums().len(), 2);
        assert_eq!(e.row_counts()["empty.csv"], 0);
    }
}
