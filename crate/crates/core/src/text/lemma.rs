//! Rule-based English lemmatizer.
//!
//! Lookup order: exception table, then suffix rules. The result is iterated to
//! a fixed point so that `lemmatize(lemmatize(w)) == lemmatize(w)`.

use std::collections::HashMap;
use std::path::Path;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

const DEFAULT_EXCEPTIONS: &str = include_str!("data/lemma_exceptions_v1.csv");

/// Version tag of the bundled exception table.
pub const LEMMA_TABLE_VERSION: &str = "v1";

const MAX_STEPS: usize = 16;

#[derive(Debug, Clone)]
pub struct Lemmatizer {
    exceptions: HashMap<String, String>,
}

impl Default for Lemmatizer {
    fn default() -> Self {
        let exceptions =
            parse_exceptions(DEFAULT_EXCEPTIONS, "<bundled>").expect("bundled lemma exception table parses");
        Lemmatizer { exceptions }
    }
}

impl Lemmatizer {
    /// Bundled table extended (and overridden) by `surface,lemma` rows from `path`.
    pub fn with_exceptions_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lem = Lemmatizer::default();
        let extra = parse_exceptions(&text, &path.display().to_string())?;
        lem.exceptions.extend(extra);
        Ok(lem)
    }

    pub fn exceptions(&self) -> impl Iterator<Item = (&str, &str)> {
        self.exceptions.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn lemmatize(&self, token: &str) -> String {
        let mut cur = fold(token);
        for _ in 0..MAX_STEPS {
            match self.step(&cur) {
                Some(next) if next != cur && !next.is_empty() => cur = next,
                _ => break,
            }
        }
        cur
    }

    fn step(&self, w: &str) -> Option<String> {
        if let Some(e) = self.exceptions.get(w) {
            return Some(e.clone());
        }
        if !w.bytes().all(|b| b.is_ascii_lowercase()) {
            return None;
        }
        suffix_rule(w)
    }
}

fn parse_exceptions(text: &str, origin: &str) -> Result<HashMap<String, String>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut map = HashMap::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let (Some(surface), Some(lemma)) = (row.get(0), row.get(1)) else {
            return Err(Error::Data(format!("{origin}: row {} needs surface,lemma", i + 2)));
        };
        if surface.is_empty() || lemma.is_empty() {
            return Err(Error::Data(format!("{origin}: row {} has an empty cell", i + 2)));
        }
        map.insert(fold(surface), fold(lemma));
    }
    Ok(map)
}

/// Lowercase and strip diacritics.
pub fn fold(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.nfd() {
        if is_combining_mark(c) {
            continue;
        }
        match c {
            'ß' => out.push_str("ss"),
            'æ' | 'Æ' => out.push_str("ae"),
            'œ' | 'Œ' => out.push_str("oe"),
            'ø' | 'Ø' => out.push('o'),
            'ł' | 'Ł' => out.push('l'),
            'đ' | 'Đ' => out.push('d'),
            'ı' => out.push('i'),
            _ => out.extend(c.to_lowercase()),
        }
    }
    out
}

fn is_vowel_at(w: &[u8], i: usize) -> bool {
    match w[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => true,
        b'y' => i > 0 && !is_vowel_at(w, i - 1),
        _ => false,
    }
}

fn has_vowel(w: &str) -> bool {
    let b = w.as_bytes();
    (0..b.len()).any(|i| is_vowel_at(b, i))
}

/// Number of vowel-consonant sequences, the classic stem measure.
fn measure(w: &str) -> usize {
    let b = w.as_bytes();
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..b.len() {
        let v = is_vowel_at(b, i);
        if prev_vowel && !v {
            m += 1;
        }
        prev_vowel = v;
    }
    m
}

fn vowel_groups(w: &str) -> usize {
    let b = w.as_bytes();
    let mut n = 0;
    let mut prev = false;
    for i in 0..b.len() {
        let v = is_vowel_at(b, i);
        if v && !prev {
            n += 1;
        }
        prev = v;
    }
    n
}

fn is_consonant_at(w: &[u8], i: usize) -> bool {
    !is_vowel_at(w, i)
}

fn ends_cvc(w: &str) -> bool {
    let b = w.as_bytes();
    let n = b.len();
    n >= 3
        && is_consonant_at(b, n - 3)
        && is_vowel_at(b, n - 2)
        && is_consonant_at(b, n - 1)
        && !matches!(b[n - 1], b'w' | b'x' | b'y')
}

fn ends_double_consonant(w: &str) -> bool {
    let b = w.as_bytes();
    let n = b.len();
    n >= 2 && b[n - 1] == b[n - 2] && is_consonant_at(b, n - 1)
}

/// Letter before the last `k` letters, if it is a consonant.
fn consonant_before(w: &str, k: usize) -> bool {
    let b = w.as_bytes();
    b.len() > k && is_consonant_at(b, b.len() - k - 1)
}

/// Rebuild a verb base after `-ing` / `-ed` removal.
fn restore_stem(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if ends_double_consonant(stem) {
        let last = b[n - 1];
        if matches!(last, b's' | b'z' | b'f') {
            return stem.to_string();
        }
        if last == b'l' && vowel_groups(stem) < 2 {
            return stem.to_string();
        }
        return stem[..n - 1].to_string();
    }
    let with_e = || format!("{stem}e");
    let ends = |s: &str| stem.ends_with(s);

    if ends("at") && !(ends("eat") || ends("oat") || ends("aat")) {
        return with_e();
    }
    if ends("iz") || ends("yz") || (ends("is") && n > 3) || (ends("ys") && n > 3) {
        return with_e();
    }
    if ends("ut") && consonant_before(stem, 2) {
        return with_e();
    }
    if n >= 2
        && b[n - 1] == b'l'
        && matches!(
            b[n - 2],
            b'b' | b'c' | b'd' | b'f' | b'g' | b'k' | b'p' | b's' | b't' | b'z'
        )
    {
        return with_e();
    }
    if matches!(b[n - 1], b'c' | b'v' | b'u') {
        return with_e();
    }
    if ends("rg") || ends("dg") || ends("ur") || ends("quir") || ends("crib") || ends("com") || ends("sum") {
        return with_e();
    }
    if (ends("ar")
        || ends("ir")
        || ends("ad")
        || ends("id")
        || ends("ud")
        || ends("od")
        || ends("ok")
        || ends("os")
        || ends("ag")
        || ends("in")
        || ends("ul"))
        && consonant_before(stem, 2)
    {
        return with_e();
    }
    if ends("plet") || ends("elet") {
        return with_e();
    }
    if n >= 3 && b[n - 1] == b's' && is_vowel_at(b, n - 2) && is_vowel_at(b, n - 3) {
        return with_e();
    }
    if n >= 2 && b[n - 1] == b'z' && is_vowel_at(b, n - 2) {
        return with_e();
    }
    if measure(stem) == 1 && ends_cvc(stem) {
        return with_e();
    }
    stem.to_string()
}

fn suffix_rule(w: &str) -> Option<String> {
    let n = w.len();

    if n >= 5 && w.ends_with("ing") {
        let stem = &w[..n - 3];
        if has_vowel(stem) {
            return Some(restore_stem(stem));
        }
        return None;
    }
    if n >= 4 && w.ends_with("ied") {
        return Some(if n > 4 {
            format!("{}y", &w[..n - 3])
        } else {
            w[..n - 1].to_string()
        });
    }
    if n >= 4 && w.ends_with("ed") && !w.ends_with("eed") {
        let stem = &w[..n - 2];
        if has_vowel(stem) {
            return Some(restore_stem(stem));
        }
        return None;
    }
    if n >= 6 && w.ends_with("iest") {
        return Some(format!("{}y", &w[..n - 4]));
    }
    if n >= 6 && w.ends_with("est") && ends_double_consonant(&w[..n - 3]) {
        return Some(w[..n - 4].to_string());
    }
    if w.ends_with("ies") && n >= 4 {
        return Some(if n >= 5 {
            format!("{}y", &w[..n - 3])
        } else {
            w[..n - 1].to_string()
        });
    }
    if w.ends_with("sses") || w.ends_with("ches") || w.ends_with("shes") || w.ends_with("xes") || w.ends_with("zzes") {
        return Some(w[..n - 2].to_string());
    }
    if n >= 4 && w.ends_with('s') && !(w.ends_with("ss") || w.ends_with("us") || w.ends_with("is")) {
        return Some(w[..n - 1].to_string());
    }
    None
}
