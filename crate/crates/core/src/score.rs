//! Grading a deidentified tree against an answer key.
//!
//! Each key row names an original instance, a tag path and the outcome
//! expected there. Results are counted per row, per instance and per series.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::fs;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::codec::{is_valid_uid, tags, CharacterSet, DataElement, DataSet, DicomObject, TagPath, Value};
use crate::profile::UidMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Remove,
    Retain,
    ReplaceDummy,
    RemapUid,
    TextRemove,
    TextRetain,
    DateAction,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Remove,
        Category::Retain,
        Category::ReplaceDummy,
        Category::RemapUid,
        Category::TextRemove,
        Category::TextRetain,
        Category::DateAction,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Remove => "remove",
            Category::Retain => "retain",
            Category::ReplaceDummy => "replace_dummy",
            Category::RemapUid => "remap_uid",
            Category::TextRemove => "text_remove",
            Category::TextRetain => "text_retain",
            Category::DateAction => "date_action",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerKeyEntry {
    /// Original SOPInstanceUID.
    pub instance: String,
    pub path: TagPath,
    pub category: Category,
    /// Fourth column: the expected value for retain categories, the
    /// original value for remap_uid and date_action, or `|` separated PHI
    /// tokens for text_remove and replace_dummy.
    pub expected: String,
}

impl AnswerKeyEntry {
    pub fn tokens(&self) -> Vec<&str> {
        self.expected.split('|').map(str::trim).filter(|t| !t.is_empty()).collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScoreError {
    #[error("answer key record {record}: {message}")]
    CsvFormat { record: usize, message: String },
    #[error("answer key record {record}: unknown category {category:?}")]
    UnknownCategory { record: usize, category: String },
    #[error("{0}")]
    Io(String),
}

const HEADER: [&str; 4] = ["original_sop_instance_uid", "tag_path", "category", "expected_or_phi_tokens"];

/// Splits one key line. Commas inside the tag path's parentheses do not
/// separate fields, so paths may be written unquoted. Other fields follow
/// the usual double-quote convention.
fn split_record(line: &str) -> Result<Vec<String>, String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut chars = line.chars().peekable();
    let mut depth = 0usize;
    let mut at_start = true;
    while let Some(c) = chars.next() {
        if at_start && c == '"' {
            at_start = false;
            loop {
                match chars.next() {
                    None => return Err("unterminated quoted field".into()),
                    Some('"') if chars.peek() == Some(&'"') => {
                        chars.next();
                        cur.push('"');
                    }
                    Some('"') => break,
                    Some(ch) => cur.push(ch),
                }
            }
            continue;
        }
        at_start = false;
        match c {
            '(' if fields.len() == 1 => {
                depth += 1;
                cur.push(c);
            }
            ')' if fields.len() == 1 => {
                depth = depth.checked_sub(1).ok_or("unbalanced parentheses in tag path")?;
                cur.push(c);
            }
            ',' if depth == 0 => {
                fields.push(std::mem::take(&mut cur));
                at_start = true;
            }
            _ => cur.push(c),
        }
    }
    if depth != 0 {
        return Err("unbalanced parentheses in tag path".into());
    }
    fields.push(cur);
    Ok(fields)
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) || field.starts_with(' ') || field.ends_with(' ') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Reads `original_sop_instance_uid,tag_path,category,expected_or_phi_tokens`.
/// The header row is optional and the last column may be omitted.
pub fn load_answer_key<R: Read>(mut reader: R) -> Result<Vec<AnswerKeyEntry>, ScoreError> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| ScoreError::CsvFormat { record: 0, message: e.to_string() })?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let record = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || (i == 0 && line.starts_with(HEADER[0])) {
            continue;
        }
        let rec = split_record(line).map_err(|message| ScoreError::CsvFormat { record, message })?;
        if !(3..=4).contains(&rec.len()) {
            return Err(ScoreError::CsvFormat { record, message: format!("expected 4 columns, got {}", rec.len()) });
        }
        let path = rec[1]
            .trim()
            .parse()
            .map_err(|e| ScoreError::CsvFormat { record, message: format!("{e}") })?;
        let category = rec[2]
            .trim()
            .parse()
            .map_err(|c| ScoreError::UnknownCategory { record, category: c })?;
        out.push(AnswerKeyEntry {
            instance: rec[0].trim().to_string(),
            path,
            category,
            expected: rec.get(3).cloned().unwrap_or_default(),
        });
    }
    Ok(out)
}

pub fn write_answer_key<W: std::io::Write>(mut w: W, key: &[AnswerKeyEntry]) -> Result<(), ScoreError> {
    let mut s = HEADER.join(",");
    s.push('\n');
    for e in key {
        let _ = writeln!(s, "{},{},{},{}", quote(&e.instance), e.path, e.category, quote(&e.expected));
    }
    w.write_all(s.as_bytes()).map_err(|e| ScoreError::Io(e.to_string()))
}

/// Deidentified objects indexed by their SOPInstanceUID.
#[derive(Debug, Default, Clone)]
pub struct OutputIndex {
    objects: HashMap<String, DataSet>,
    /// Files that could not be parsed.
    pub unreadable: Vec<String>,
}

impl OutputIndex {
    pub fn from_dir(dir: &Path) -> Result<OutputIndex, ScoreError> {
        let mut paths = Vec::new();
        for entry in walkdir::WalkDir::new(dir).sort_by_file_name() {
            let entry = entry.map_err(|e| ScoreError::Io(e.to_string()))?;
            if entry.file_type().is_file() && entry.path().extension().is_some_and(|x| x == "dcm") {
                paths.push(entry.into_path());
            }
        }
        let parsed: Vec<_> = paths
            .par_iter()
            .map(|p| (p, fs::read(p).ok().and_then(|b| DicomObject::parse(&b).ok())))
            .collect();
        let mut idx = OutputIndex::default();
        for (p, obj) in parsed {
            match obj {
                Some(o) => idx.insert(o.dataset),
                None => idx.unreadable.push(p.display().to_string()),
            }
        }
        Ok(idx)
    }

    pub fn insert(&mut self, ds: DataSet) {
        let uid = ds.string(tags::SOP_INSTANCE_UID).unwrap_or_default();
        self.objects.insert(uid, ds);
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// The output for an original instance, through the map when it has
    /// an entry and by the original UID otherwise.
    pub fn find(&self, original: &str, uids: Option<&UidMap>) -> Option<&DataSet> {
        uids.and_then(|m| m.get(original))
            .and_then(|r| self.objects.get(&r))
            .or_else(|| self.objects.get(original))
    }
}

/// All decoded text under an element, nested items included.
fn element_text(e: &DataElement, cs: &CharacterSet) -> String {
    match &e.value {
        Value::Sequence(seq) => {
            let mut parts = Vec::new();
            for item in &seq.items {
                item.dataset.walk(&mut |_, el| {
                    if !matches!(el.value, Value::Sequence(_)) {
                        if let Some(v) = el.to_strings(item.dataset.charset()) {
                            parts.push(v.join("\\"));
                        }
                    }
                });
            }
            parts.join("\n")
        }
        _ => e.to_strings(cs).map(|v| v.join("\\")).unwrap_or_default(),
    }
}

fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Judgment {
    pub entry: usize,
    pub instance: String,
    pub series: String,
    pub path: String,
    pub category: Category,
    pub passed: bool,
    pub reason: String,
}

fn judge(e: &AnswerKeyEntry, ds: &DataSet) -> (bool, String, Option<String>) {
    let elem = ds.parent(&e.path).and_then(|p| p.get(e.path.leaf).map(|el| (p, el)));
    let value = elem.map(|(p, el)| element_text(el, p.charset()));
    let present = elem.is_some_and(|(_, el)| !el.is_empty());
    let lower = value.as_deref().unwrap_or("").to_lowercase();
    let fail = |r: String| (false, r, value.clone());
    let ok = || (true, String::new(), value.clone());
    match e.category {
        Category::Remove => {
            if present {
                fail("value still present".into())
            } else {
                ok()
            }
        }
        Category::Retain => match &value {
            None => fail("attribute missing".into()),
            Some(v) if e.expected.is_empty() && v.is_empty() => fail("value emptied".into()),
            Some(v) if !e.expected.is_empty() && v.trim() != e.expected.trim() => fail("value changed".into()),
            _ => ok(),
        },
        Category::TextRetain => match &value {
            None => fail("attribute missing".into()),
            Some(v) if normalize_ws(v) != normalize_ws(&e.expected) => fail("text changed".into()),
            _ => ok(),
        },
        Category::TextRemove => match e.tokens().into_iter().find(|t| lower.contains(&t.to_lowercase())) {
            Some(t) => fail(format!("token {t:?} survived")),
            None => ok(),
        },
        Category::ReplaceDummy => {
            if !present {
                fail("no replacement value".into())
            } else if let Some(t) = e.tokens().into_iter().find(|t| lower.contains(&t.to_lowercase())) {
                fail(format!("original {t:?} survived"))
            } else {
                ok()
            }
        }
        Category::RemapUid => match &value {
            None => fail("attribute missing".into()),
            Some(v) if v.trim() == e.expected.trim() => fail("UID not remapped".into()),
            Some(v) if !v.split('\\').all(is_valid_uid) => fail("invalid UID".into()),
            _ => ok(),
        },
        Category::DateAction => match &value {
            Some(v) if !v.is_empty() && !e.expected.is_empty() && v.trim() == e.expected.trim() => fail("date unchanged".into()),
            _ => ok(),
        },
    }
}

/// Counts for one category at one level.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub passed: usize,
    pub failed: usize,
}

impl Counts {
    pub fn total(&self) -> usize {
        self.passed + self.failed
    }

    pub fn failure_pct(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            100.0 * self.failed as f64 / self.total() as f64
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CategoryCounts {
    pub entries: Counts,
    pub instances: Counts,
    pub series: Counts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub categories: BTreeMap<Category, CategoryCounts>,
    pub judgments: Vec<Judgment>,
    pub missing_outputs: usize,
}

/// Per-level aggregation: a unit fails a category iff any of its entries
/// in that category fails.
fn aggregate(judgments: &[Judgment], unit: impl Fn(&Judgment) -> &str) -> BTreeMap<Category, Counts> {
    let mut by: BTreeMap<(Category, &str), bool> = BTreeMap::new();
    for j in judgments {
        let failed = by.entry((j.category, unit(j))).or_insert(false);
        *failed |= !j.passed;
    }
    let mut out: BTreeMap<Category, Counts> = BTreeMap::new();
    for ((c, _), failed) in by {
        let e = out.entry(c).or_default();
        if failed {
            e.failed += 1;
        } else {
            e.passed += 1;
        }
    }
    out
}

impl ScoreReport {
    pub fn from_judgments(judgments: Vec<Judgment>, missing_outputs: usize) -> ScoreReport {
        let mut categories: BTreeMap<Category, CategoryCounts> = BTreeMap::new();
        for j in &judgments {
            let c = &mut categories.entry(j.category).or_default().entries;
            if j.passed {
                c.passed += 1;
            } else {
                c.failed += 1;
            }
        }
        for (c, n) in aggregate(&judgments, |j| &j.instance) {
            categories.get_mut(&c).unwrap().instances = n;
        }
        for (c, n) in aggregate(&judgments, |j| &j.series) {
            categories.get_mut(&c).unwrap().series = n;
        }
        ScoreReport { categories, judgments, missing_outputs }
    }

    pub fn passed(&self) -> usize {
        self.categories.values().map(|c| c.entries.passed).sum()
    }

    pub fn failed(&self) -> usize {
        self.categories.values().map(|c| c.entries.failed).sum()
    }

    pub fn category(&self, c: Category) -> CategoryCounts {
        self.categories.get(&c).copied().unwrap_or_default()
    }

    /// Passing share of all entries in percent. An empty key scores 100.
    pub fn overall_pct(&self) -> f64 {
        let total = self.passed() + self.failed();
        if total == 0 {
            100.0
        } else {
            100.0 * self.passed() as f64 / total as f64
        }
    }

    pub fn overall(&self) -> String {
        format!("{:.2}", self.overall_pct())
    }

    /// Table with one row per category.
    pub fn render_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<14} {:>8} {:>8} {:>8} {:>10} {:>10} {:>8} {:>8}",
            "category", "entries", "failed", "fail%", "instances", "inst_fail", "series", "ser_fail"
        );
        for (c, n) in &self.categories {
            let _ = writeln!(
                s,
                "{:<14} {:>8} {:>8} {:>8.2} {:>10} {:>10} {:>8} {:>8}",
                c.as_str(),
                n.entries.total(),
                n.entries.failed,
                n.entries.failure_pct(),
                n.instances.total(),
                n.instances.failed,
                n.series.total(),
                n.series.failed
            );
        }
        let _ = writeln!(s, "overall score: {}% ({} passed, {} failed, {} missing outputs)", self.overall(), self.passed(), self.failed(), self.missing_outputs);
        s
    }

    /// Tab-separated counts followed by one row per failure.
    pub fn render_tsv(&self) -> String {
        let mut s = String::from("category\tentries\tentry_failures\tentry_failure_pct\tinstances\tinstance_failures\tseries\tseries_failures\n");
        for (c, n) in &self.categories {
            let _ = writeln!(
                s,
                "{}\t{}\t{}\t{:.2}\t{}\t{}\t{}\t{}",
                c.as_str(),
                n.entries.total(),
                n.entries.failed,
                n.entries.failure_pct(),
                n.instances.total(),
                n.instances.failed,
                n.series.total(),
                n.series.failed
            );
        }
        let _ = writeln!(s, "overall\t{}\t{}\t{:.2}", self.passed() + self.failed(), self.failed(), 100.0 - self.overall_pct());
        let _ = writeln!(s, "score\t{}", self.overall());
        let _ = writeln!(s, "\nfailure\tinstance\ttag_path\tcategory\treason");
        for j in self.judgments.iter().filter(|j| !j.passed) {
            let _ = writeln!(s, "failure\t{}\t{}\t{}\t{}", j.instance, j.path, j.category, j.reason);
        }
        s
    }
}

/// Judges every key entry against the outputs.
pub fn score_index(index: &OutputIndex, key: &[AnswerKeyEntry], uids: Option<&UidMap>) -> ScoreReport {
    let raw: Vec<(usize, Option<&DataSet>, bool, String, Option<String>)> = key
        .par_iter()
        .enumerate()
        .map(|(i, e)| match index.find(&e.instance, uids) {
            None => (i, None, false, "missing output".to_string(), None),
            Some(ds) => {
                let (ok, why, v) = judge(e, ds);
                (i, Some(ds), ok, why, v)
            }
        })
        .collect();

    // remap_uid also requires one replacement per original across the key.
    let mut seen: HashMap<&str, BTreeSet<String>> = HashMap::new();
    for (i, _, _, _, v) in &raw {
        let e = &key[*i];
        if e.category == Category::RemapUid {
            if let Some(v) = v {
                seen.entry(e.expected.trim()).or_default().insert(v.trim().to_string());
            }
        }
    }
    let mut missing: HashSet<&str> = HashSet::new();
    let judgments = raw
        .into_iter()
        .map(|(i, ds, mut passed, mut reason, v)| {
            let e = &key[i];
            if ds.is_none() {
                missing.insert(e.instance.as_str());
            }
            if passed && e.category == Category::RemapUid && v.is_some() && seen[e.expected.trim()].len() > 1 {
                passed = false;
                reason = "inconsistent replacement across references".into();
            }
            let series = ds
                .and_then(|d| d.string(tags::SERIES_INSTANCE_UID))
                .unwrap_or_else(|| format!("missing:{}", e.instance));
            Judgment {
                entry: i,
                instance: e.instance.clone(),
                series,
                path: e.path.to_string(),
                category: e.category,
                passed,
                reason,
            }
        })
        .collect();
    ScoreReport::from_judgments(judgments, missing.len())
}

/// Scores the `.dcm` files under `outputs`.
pub fn score(outputs: &Path, key: &[AnswerKeyEntry], uids: Option<&UidMap>) -> Result<ScoreReport, ScoreError> {
    let index = OutputIndex::from_dir(outputs)?;
    Ok(score_index(&index, key, uids))
}
