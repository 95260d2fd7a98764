//! Seeded synthetic corpora for benchmarking the pipeline and scorer.
//!
//! The generator plants identifying tokens of known classes across a set of
//! series, corrupts a minority of slices in some series, and emits the
//! matching answer key together with the counts the scorer must report for
//! the untouched corpus.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{tags, DataElement, DataSet, DicomObject, Tag, TagPath, EXPLICIT_VR_LITTLE_ENDIAN, IMPLICIT_VR_LITTLE_ENDIAN, VR};
use crate::profile::UidMap;
use crate::score::{AnswerKeyEntry, Category};

pub const CT_IMAGE: &str = "1.2.840.10008.5.1.4.1.1.2";
pub const MR_IMAGE: &str = "1.2.840.10008.5.1.4.1.1.4";
pub const SEGMENTATION: &str = "1.2.840.10008.5.1.4.1.1.66.4";
pub const RT_STRUCTURE_SET: &str = "1.2.840.10008.5.1.4.1.1.481.3";
const STUDY_REFERENCE_CLASS: &str = "1.2.840.10008.3.1.2.3.1";
const ORIGINAL_ROOT: &str = "1.2.826.0.1.3680043.9.7433";

const INSTITUTION_NAME: Tag = Tag::new(0x0008, 0x0080);
const ACCESSION_NUMBER: Tag = Tag::new(0x0008, 0x0050);
const ACQUISITION_DATE: Tag = Tag::new(0x0008, 0x0022);
const SPONSOR_NAME: Tag = Tag::new(0x0012, 0x0010);
const BODY_PART: Tag = Tag::new(0x0018, 0x0015);
const PROTOCOL_NAME: Tag = Tag::new(0x0018, 0x1030);
const PRIVATE_CREATOR: Tag = Tag::new(0x0009, 0x0010);
const PRIVATE_NOTE: Tag = Tag::new(0x0009, 0x1001);
const VALUE_TYPE: Tag = Tag::new(0x0040, 0xA040);
const PATIENT_SEX: Tag = Tag::new(0x0010, 0x0040);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TokenClass {
    Name,
    Id,
    Date,
    Year,
    DigitRun,
    Trigger,
    Address,
}

impl TokenClass {
    /// Whether the default text rules are expected to catch this class.
    pub fn rule_covered(self) -> bool {
        self != TokenClass::Address
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedToken {
    /// Original SOPInstanceUID.
    pub instance: String,
    pub path: TagPath,
    pub class: TokenClass,
    pub token: String,
}

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub seed: u64,
    pub series: usize,
    pub instances_per_series: usize,
    pub series_per_patient: usize,
    /// Every n-th series gets minority-slice corruption. Zero disables it.
    pub corrupt_every: usize,
    /// Corrupted slices per corrupted series; kept below half the series.
    pub corrupt_slices: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 20240601,
            series: 24,
            instances_per_series: 10,
            series_per_patient: 3,
            corrupt_every: 3,
            corrupt_slices: 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthInstance {
    /// Path relative to the corpus root.
    pub rel_path: PathBuf,
    pub object: DicomObject,
    /// The correct deidentified dataset, with original UIDs still in place.
    ideal: DataSet,
}

impl SynthInstance {
    pub fn sop_uid(&self) -> String {
        self.object.sop_instance_uid().unwrap_or_default()
    }
}

/// Pass and fail counts per category.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExpectedCounts {
    pub passed: BTreeMap<Category, usize>,
    pub failed: BTreeMap<Category, usize>,
}

impl ExpectedCounts {
    fn record(&mut self, c: Category, pass: bool) {
        let m = if pass { &mut self.passed } else { &mut self.failed };
        *m.entry(c).or_default() += 1;
    }

    pub fn total_passed(&self) -> usize {
        self.passed.values().sum()
    }

    pub fn total_failed(&self) -> usize {
        self.failed.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptedSlice {
    pub series_uid: String,
    pub instance: String,
    pub tag: Tag,
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub instances: Vec<SynthInstance>,
    pub key: Vec<AnswerKeyEntry>,
    pub tokens: Vec<PlantedToken>,
    pub corrupted: Vec<CorruptedSlice>,
    /// What scoring the untouched corpus must report.
    pub identity: ExpectedCounts,
    pub series_uids: Vec<String>,
}

const SYLLABLES: [&str; 24] = [
    "qua", "zel", "vor", "mib", "tan", "rok", "lix", "dru", "pem", "sova", "kel", "bri", "nox", "fam", "velo", "gri", "tus", "hap",
    "ormi", "jad", "wex", "cul", "yri", "bost",
];
const BODY_PARTS: [&str; 5] = ["BRAIN", "CHEST", "ABDOMEN", "PELVIS", "SPINE"];
const SERIES_DESCRIPTIONS: [&str; 8] = [
    "AX T1 POST GAD",
    "COR T2 FLAIR",
    "SAG T1",
    "AX DWI",
    "HEAD WO CONTRAST",
    "AXIAL 5MM",
    "LUNG WINDOW",
    "BONE ALGO",
];
const PROTOCOLS: [&str; 4] = ["ROUTINE", "WITH CONTRAST", "LOW DOSE", "SCREENING"];
const STREET_SUFFIXES: [&str; 3] = ["Street", "Avenue", "Road"];

struct Patient {
    given: String,
    family: String,
    id: String,
    birth: String,
    physician: (String, String),
    institution: String,
    sponsor: String,
    street: String,
    sex: &'static str,
}

struct Gen {
    rng: ChaCha8Rng,
    used: HashSet<String>,
}

impl Gen {
    fn word(&mut self) -> String {
        loop {
            let n = self.rng.gen_range(2..=3);
            let mut w: String = (0..n).map(|_| *SYLLABLES.choose(&mut self.rng).unwrap()).collect();
            if w.len() < 6 {
                continue;
            }
            w[..1].make_ascii_uppercase();
            if self.used.insert(w.to_lowercase()) {
                return w;
            }
        }
    }

    fn digits(&mut self, n: usize) -> String {
        loop {
            let mut s = String::with_capacity(n);
            s.push(char::from(b'1' + self.rng.gen_range(0..9)));
            for _ in 1..n {
                s.push(char::from(b'0' + self.rng.gen_range(0..10)));
            }
            if self.used.insert(s.clone()) {
                return s;
            }
        }
    }

    fn date(&mut self) -> String {
        loop {
            let d = format!("{}{:02}{:02}", self.rng.gen_range(1950..2021), self.rng.gen_range(1..13), self.rng.gen_range(1..29));
            if self.used.insert(d.clone()) {
                return d;
            }
        }
    }

    fn year(&mut self) -> String {
        self.rng.gen_range(1950..2021).to_string()
    }

    fn patient(&mut self) -> Patient {
        Patient {
            given: self.word(),
            family: self.word(),
            id: format!("ZK{}", self.digits(6)),
            birth: self.date(),
            physician: (self.word(), self.word()),
            institution: self.word(),
            sponsor: self.word(),
            street: self.word(),
            sex: if self.rng.gen_bool(0.5) { "F" } else { "M" },
        }
    }
}

/// Free text assembled from segments, some of which identify the patient.
#[derive(Default)]
struct Text {
    full: Vec<String>,
    clean: Vec<String>,
    tokens: Vec<(TokenClass, String)>,
}

impl Text {
    fn plain(&mut self, s: &str) {
        self.full.push(s.to_string());
        self.clean.push(s.to_string());
    }

    fn phi(&mut self, label: &str, class: TokenClass, token: &str) {
        self.full.push(if label.is_empty() { token.to_string() } else { format!("{label} {token}") });
        if !label.is_empty() {
            self.clean.push(label.to_string());
        }
        self.tokens.push((class, token.to_string()));
    }

    fn full(&self) -> String {
        self.full.join(" ")
    }

    fn clean(&self) -> String {
        self.clean.join(" ")
    }
}

struct Builder<'a> {
    instance: String,
    ds: DataSet,
    ideal: DataSet,
    key: &'a mut Vec<AnswerKeyEntry>,
    tokens: &'a mut Vec<PlantedToken>,
    identity: &'a mut ExpectedCounts,
}

impl Builder<'_> {
    fn entry(&mut self, path: TagPath, category: Category, expected: String, identity_passes: bool) {
        self.identity.record(category, identity_passes);
        self.key.push(AnswerKeyEntry { instance: self.instance.clone(), path, category, expected });
    }

    fn plant(&mut self, path: &TagPath, class: TokenClass, token: &str) {
        self.tokens.push(PlantedToken { instance: self.instance.clone(), path: path.clone(), class, token: token.to_string() });
    }

    /// Attribute that must end up absent or empty.
    fn removed(&mut self, tag: Tag, vr: VR, value: &str, planted: &[(TokenClass, &str)]) {
        self.ds.insert(DataElement::string(tag, vr, value));
        self.ideal.remove(tag);
        let path = TagPath::root(tag);
        for (c, t) in planted {
            self.plant(&path, *c, t);
        }
        self.entry(path, Category::Remove, String::new(), false);
    }

    fn retained(&mut self, tag: Tag, vr: VR, value: &str, expected: &str, category: Category) {
        self.ds.insert(DataElement::string(tag, vr, value));
        self.ideal.insert(DataElement::string(tag, vr, expected));
        let pass = match category {
            Category::TextRetain => value.split_whitespace().eq(expected.split_whitespace()),
            _ => value == expected,
        };
        self.entry(TagPath::root(tag), category, expected.to_string(), pass);
    }

    fn uid(&mut self, tag: Tag, value: &str) {
        self.ds.insert(DataElement::string(tag, VR::UI, value));
        self.ideal.insert(DataElement::string(tag, VR::UI, value));
        self.entry(TagPath::root(tag), Category::RemapUid, value.to_string(), false);
    }

    fn text(&mut self, path: TagPath, vr: VR, text: &Text) {
        let tokens: Vec<&str> = text.tokens.iter().filter(|(c, _)| c.rule_covered()).map(|(_, t)| t.as_str()).collect();
        let expected = tokens.join("|");
        for (c, t) in &text.tokens {
            self.plant(&path, *c, t);
        }
        if path.depth() == 0 {
            self.ds.insert(DataElement::string(path.leaf, vr, text.full()));
            self.ideal.insert(DataElement::string(path.leaf, vr, text.clean()));
        }
        self.entry(path, Category::TextRemove, expected, tokens.is_empty());
    }
}

fn pixel_data(rows: u16, cols: u16, seed: usize) -> Vec<u8> {
    // Low nibble values only, so no pixel byte is printable ASCII.
    (0..rows as usize * cols as usize).flat_map(|i| [((i + seed) % 16) as u8, 0]).collect()
}

impl SynthCorpus {
    pub fn generate(cfg: &SynthConfig) -> SynthCorpus {
        let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(cfg.seed), used: HashSet::new() };
        let mut corpus = SynthCorpus {
            instances: Vec::new(),
            key: Vec::new(),
            tokens: Vec::new(),
            corrupted: Vec::new(),
            identity: ExpectedCounts::default(),
            series_uids: Vec::new(),
        };
        let per_patient = cfg.series_per_patient.max(1);
        let mut patient = g.patient();
        let mut study_uid = String::new();
        let mut study_date = String::new();
        let mut accession = String::new();
        let mut for_uid = String::new();
        for s in 0..cfg.series {
            if s % per_patient == 0 {
                if s > 0 {
                    patient = g.patient();
                }
                study_uid = format!("{ORIGINAL_ROOT}.1.{}", s / per_patient + 1);
                for_uid = format!("{ORIGINAL_ROOT}.4.{}", s / per_patient + 1);
                study_date = g.date();
                accession = g.digits(9);
            }
            let series_uid = format!("{ORIGINAL_ROOT}.2.{}", s + 1);
            corpus.series_uids.push(series_uid.clone());
            let mr = s % 2 == 0;
            let (class, modality) = if mr { (MR_IMAGE, "MR") } else { (CT_IMAGE, "CT") };
            let ts = if s % 4 < 2 { EXPLICIT_VR_LITTLE_ENDIAN } else { IMPLICIT_VR_LITTLE_ENDIAN };
            let body = BODY_PARTS[s % BODY_PARTS.len()];
            let description = SERIES_DESCRIPTIONS[s % SERIES_DESCRIPTIONS.len()];
            let protocol = format!("{body} {}", PROTOCOLS[s % PROTOCOLS.len()]);
            let series_number = (s % 9 + 1).to_string();
            let corrupt = cfg.corrupt_every > 0 && s % cfg.corrupt_every == cfg.corrupt_every - 1;
            let n = cfg.instances_per_series;
            let mut slots: Vec<usize> = (0..n).collect();
            slots.shuffle(&mut g.rng);
            let minority: BTreeSet<usize> = if corrupt {
                slots.into_iter().take(cfg.corrupt_slices.min(n.saturating_sub(1) / 2)).collect()
            } else {
                BTreeSet::new()
            };
            for i in 0..n {
                let sop = format!("{ORIGINAL_ROOT}.3.{}.{}", s + 1, i + 1);
                let acq_date = g.date();
                let mut b = Builder {
                    instance: sop.clone(),
                    ds: DataSet::new(),
                    ideal: DataSet::new(),
                    key: &mut corpus.key,
                    tokens: &mut corpus.tokens,
                    identity: &mut corpus.identity,
                };
                b.ds.insert(DataElement::string(tags::SOP_CLASS_UID, VR::UI, class));
                b.ideal.insert(DataElement::string(tags::SOP_CLASS_UID, VR::UI, class));
                b.uid(tags::SOP_INSTANCE_UID, &sop);
                b.uid(tags::STUDY_INSTANCE_UID, &study_uid);
                b.uid(tags::SERIES_INSTANCE_UID, &series_uid);
                b.uid(tags::FRAME_OF_REFERENCE_UID, &for_uid);

                let p = &patient;
                b.removed(tags::PATIENT_NAME, VR::PN, &format!("{}^{}", p.family, p.given), &[(TokenClass::Name, &p.family), (TokenClass::Name, &p.given)]);
                b.removed(tags::PATIENT_ID, VR::LO, &p.id, &[(TokenClass::Id, &p.id)]);
                b.removed(tags::PATIENT_BIRTH_DATE, VR::DA, &p.birth, &[(TokenClass::Date, &p.birth)]);
                b.removed(tags::STUDY_DATE, VR::DA, &study_date, &[(TokenClass::Date, &study_date)]);
                b.removed(ACCESSION_NUMBER, VR::SH, &accession, &[(TokenClass::DigitRun, &accession)]);
                b.removed(
                    tags::REFERRING_PHYSICIAN_NAME,
                    VR::PN,
                    &format!("{}^{}", p.physician.1, p.physician.0),
                    &[(TokenClass::Name, &p.physician.1), (TokenClass::Name, &p.physician.0)],
                );
                b.removed(INSTITUTION_NAME, VR::LO, &format!("{} General Hospital", p.institution), &[(TokenClass::Name, &p.institution)]);

                b.ds.insert(DataElement::string(PRIVATE_CREATOR, VR::LO, "SYNTH VENDOR NOTES"));
                b.removed(PRIVATE_NOTE, VR::LO, &format!("{} {}", p.family, p.id), &[(TokenClass::Name, &p.family), (TokenClass::Id, &p.id)]);

                b.ds.insert(DataElement::string(SPONSOR_NAME, VR::LO, format!("{} Research", p.sponsor)));
                b.ideal.insert(DataElement::string(SPONSOR_NAME, VR::LO, "ANONYMIZED"));
                b.plant(&TagPath::root(SPONSOR_NAME), TokenClass::Name, &p.sponsor);
                b.entry(TagPath::root(SPONSOR_NAME), Category::ReplaceDummy, p.sponsor.clone(), false);

                b.ds.insert(DataElement::string(ACQUISITION_DATE, VR::DA, &acq_date));
                b.plant(&TagPath::root(ACQUISITION_DATE), TokenClass::Date, &acq_date);
                b.entry(TagPath::root(ACQUISITION_DATE), Category::DateAction, acq_date.clone(), false);

                b.ds.insert(DataElement::string(PATIENT_SEX, VR::CS, p.sex));
                b.ideal.insert(DataElement::string(PATIENT_SEX, VR::CS, ""));
                b.retained(tags::MODALITY, VR::CS, modality, modality, Category::Retain);
                b.retained(BODY_PART, VR::CS, body, body, Category::Retain);
                let odd = minority.contains(&i);
                let number = if odd { format!("{}", 100 + s) } else { series_number.clone() };
                b.retained(tags::SERIES_NUMBER, VR::IS, &number, &series_number, Category::Retain);
                let desc = if odd { format!("{description} MOD") } else { description.to_string() };
                b.retained(tags::SERIES_DESCRIPTION, VR::LO, &desc, description, Category::TextRetain);
                b.retained(PROTOCOL_NAME, VR::LO, &protocol, &protocol, Category::TextRetain);
                if odd {
                    for tag in [tags::SERIES_NUMBER, tags::SERIES_DESCRIPTION] {
                        corpus.corrupted.push(CorruptedSlice { series_uid: series_uid.clone(), instance: sop.clone(), tag });
                    }
                }
                let instance_number = (i + 1).to_string();
                b.ds.insert(DataElement::string(tags::INSTANCE_NUMBER, VR::IS, &instance_number));
                b.ideal.insert(DataElement::string(tags::INSTANCE_NUMBER, VR::IS, &instance_number));

                let mut study_desc = Text::default();
                study_desc.plain(&format!("{modality} {body}"));
                study_desc.full.push("for Dr".into());
                study_desc.tokens.push((TokenClass::Trigger, p.physician.0.clone()));
                study_desc.tokens.push((TokenClass::Trigger, p.physician.1.clone()));
                study_desc.full.push(format!("{} {}", p.physician.0, p.physician.1));
                b.text(TagPath::root(tags::STUDY_DESCRIPTION), VR::LO, &study_desc);

                let mut comments = Text::default();
                if g.rng.gen_bool(0.25) {
                    let num = g.rng.gen_range(10..999).to_string();
                    let suffix = STREET_SUFFIXES.choose(&mut g.rng).unwrap();
                    comments.full.push(format!("home {num} {} {suffix}", p.street));
                    comments.tokens.push((TokenClass::Address, p.street.clone()));
                }
                comments.phi("pt", TokenClass::Name, &p.given);
                comments.phi("", TokenClass::Name, &p.family);
                comments.phi("id", TokenClass::Id, &p.id);
                comments.phi("MRN", TokenClass::DigitRun, &g.digits(10));
                comments.phi("dob", TokenClass::Date, &p.birth);
                comments.phi("prior exam", TokenClass::Year, &g.year());
                comments.plain("contrast tolerated");
                if g.rng.gen_bool(0.5) {
                    comments.full.push("reviewed by".into());
                    comments.tokens.push((TokenClass::Trigger, p.physician.1.clone()));
                    comments.full.push(p.physician.1.clone());
                }
                b.text(TagPath::root(tags::IMAGE_COMMENTS), VR::LT, &comments);

                let mut note = Text::default();
                note.plain("Findings reviewed with");
                note.phi("", TokenClass::Name, &p.family);
                let year = g.year();
                note.phi("since", TokenClass::Year, &year);
                let mut item = DataSet::new();
                item.insert(DataElement::string(VALUE_TYPE, VR::CS, "TEXT"));
                item.insert(DataElement::string(tags::TEXT_VALUE, VR::UT, note.full()));
                b.ds.insert(DataElement::sequence(tags::CONTENT_SEQUENCE, [item]));
                let mut ideal_item = DataSet::new();
                ideal_item.insert(DataElement::string(VALUE_TYPE, VR::CS, "TEXT"));
                ideal_item.insert(DataElement::string(tags::TEXT_VALUE, VR::UT, note.clean()));
                b.ideal.insert(DataElement::sequence(tags::CONTENT_SEQUENCE, [ideal_item]));
                b.text(TagPath::root(tags::CONTENT_SEQUENCE).child(0, tags::TEXT_VALUE), VR::UT, &note);

                for (tag, v) in [(tags::ROWS, 8u16), (tags::COLUMNS, 8), (tags::BITS_ALLOCATED, 16), (tags::SAMPLES_PER_PIXEL, 1)] {
                    b.ds.insert(DataElement::u16s(tag, VR::US, &[v]));
                    b.ideal.insert(DataElement::u16s(tag, VR::US, &[v]));
                }
                b.ds.insert(DataElement::bytes(tags::PIXEL_DATA, VR::OW, pixel_data(8, 8, i)));
                b.ideal.insert(DataElement::bytes(tags::PIXEL_DATA, VR::OW, pixel_data(8, 8, i)));

                let Builder { ds, ideal, .. } = b;
                corpus.instances.push(SynthInstance {
                    rel_path: PathBuf::from(format!("s{:03}/i{:03}.dcm", s + 1, i + 1)),
                    object: DicomObject::new(ts, ds),
                    ideal,
                });
            }
        }
        corpus
    }

    pub fn write_inputs(&self, root: &Path) -> io::Result<()> {
        for inst in &self.instances {
            let path = root.join(&inst.rel_path);
            fs::create_dir_all(path.parent().unwrap_or(root))?;
            let bytes = inst.object.to_bytes().map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
            fs::write(path, bytes)?;
        }
        Ok(())
    }

    pub fn write_key(&self, path: &Path) -> io::Result<()> {
        let f = fs::File::create(path)?;
        crate::score::write_answer_key(io::BufWriter::new(f), &self.key).map_err(|e| io::Error::other(e.to_string()))
    }

    /// Tokens the default rules are expected to remove.
    pub fn covered_tokens(&self) -> BTreeSet<String> {
        self.tokens.iter().filter(|t| t.class.rule_covered()).map(|t| t.token.clone()).collect()
    }

    pub fn address_tokens(&self) -> BTreeSet<String> {
        self.tokens.iter().filter(|t| !t.class.rule_covered()).map(|t| t.token.clone()).collect()
    }

    /// Correctly deidentified datasets. UIDs are replaced through `uids`.
    pub fn ideal_outputs(&self, uids: &UidMap) -> Vec<DataSet> {
        self.instances
            .iter()
            .map(|inst| {
                let mut ds = inst.ideal.clone();
                for tag in [tags::SOP_INSTANCE_UID, tags::STUDY_INSTANCE_UID, tags::SERIES_INSTANCE_UID, tags::FRAME_OF_REFERENCE_UID] {
                    if let Some(v) = ds.string(tag) {
                        ds.insert(DataElement::string(tag, VR::UI, uids.remap_lenient(&v)));
                    }
                }
                ds
            })
            .collect()
    }
}

/// A hit of a planted token in a scanned file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanHit {
    pub file: PathBuf,
    pub token: String,
}

/// Case-insensitive search for whole tokens in the raw bytes of every file
/// under `root`. A token counts only when not adjacent to an ASCII letter
/// or digit.
pub fn scan_tree(root: &Path, tokens: &BTreeSet<String>) -> io::Result<Vec<ScanHit>> {
    let wanted: HashSet<Vec<u8>> = tokens.iter().map(|t| t.to_ascii_lowercase().into_bytes()).collect();
    let mut hits = Vec::new();
    for entry in walkdir::WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(io::Error::other)?;
        if !entry.file_type().is_file() {
            continue;
        }
        let bytes = fs::read(entry.path())?;
        let mut seen = BTreeSet::new();
        for word in bytes.split(|b| !b.is_ascii_alphanumeric()).filter(|w| !w.is_empty()) {
            let w = word.to_ascii_lowercase();
            if wanted.contains(&w) && seen.insert(w.clone()) {
                hits.push(ScanHit { file: entry.path().to_path_buf(), token: String::from_utf8_lossy(&w).into_owned() });
            }
        }
    }
    Ok(hits)
}

/// An image series with a segmentation and an RT structure set that point
/// into it.
#[derive(Debug, Clone)]
pub struct LinkedStudy {
    pub objects: Vec<(PathBuf, DicomObject)>,
    pub token: String,
}

impl LinkedStudy {
    pub fn generate(seed: u64, images: usize) -> LinkedStudy {
        let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), used: HashSet::new() };
        let p = g.patient();
        let root = format!("{ORIGINAL_ROOT}.9.{}", g.rng.gen_range(1..1000));
        let study = format!("{root}.1");
        let image_series = format!("{root}.2.1");
        let frame = format!("{root}.4");
        let common = |ds: &mut DataSet, class: &str, sop: &str, series: &str, modality: &str| {
            ds.insert(DataElement::string(tags::SOP_CLASS_UID, VR::UI, class));
            ds.insert(DataElement::string(tags::SOP_INSTANCE_UID, VR::UI, sop));
            ds.insert(DataElement::string(tags::STUDY_INSTANCE_UID, VR::UI, &study));
            ds.insert(DataElement::string(tags::SERIES_INSTANCE_UID, VR::UI, series));
            ds.insert(DataElement::string(tags::FRAME_OF_REFERENCE_UID, VR::UI, &frame));
            ds.insert(DataElement::string(tags::MODALITY, VR::CS, modality));
            ds.insert(DataElement::string(tags::PATIENT_NAME, VR::PN, format!("{}^{}", p.family, p.given)));
            ds.insert(DataElement::string(tags::PATIENT_ID, VR::LO, &p.id));
        };
        let mut objects = Vec::new();
        let mut image_uids = Vec::new();
        for i in 0..images {
            let sop = format!("{root}.3.{}", i + 1);
            let mut ds = DataSet::new();
            common(&mut ds, CT_IMAGE, &sop, &image_series, "CT");
            ds.insert(DataElement::string(tags::INSTANCE_NUMBER, VR::IS, (i + 1).to_string()));
            for (tag, v) in [(tags::ROWS, 4u16), (tags::COLUMNS, 4), (tags::BITS_ALLOCATED, 16), (tags::SAMPLES_PER_PIXEL, 1)] {
                ds.insert(DataElement::u16s(tag, VR::US, &[v]));
            }
            ds.insert(DataElement::bytes(tags::PIXEL_DATA, VR::OW, pixel_data(4, 4, i)));
            objects.push((PathBuf::from(format!("ct/i{:03}.dcm", i + 1)), DicomObject::new(EXPLICIT_VR_LITTLE_ENDIAN, ds)));
            image_uids.push(sop);
        }
        let image_ref = |uid: &str| {
            let mut r = DataSet::new();
            r.insert(DataElement::string(tags::REFERENCED_SOP_CLASS_UID, VR::UI, CT_IMAGE));
            r.insert(DataElement::string(tags::REFERENCED_SOP_INSTANCE_UID, VR::UI, uid));
            r
        };

        // Structure set: frame of reference -> study -> series -> contour images.
        let mut rt = DataSet::new();
        common(&mut rt, RT_STRUCTURE_SET, &format!("{root}.5.1"), &format!("{root}.2.2"), "RTSTRUCT");
        let mut rt_series = DataSet::new();
        rt_series.insert(DataElement::string(tags::SERIES_INSTANCE_UID, VR::UI, &image_series));
        rt_series.insert(DataElement::sequence(Tag::new(0x3006, 0x0016), image_uids.iter().map(|u| image_ref(u))));
        let mut rt_study = DataSet::new();
        rt_study.insert(DataElement::string(tags::REFERENCED_SOP_CLASS_UID, VR::UI, STUDY_REFERENCE_CLASS));
        rt_study.insert(DataElement::string(tags::REFERENCED_SOP_INSTANCE_UID, VR::UI, &study));
        rt_study.insert(DataElement::sequence(Tag::new(0x3006, 0x0014), [rt_series]));
        let mut rt_for = DataSet::new();
        rt_for.insert(DataElement::string(tags::FRAME_OF_REFERENCE_UID, VR::UI, &frame));
        rt_for.insert(DataElement::sequence(Tag::new(0x3006, 0x0012), [rt_study]));
        rt.insert(DataElement::sequence(Tag::new(0x3006, 0x0010), [rt_for]));
        let mut roi = DataSet::new();
        roi.insert(DataElement::string(Tag::new(0x3006, 0x0022), VR::IS, "1"));
        roi.insert(DataElement::string(Tag::new(0x3006, 0x0024), VR::UI, &frame));
        roi.insert(DataElement::string(Tag::new(0x3006, 0x0026), VR::LO, "GTV"));
        rt.insert(DataElement::sequence(Tag::new(0x3006, 0x0020), [roi]));
        objects.push((PathBuf::from("rt/rs001.dcm"), DicomObject::new(EXPLICIT_VR_LITTLE_ENDIAN, rt)));

        // Segmentation: referenced series plus per-frame source images.
        let mut seg = DataSet::new();
        common(&mut seg, SEGMENTATION, &format!("{root}.6.1"), &format!("{root}.2.3"), "SEG");
        let mut seg_series = DataSet::new();
        seg_series.insert(DataElement::string(tags::SERIES_INSTANCE_UID, VR::UI, &image_series));
        seg_series.insert(DataElement::sequence(tags::REFERENCED_INSTANCE_SEQUENCE, image_uids.iter().map(|u| image_ref(u))));
        seg.insert(DataElement::sequence(tags::REFERENCED_SERIES_SEQUENCE, [seg_series]));
        let frames = image_uids.iter().map(|u| {
            let mut derivation = DataSet::new();
            derivation.insert(DataElement::sequence(Tag::new(0x0008, 0x2112), [image_ref(u)]));
            let mut frame = DataSet::new();
            frame.insert(DataElement::sequence(Tag::new(0x0008, 0x9124), [derivation]));
            frame
        });
        seg.insert(DataElement::sequence(Tag::new(0x5200, 0x9230), frames.collect::<Vec<_>>()));
        objects.push((PathBuf::from("seg/sg001.dcm"), DicomObject::new(EXPLICIT_VR_LITTLE_ENDIAN, seg)));
        LinkedStudy { objects, token: p.family }
    }

    pub fn write_inputs(&self, root: &Path) -> io::Result<()> {
        for (rel, obj) in &self.objects {
            let path = root.join(rel);
            fs::create_dir_all(path.parent().unwrap_or(root))?;
            fs::write(path, obj.to_bytes().map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?)?;
        }
        Ok(())
    }
}
