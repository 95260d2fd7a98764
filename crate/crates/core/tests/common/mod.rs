//! Helpers shared by the integration tests: a byte-level fixture builder
//! independent of the crate's writer, the fixture corpus, a reference-graph
//! checker and job construction.
#![allow(dead_code)]

pub mod conformance;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use deid_core::codec::{tags, DataSet, Tag, Value};
use deid_core::pipeline::{JobConfig, Overrides};

pub const EXPLICIT: &str = "1.2.840.10008.1.2.1";
pub const IMPLICIT: &str = "1.2.840.10008.1.2";
pub const JPEG_BASELINE: &str = "1.2.840.10008.1.2.4.50";
pub const CT: &str = "1.2.840.10008.5.1.4.1.1.2";
pub const SALT: &str = "integration-salt";
pub const SALT_ENV: &str = "DEID_TEST_SALT";

const LONG_VRS: [&str; 11] = ["OB", "OD", "OF", "OL", "OV", "OW", "SQ", "UC", "UN", "UR", "UT"];

/// Writes elements byte by byte in one of the two little endian encodings.
#[derive(Clone, Copy)]
pub struct Enc {
    pub explicit: bool,
}

impl Enc {
    pub fn header(self, group: u16, element: u16, vr: &str, len: u32) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&group.to_le_bytes());
        out.extend_from_slice(&element.to_le_bytes());
        if self.explicit {
            out.extend_from_slice(vr.as_bytes());
            if LONG_VRS.contains(&vr) {
                out.extend_from_slice(&[0, 0]);
                out.extend_from_slice(&len.to_le_bytes());
            } else {
                out.extend_from_slice(&(len as u16).to_le_bytes());
            }
        } else {
            out.extend_from_slice(&len.to_le_bytes());
        }
        out
    }

    pub fn el(self, group: u16, element: u16, vr: &str, value: &[u8]) -> Vec<u8> {
        let mut out = self.header(group, element, vr, value.len() as u32);
        out.extend_from_slice(value);
        out
    }

    /// String element padded to even length.
    pub fn s(self, group: u16, element: u16, vr: &str, value: &str) -> Vec<u8> {
        let mut v = value.as_bytes().to_vec();
        if v.len() % 2 == 1 {
            v.push(if vr == "UI" { 0 } else { b' ' });
        }
        self.el(group, element, vr, &v)
    }

    /// Sequence of already encoded item bodies.
    pub fn sq(self, group: u16, element: u16, items: &[Vec<u8>], undefined: bool, undefined_items: bool) -> Vec<u8> {
        let mut body = Vec::new();
        for it in items {
            body.extend_from_slice(&[0xFE, 0xFF, 0x00, 0xE0]);
            if undefined_items {
                body.extend_from_slice(&u32::MAX.to_le_bytes());
                body.extend_from_slice(it);
                body.extend_from_slice(&[0xFE, 0xFF, 0x0D, 0xE0, 0, 0, 0, 0]);
            } else {
                body.extend_from_slice(&(it.len() as u32).to_le_bytes());
                body.extend_from_slice(it);
            }
        }
        let mut out;
        if undefined {
            out = self.header(group, element, "SQ", u32::MAX);
            out.extend_from_slice(&body);
            out.extend_from_slice(&[0xFE, 0xFF, 0xDD, 0xE0, 0, 0, 0, 0]);
        } else {
            out = self.header(group, element, "SQ", body.len() as u32);
            out.extend_from_slice(&body);
        }
        out
    }
}

pub fn cat(parts: &[Vec<u8>]) -> Vec<u8> {
    parts.concat()
}

/// Splits encoded top-level elements apart and joins them in tag order.
fn sorted(e: Enc, blobs: Vec<Vec<u8>>) -> Vec<u8> {
    let mut elems: Vec<((u16, u16), Vec<u8>)> = Vec::new();
    for blob in blobs {
        let mut pos = 0;
        while pos < blob.len() {
            let len = element_len(e, &blob[pos..]);
            let g = u16::from_le_bytes([blob[pos], blob[pos + 1]]);
            let el = u16::from_le_bytes([blob[pos + 2], blob[pos + 3]]);
            elems.push(((g, el), blob[pos..pos + len].to_vec()));
            pos += len;
        }
    }
    elems.sort_by_key(|(t, _)| *t);
    elems.into_iter().flat_map(|(_, b)| b).collect()
}

/// Encoded size of the element at the start of `b`, walking undefined
/// lengths to their delimiter.
fn element_len(e: Enc, b: &[u8]) -> usize {
    let u32_at = |i: usize| u32::from_le_bytes([b[i], b[i + 1], b[i + 2], b[i + 3]]);
    let (head, len) = if e.explicit {
        let vr = std::str::from_utf8(&b[4..6]).unwrap();
        if LONG_VRS.contains(&vr) {
            (12, u32_at(8))
        } else {
            (8, u16::from_le_bytes([b[6], b[7]]) as u32)
        }
    } else {
        (8, u32_at(4))
    };
    if len != u32::MAX {
        return head + len as usize;
    }
    // Undefined length: walk items to the sequence delimiter.
    let mut in_item = false;
    let mut i = head;
    loop {
        let (g, el) = (u16::from_le_bytes([b[i], b[i + 1]]), u16::from_le_bytes([b[i + 2], b[i + 3]]));
        match (g, el) {
            (0xFFFE, 0xE0DD) if !in_item => return i + 8,
            (0xFFFE, 0xE00D) => {
                in_item = false;
                i += 8;
            }
            (0xFFFE, 0xE000) if u32_at(i + 4) == u32::MAX => {
                in_item = true;
                i += 8;
            }
            (0xFFFE, 0xE000) => i += 8 + u32_at(i + 4) as usize,
            _ => i += element_len(e, &b[i..]),
        }
    }
}

/// Preamble, magic and file meta with a correct group length, then `body`.
pub fn part10(ts: &str, class: &str, instance: &str, body: &[u8]) -> Vec<u8> {
    let e = Enc { explicit: true };
    let meta = cat(&[
        e.el(0x0002, 0x0001, "OB", &[0, 1]),
        e.s(0x0002, 0x0002, "UI", class),
        e.s(0x0002, 0x0003, "UI", instance),
        e.s(0x0002, 0x0010, "UI", ts),
        e.s(0x0002, 0x0012, "UI", "1.2.3.4.5.6"),
    ]);
    let mut out = vec![0u8; 128];
    out.extend_from_slice(b"DICM");
    out.extend_from_slice(&e.el(0x0002, 0x0000, "UL", &(meta.len() as u32).to_le_bytes()));
    out.extend_from_slice(&meta);
    out.extend_from_slice(body);
    out
}

pub struct Fixture {
    pub name: String,
    pub bytes: Vec<u8>,
    pub explicit: bool,
    /// Private elements listed in the bundled safe-private sample.
    pub safe_private: Vec<Tag>,
}

fn ident(e: Enc, class: &str, instance: &str) -> Vec<u8> {
    cat(&[e.s(0x0008, 0x0016, "UI", class), e.s(0x0008, 0x0018, "UI", instance)])
}

fn patient(e: Enc) -> Vec<u8> {
    cat(&[
        e.s(0x0010, 0x0010, "PN", "Doe^Jane"),
        e.s(0x0010, 0x0020, "LO", "MRN0042"),
        e.s(0x0010, 0x0030, "DA", "19700101"),
        e.s(0x0010, 0x0040, "CS", "F"),
    ])
}

fn us(v: &[u16]) -> Vec<u8> {
    v.iter().flat_map(|x| x.to_le_bytes()).collect()
}

/// Builds the round-trip corpus: sixteen shapes in each encoding plus an
/// encapsulated file.
pub fn fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for explicit in [true, false] {
        let e = Enc { explicit };
        let ts = if explicit { EXPLICIT } else { IMPLICIT };
        let tag = if explicit { "ex" } else { "im" };
        let mut n = 0;
        let mut push = |name: &str, body: Vec<u8>, safe: Vec<Tag>| {
            n += 1;
            let inst = format!("1.2.826.0.1.3680043.9.1.{}.{n}", explicit as u8);
            let bytes = part10(ts, CT, &inst, &sorted(e, vec![ident(e, CT, &inst), body]));
            out.push(Fixture { name: format!("{tag}-{n:02}-{name}"), bytes, explicit, safe_private: safe });
        };

        push("minimal", vec![], vec![]);
        push(
            "string-vrs",
            cat(&[
                e.s(0x0008, 0x0020, "DA", "20240115"),
                e.s(0x0008, 0x002A, "DT", "20240115101530"),
                e.s(0x0008, 0x0030, "TM", "101530.25"),
                e.s(0x0008, 0x0050, "SH", "ACC123"),
                e.s(0x0008, 0x0060, "CS", "CT"),
                e.s(0x0008, 0x0080, "LO", "General Hospital"),
                e.s(0x0008, 0x0090, "PN", "Smith^John"),
                patient(e),
                e.s(0x0010, 0x1010, "AS", "045Y"),
                e.s(0x0010, 0x1030, "DS", "72.5"),
                e.s(0x0018, 0x0050, "DS", "1.25"),
                e.s(0x0020, 0x0011, "IS", "3"),
                e.s(0x0020, 0x4000, "LT", "Comment text"),
                e.s(0x0032, 0x4000, "LT", "Study comments"),
            ]),
            vec![],
        );
        let binary = [
            e.el(0x0018, 0x1310, "US", &us(&[0, 256, 256, 0])),
            e.el(0x0018, 0x9087, "FD", &800.0f64.to_le_bytes()),
            e.el(0x0020, 0x5000, "AT", &[0x10, 0, 0x10, 0]),
            e.el(0x0020, 0x9057, "UL", &7u32.to_le_bytes()),
            e.el(0x0028, 0x0010, "US", &us(&[4])),
            e.el(0x0028, 0x0011, "US", &us(&[4])),
            e.el(0x0028, 0x0106, "SS", &(-5i16).to_le_bytes()),
            e.el(0x0028, 0x9001, "UL", &1u32.to_le_bytes()),
            e.el(0x0040, 0x9212, "FD", &1.5f64.to_le_bytes()),
            e.el(0x0054, 0x1330, "US", &us(&[9])),
        ];
        push("binary-vrs", cat(&binary), vec![]);
        push(
            "empty-values",
            cat(&[
                e.el(0x0008, 0x0020, "DA", &[]),
                e.el(0x0008, 0x0050, "SH", &[]),
                e.el(0x0008, 0x0090, "PN", &[]),
                e.el(0x0010, 0x0010, "PN", &[]),
                e.el(0x0010, 0x0020, "LO", &[]),
                e.el(0x0020, 0x0010, "SH", &[]),
                e.sq(0x0040, 0x0275, &[], false, false),
            ]),
            vec![],
        );
        let code = |v: &str| cat(&[e.s(0x0008, 0x0100, "SH", v), e.s(0x0008, 0x0102, "SH", "DCM"), e.s(0x0008, 0x0104, "LO", "Meaning")]);
        push("sequence-defined", e.sq(0x0008, 0x1032, &[code("11111"), code("22222")], false, false), vec![]);
        let leaf = cat(&[e.s(0x0040, 0xA040, "CS", "TEXT"), e.s(0x0040, 0xA160, "UT", "Nested finding text")]);
        let depth2 = cat(&[e.s(0x0040, 0xA040, "CS", "CONTAINER"), e.sq(0x0040, 0xA730, &[leaf.clone()], true, true)]);
        let depth1 = cat(&[e.s(0x0040, 0xA040, "CS", "CONTAINER"), e.sq(0x0040, 0xA730, &[depth2.clone(), depth2.clone()], true, true)]);
        push("depth3-undefined", e.sq(0x0040, 0xA730, &[depth1.clone()], true, true), vec![]);
        let mixed2 = cat(&[e.s(0x0040, 0xA040, "CS", "CONTAINER"), e.sq(0x0040, 0xA730, &[leaf.clone()], false, true)]);
        let mixed1 = cat(&[e.s(0x0040, 0xA040, "CS", "CONTAINER"), e.sq(0x0040, 0xA730, &[mixed2], true, false)]);
        push("depth3-mixed", e.sq(0x0040, 0xA730, &[mixed1], false, false), vec![]);
        push(
            "empty-sequences",
            cat(&[e.sq(0x0008, 0x1110, &[], true, false), e.sq(0x0008, 0x1115, &[vec![]], false, false), e.sq(0x0008, 0x1140, &[vec![]], true, true)]),
            vec![],
        );
        let vr = |explicit_vr: &str| if explicit { explicit_vr.to_string() } else { "UN".to_string() };
        push(
            "private-block",
            cat(&[
                patient(e),
                e.s(0x0019, 0x0010, "LO", "GEMS_ACQU_01"),
                e.s(0x0019, 0x100F, &vr("DS"), "12.5"),
                e.s(0x0019, 0x1018, &vr("LO"), "S12.0"),
                e.s(0x0019, 0x1020, &vr("LO"), "Jane Doe"),
            ]),
            vec![Tag::new(0x0019, 0x100F), Tag::new(0x0019, 0x1018)],
        );
        push(
            "private-two-blocks",
            cat(&[
                e.s(0x0019, 0x0010, "LO", "SIEMENS MR HEADER"),
                e.s(0x0019, 0x0011, "LO", "UNKNOWN VENDOR"),
                e.s(0x0019, 0x1008, &vr("CS"), "IMAGE NUM 4"),
                e.s(0x0019, 0x100C, &vr("IS"), "1000"),
                e.s(0x0019, 0x1108, &vr("LO"), "operator Smith"),
                e.s(0x0029, 0x0010, "LO", "SIEMENS CSA HEADER"),
                e.s(0x0029, 0x1008, &vr("CS"), "IMAGE NUM 4"),
                e.el(0x0029, 0x1010, &vr("OB"), &[1, 2, 3, 4, 5, 6, 7, 8]),
            ]),
            vec![Tag::new(0x0019, 0x1008), Tag::new(0x0019, 0x100C), Tag::new(0x0029, 0x1008), Tag::new(0x0029, 0x1010)],
        );
        push("long-ob", cat(&[e.el(0x0009, 0x0010, "LO", b"ACME 1"), e.el(0x0009, 0x1001, &vr("OB"), &vec![0xAB; 70_002])]), vec![]);
        push("long-text", e.s(0x0020, 0x4000, "LT", &"x".repeat(10_240)), vec![]);
        push(
            "max-length-values",
            cat(&[e.s(0x0008, 0x0005, "CS", "ISO_IR 192"), e.s(0x0008, 0x1030, "LO", &"A".repeat(64)), e.s(0x0010, 0x0010, "PN", "Yamada^Tarou=山田^太郎"), e.s(0x0018, 0x1030, "LO", "")]),
            vec![],
        );
        push(
            "latin1",
            cat(&[e.s(0x0008, 0x0005, "CS", "ISO_IR 100"), e.el(0x0010, 0x0010, "PN", b"M\xfcller^J\xfcrgen ")]),
            vec![],
        );
        let pixels: Vec<u8> = (0..64u8).collect();
        push(
            "native-pixels",
            cat(&[
                e.el(0x0028, 0x0002, "US", &us(&[1])),
                e.s(0x0028, 0x0004, "CS", "MONOCHROME2"),
                e.el(0x0028, 0x0010, "US", &us(&[8])),
                e.el(0x0028, 0x0011, "US", &us(&[8])),
                e.el(0x0028, 0x0100, "US", &us(&[8])),
                e.el(0x0028, 0x0101, "US", &us(&[8])),
                e.el(0x0028, 0x0102, "US", &us(&[7])),
                e.el(0x0028, 0x0103, "US", &us(&[0])),
                e.el(0x7FE0, 0x0010, if explicit { "OB" } else { "OW" }, &pixels),
            ]),
            vec![],
        );
        push(
            "multi-valued",
            cat(&[
                e.s(0x0008, 0x0008, "CS", "ORIGINAL\\PRIMARY\\AXIAL"),
                e.s(0x0020, 0x0032, "DS", "-125.0\\-125.0\\40.5"),
                e.s(0x0020, 0x0037, "DS", "1\\0\\0\\0\\1\\0"),
                e.s(0x0028, 0x1050, "DS", "40\\400"),
            ]),
            vec![],
        );
    }
    let e = Enc { explicit: true };
    let inst = "1.2.826.0.1.3680043.9.1.9.1";
    let mut pixel = e.header(0x7FE0, 0x0010, "OB", u32::MAX);
    for frag in [&[][..], &[0xFF, 0xD8, 0xFF, 0xE0, 0, 0x10][..], &[0xFF, 0xD9][..]] {
        pixel.extend_from_slice(&[0xFE, 0xFF, 0x00, 0xE0]);
        pixel.extend_from_slice(&(frag.len() as u32).to_le_bytes());
        pixel.extend_from_slice(frag);
    }
    pixel.extend_from_slice(&[0xFE, 0xFF, 0xDD, 0xE0, 0, 0, 0, 0]);
    let body = cat(&[ident(e, CT, inst), patient(e), e.el(0x0028, 0x0010, "US", &us(&[1])), pixel]);
    out.push(Fixture { name: "ex-17-encapsulated".into(), bytes: part10(JPEG_BASELINE, CT, inst, &body), explicit: true, safe_private: vec![] });
    out
}

/// UIDs that a reference may point at, collected from the top level of every
/// object.
#[derive(Debug, Default)]
pub struct Targets {
    pub instances: BTreeSet<String>,
    pub studies: BTreeSet<String>,
    pub series: BTreeSet<String>,
    pub frames: BTreeSet<String>,
}

fn top(ds: &DataSet, tag: Tag) -> Option<String> {
    ds.string(tag).filter(|s| !s.is_empty())
}

/// Every nested reference that does not resolve to an object in `corpus`.
/// A study-level reference counts as resolved when it names a study.
pub fn dangling_references(corpus: &[DataSet]) -> Vec<String> {
    let mut t = Targets::default();
    for ds in corpus {
        t.instances.extend(top(ds, tags::SOP_INSTANCE_UID));
        t.studies.extend(top(ds, tags::STUDY_INSTANCE_UID));
        t.series.extend(top(ds, tags::SERIES_INSTANCE_UID));
        t.frames.extend(top(ds, tags::FRAME_OF_REFERENCE_UID));
    }
    let mut dangling = Vec::new();
    for ds in corpus {
        let owner = top(ds, tags::SOP_INSTANCE_UID).unwrap_or_default();
        ds.walk(&mut |path, e| {
            if path.depth() == 0 || matches!(e.value, Value::Sequence(_)) {
                return;
            }
            let Some(v) = e.to_str(ds.charset()) else { return };
            let ok = if e.tag == tags::REFERENCED_SOP_INSTANCE_UID {
                t.instances.contains(&v) || t.studies.contains(&v)
            } else if e.tag == tags::SERIES_INSTANCE_UID {
                t.series.contains(&v)
            } else if e.tag == tags::FRAME_OF_REFERENCE_UID || e.tag == Tag::new(0x3006, 0x0024) {
                t.frames.contains(&v)
            } else {
                true
            };
            if !ok {
                dangling.push(format!("{owner} {path} -> {v}"));
            }
        });
    }
    dangling
}

/// Counts nested references by kind, for checking a graph is non-trivial.
pub fn reference_count(corpus: &[DataSet]) -> BTreeMap<Tag, usize> {
    let mut n = BTreeMap::new();
    for ds in corpus {
        ds.walk(&mut |path, e| {
            if path.depth() > 0 && [tags::REFERENCED_SOP_INSTANCE_UID, tags::SERIES_INSTANCE_UID, tags::FRAME_OF_REFERENCE_UID].contains(&e.tag) {
                *n.entry(e.tag).or_default() += 1;
            }
        });
    }
    n
}

fn salt_env(k: &str) -> Option<String> {
    (k == SALT_ENV).then(|| SALT.to_string())
}

/// A job built from TOML the same way the command line builds it.
pub fn job_toml(input: &Path, output: &Path, extra: &str) -> JobConfig {
    try_job_toml(input, output, extra).expect("valid job")
}

pub fn try_job_toml(input: &Path, output: &Path, extra: &str) -> Result<JobConfig, deid_core::pipeline::PipelineError> {
    let text = format!("input = {:?}\noutput = {:?}\nsalt_env = \"{SALT_ENV}\"\njobs = 4\n{extra}", input.display().to_string(), output.display().to_string());
    JobConfig::from_toml(&text, Path::new("/"), &Overrides::default(), &salt_env)
}

pub fn job(input: &Path, output: &Path, profile: &str) -> JobConfig {
    job_toml(input, output, &format!("profile = {profile:?}\n"))
}

/// All `.dcm` files under `root`, sorted.
pub fn dcm_files(root: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = walk(root).into_iter().filter(|p| p.extension().is_some_and(|x| x == "dcm")).collect();
    v.sort();
    v
}

fn walk(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let Ok(rd) = std::fs::read_dir(root) else { return out };
    for e in rd.flatten() {
        let p = e.path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

pub fn read_outputs(root: &Path) -> Vec<DataSet> {
    dcm_files(root)
        .iter()
        .map(|p| deid_core::codec::DicomObject::parse(&std::fs::read(p).unwrap()).unwrap().dataset)
        .collect()
}
