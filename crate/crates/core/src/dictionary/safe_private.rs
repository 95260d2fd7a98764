use std::collections::HashMap;
use std::io::Read;

use super::DictionaryError;
use crate::codec::{Tag, VR};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafePrivateEntry {
    pub private_creator: String,
    pub group: u16,
    pub element_offset: u8,
    pub vrs: Vec<VR>,
    pub meaning: String,
}

/// Safe private attributes keyed by `(creator, group, offset)`.
#[derive(Debug, Clone, Default)]
pub struct SafePrivateKb {
    entries: HashMap<(String, u16, u8), SafePrivateEntry>,
}

fn creator_key(creator: &str) -> String {
    creator.trim_matches(|c: char| c == ' ' || c == '\0').to_string()
}

impl SafePrivateKb {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, entry: SafePrivateEntry) {
        let key = (
            creator_key(&entry.private_creator),
            entry.group,
            entry.element_offset,
        );
        self.entries
            .entry(key)
            .and_modify(|e| {
                for vr in &entry.vrs {
                    if !e.vrs.contains(vr) {
                        e.vrs.push(*vr);
                    }
                }
            })
            .or_insert(entry);
    }

    /// Entry for a private data element whose block is reserved by `creator`.
    pub fn get(&self, creator: &str, tag: Tag) -> Option<&SafePrivateEntry> {
        if !tag.is_private() || tag.private_creator_tag().is_none() {
            return None;
        }
        let offset = (tag.element & 0xFF) as u8;
        self.entries.get(&(creator_key(creator), tag.group, offset))
    }

    pub fn is_safe(&self, creator: &str, tag: Tag) -> bool {
        self.get(creator, tag).is_some()
    }

    pub fn entries(&self) -> impl Iterator<Item = &SafePrivateEntry> {
        self.entries.values()
    }
}

fn parse_hex_u16(s: &str) -> Option<u16> {
    let s = s.trim();
    let s = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    if s.is_empty() || s.len() > 4 {
        return None;
    }
    u16::from_str_radix(s, 16).ok()
}

fn parse_offset(s: &str) -> Option<u8> {
    let s = s.trim();
    let s = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .or_else(|| s.strip_prefix("xx"))
        .or_else(|| s.strip_prefix("XX"))
        .unwrap_or(s);
    if s.is_empty() || s.len() > 2 {
        return None;
    }
    u8::from_str_radix(s, 16).ok()
}

fn is_header(record: &csv::StringRecord) -> bool {
    record
        .get(0)
        .map(|f| f.trim().eq_ignore_ascii_case("private_creator"))
        .unwrap_or(false)
}

/// Reads `private_creator,group_hex,element_offset_hex,vr_list,meaning`.
/// A header row is optional. VR lists are separated by `|` or `/`.
pub fn load_safe_private_kb<R: Read>(reader: R) -> Result<SafePrivateKb, DictionaryError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut kb = SafePrivateKb::default();
    for (idx, rec) in rdr.records().enumerate() {
        let record_no = idx + 1;
        let err = |message: String| DictionaryError::CsvFormat {
            record: record_no,
            message,
        };
        let rec = rec.map_err(|e| err(e.to_string()))?;
        if idx == 0 && is_header(&rec) {
            continue;
        }
        if rec.len() != 5 {
            return Err(err(format!("expected 5 columns, got {}", rec.len())));
        }
        let creator = creator_key(&rec[0]);
        if creator.is_empty() {
            return Err(err("empty private creator".into()));
        }
        let group = parse_hex_u16(&rec[1]).ok_or_else(|| err(format!("bad group {:?}", &rec[1])))?;
        if group % 2 == 0 {
            return Err(err(format!("group {group:04X} is not private")));
        }
        let element_offset =
            parse_offset(&rec[2]).ok_or_else(|| err(format!("bad element offset {:?}", &rec[2])))?;
        let mut vrs = Vec::new();
        for code in rec[3].split(['|', '/']).map(str::trim).filter(|c| !c.is_empty()) {
            let vr: VR = code.parse().map_err(|_| err(format!("bad VR {code:?}")))?;
            if !vrs.contains(&vr) {
                vrs.push(vr);
            }
        }
        kb.insert(SafePrivateEntry {
            private_creator: creator,
            group,
            element_offset,
            vrs,
            meaning: rec[4].trim().to_string(),
        });
    }
    Ok(kb)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_LINES: &str = "private_creator,group_hex,element_offset_hex,vr_list,meaning\n\
        SIEMENS CSA HEADER,0029,10,OB,CSA Image Header Info\n";

    #[test]
    fn creator_block_lookup() {
        let kb = load_safe_private_kb(TWO_LINES.as_bytes()).unwrap();
        assert_eq!(kb.len(), 1);
        assert!(kb.is_safe("SIEMENS CSA HEADER", Tag::new(0x0029, 0x1010)));
        assert!(kb.is_safe("SIEMENS CSA HEADER ", Tag::new(0x0029, 0x1110)));
        assert!(!kb.is_safe("SIEMENS CSA HEADER", Tag::new(0x0029, 0x1011)));
        assert!(!kb.is_safe("GEMS_IDEN_01", Tag::new(0x0029, 0x1010)));
        assert!(!kb.is_safe("SIEMENS CSA HEADER", Tag::new(0x0029, 0x0010)));
    }

    #[test]
    fn multiple_vrs_kept() {
        let csv = "GEMS_ACQU_01,0019,xx0F,DS|SS/US,Horizontal frame\n";
        let kb = load_safe_private_kb(csv.as_bytes()).unwrap();
        let e = kb.get("GEMS_ACQU_01", Tag::new(0x0019, 0x100F)).unwrap();
        assert_eq!(e.vrs, vec![VR::DS, VR::SS, VR::US]);
    }

    #[test]
    fn three_columns_rejected() {
        let r = load_safe_private_kb("SIEMENS CSA HEADER,0029,10\n".as_bytes());
        assert!(matches!(r, Err(DictionaryError::CsvFormat { record: 1, .. })));
    }

    #[test]
    fn bad_fields_rejected() {
        for line in [
            "X,0028,10,OB,m\n",
            "X,zz,10,OB,m\n",
            "X,0029,100,OB,m\n",
            "X,0029,10,QQ,m\n",
            ",0029,10,OB,m\n",
        ] {
            assert!(load_safe_private_kb(line.as_bytes()).is_err(), "{line}");
        }
    }

    #[test]
    fn sample_file_loads() {
        let kb = load_safe_private_kb(include_str!("../../data/safe_private_sample.csv").as_bytes())
            .unwrap();
        assert!(kb.len() >= 5);
    }
}
