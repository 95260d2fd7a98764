//! Tag dictionary, the deidentification action table and the safe private
//! tag knowledge base.

mod actions;
mod pattern;
mod safe_private;
mod standard;

use std::sync::OnceLock;

use crate::codec::{Tag, VR};

pub use actions::{
    load_action_table, ActionCode, ActionTable, DeidActionEntry, OverrideAction, ProfileOption,
};
pub use pattern::{PatternParseError, TagPattern};
pub use safe_private::{load_safe_private_kb, SafePrivateEntry, SafePrivateKb};

#[derive(Debug, thiserror::Error)]
pub enum DictionaryError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate entry for {pattern}")]
    DuplicateTag { line: usize, pattern: TagPattern },
    #[error("csv record {record}: {message}")]
    CsvFormat { record: usize, message: String },
}

/// A dictionary entry. `vrs` lists candidate VRs, the first being the one
/// used for implicit VR decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DictEntry {
    pub pattern: TagPattern,
    pub keyword: &'static str,
    pub vrs: &'static [VR],
    pub vm: &'static str,
}

impl DictEntry {
    pub fn vr(&self) -> VR {
        self.vrs[0]
    }
}

fn patterns() -> &'static [DictEntry] {
    static CELL: OnceLock<Vec<DictEntry>> = OnceLock::new();
    CELL.get_or_init(|| {
        standard::PATTERNS
            .iter()
            .map(|&(p, keyword, vrs, vm)| DictEntry {
                pattern: p.parse().expect("built-in pattern"),
                keyword,
                vrs,
                vm,
            })
            .collect()
    })
}

/// Looks up a tag. Exact entries win over repeating-group patterns.
pub fn lookup(tag: Tag) -> Option<DictEntry> {
    let key = tag.as_u32();
    if let Ok(i) = standard::EXACT.binary_search_by_key(&key, |r| r.tag) {
        let r = &standard::EXACT[i];
        return Some(DictEntry {
            pattern: TagPattern::exact(tag),
            keyword: r.keyword,
            vrs: r.vrs,
            vm: r.vm,
        });
    }
    if tag.is_group_length() {
        return Some(DictEntry {
            pattern: TagPattern::exact(tag),
            keyword: "GenericGroupLength",
            vrs: &[VR::UL],
            vm: "1",
        });
    }
    if tag.is_private_creator() {
        return Some(DictEntry {
            pattern: TagPattern::exact(tag),
            keyword: "PrivateCreator",
            vrs: &[VR::LO],
            vm: "1",
        });
    }
    if tag.is_private() {
        return None;
    }
    patterns().iter().find(|e| e.pattern.matches(tag)).copied()
}

/// Keyword of `tag`, or its rendered form when unknown.
pub fn keyword(tag: Tag) -> String {
    lookup(tag)
        .map(|e| e.keyword.to_string())
        .unwrap_or_else(|| tag.to_string())
}

/// The VR used to decode `tag` when the transfer syntax does not carry one.
pub(crate) fn implicit_vr(tag: Tag) -> VR {
    lookup(tag).map(|e| e.vr()).unwrap_or(VR::UN)
}

/// Whether any dictionary entry covers a tag matched by `pattern`.
pub fn covers(pattern: &TagPattern) -> bool {
    if let Some(tag) = pattern.as_exact() {
        return lookup(tag).is_some();
    }
    patterns().iter().any(|e| e.pattern.overlaps(pattern))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patient_name() {
        let e = lookup(Tag::new(0x0010, 0x0010)).unwrap();
        assert_eq!(e.keyword, "PatientName");
        assert_eq!(e.vr(), VR::PN);
    }

    #[test]
    fn overlay_repeating_group() {
        let e = lookup(Tag::new(0x6000, 0x3000)).unwrap();
        assert_eq!(e.keyword, "OverlayData");
        assert!(!e.pattern.is_exact());
        assert_eq!(lookup(Tag::new(0x6002, 0x3000)).unwrap().keyword, "OverlayData");
    }

    #[test]
    fn unknown_private_absent() {
        assert!(lookup(Tag::new(0x0009, 0x0001)).is_none());
        assert!(lookup(Tag::new(0x0009, 0x1001)).is_none());
        assert_eq!(lookup(Tag::new(0x0009, 0x0010)).unwrap().vr(), VR::LO);
    }

    #[test]
    fn candidate_vrs_kept() {
        let e = lookup(Tag::new(0x0028, 0x0106)).unwrap();
        assert_eq!(e.vrs, &[VR::US, VR::SS]);
        assert_eq!(implicit_vr(Tag::new(0x7FE0, 0x0010)), VR::OW);
        assert_eq!(implicit_vr(Tag::new(0x0011, 0x1234)), VR::UN);
    }

    #[test]
    fn group_length() {
        assert_eq!(lookup(Tag::new(0x0008, 0x0000)).unwrap().vr(), VR::UL);
    }
}
