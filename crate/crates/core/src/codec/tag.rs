use std::fmt;
use std::str::FromStr;

/// A DICOM attribute tag, ordered by `(group, element)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag {
    pub group: u16,
    pub element: u16,
}

impl Tag {
    pub const fn new(group: u16, element: u16) -> Self {
        Tag { group, element }
    }

    pub fn is_private(self) -> bool {
        self.group % 2 == 1
    }

    /// Private Creator elements occupy `(gggg,0010)`..`(gggg,00FF)` of an odd group.
    pub fn is_private_creator(self) -> bool {
        self.is_private() && (0x0010..=0x00FF).contains(&self.element)
    }

    /// For a private data element `(gggg,xxyy)` returns the tag of the creator
    /// element `(gggg,00xx)` that reserves its block.
    pub fn private_creator_tag(self) -> Option<Tag> {
        if !self.is_private() {
            return None;
        }
        let block = self.element >> 8;
        if block < 0x10 {
            return None;
        }
        Some(Tag::new(self.group, block))
    }

    pub fn is_group_length(self) -> bool {
        self.element == 0x0000
    }

    pub fn is_file_meta(self) -> bool {
        self.group == 0x0002
    }

    pub(crate) fn as_u32(self) -> u32 {
        (u32::from(self.group) << 16) | u32::from(self.element)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:04X},{:04X})", self.group, self.element)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid tag notation: {0:?}")]
pub struct TagParseError(pub String);

impl FromStr for Tag {
    type Err = TagParseError;

    /// Accepts `(GGGG,EEEE)`, `GGGG,EEEE` and `GGGGEEEE`, any hex case.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || TagParseError(s.to_string());
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(t);
        let (g, e) = match t.split_once(',') {
            Some((g, e)) => (g.trim(), e.trim()),
            None if t.len() == 8 => t.split_at(4),
            None => return Err(err()),
        };
        if g.len() != 4 || e.len() != 4 {
            return Err(err());
        }
        let group = u16::from_str_radix(g, 16).map_err(|_| err())?;
        let element = u16::from_str_radix(e, 16).map_err(|_| err())?;
        Ok(Tag::new(group, element))
    }
}

/// Delimiter tags used by the encoding of sequences.
pub(crate) const ITEM: Tag = Tag::new(0xFFFE, 0xE000);
pub(crate) const ITEM_DELIMITATION: Tag = Tag::new(0xFFFE, 0xE00D);
pub(crate) const SEQUENCE_DELIMITATION: Tag = Tag::new(0xFFFE, 0xE0DD);

/// Well-known attribute tags referenced throughout the crate.
pub mod tags {
    use super::Tag;

    pub const FILE_META_GROUP_LENGTH: Tag = Tag::new(0x0002, 0x0000);
    pub const FILE_META_VERSION: Tag = Tag::new(0x0002, 0x0001);
    pub const MEDIA_STORAGE_SOP_CLASS_UID: Tag = Tag::new(0x0002, 0x0002);
    pub const MEDIA_STORAGE_SOP_INSTANCE_UID: Tag = Tag::new(0x0002, 0x0003);
    pub const TRANSFER_SYNTAX_UID: Tag = Tag::new(0x0002, 0x0010);
    pub const IMPLEMENTATION_CLASS_UID: Tag = Tag::new(0x0002, 0x0012);
    pub const SPECIFIC_CHARACTER_SET: Tag = Tag::new(0x0008, 0x0005);
    pub const SOP_CLASS_UID: Tag = Tag::new(0x0008, 0x0016);
    pub const SOP_INSTANCE_UID: Tag = Tag::new(0x0008, 0x0018);
    pub const STUDY_DATE: Tag = Tag::new(0x0008, 0x0020);
    pub const MODALITY: Tag = Tag::new(0x0008, 0x0060);
    pub const REFERRING_PHYSICIAN_NAME: Tag = Tag::new(0x0008, 0x0090);
    pub const STUDY_DESCRIPTION: Tag = Tag::new(0x0008, 0x1030);
    pub const SERIES_DESCRIPTION: Tag = Tag::new(0x0008, 0x103E);
    pub const REFERENCED_SERIES_SEQUENCE: Tag = Tag::new(0x0008, 0x1115);
    pub const REFERENCED_SOP_CLASS_UID: Tag = Tag::new(0x0008, 0x1150);
    pub const REFERENCED_SOP_INSTANCE_UID: Tag = Tag::new(0x0008, 0x1155);
    pub const REFERENCED_INSTANCE_SEQUENCE: Tag = Tag::new(0x0008, 0x114A);
    pub const PATIENT_NAME: Tag = Tag::new(0x0010, 0x0010);
    pub const PATIENT_ID: Tag = Tag::new(0x0010, 0x0020);
    pub const PATIENT_BIRTH_DATE: Tag = Tag::new(0x0010, 0x0030);
    pub const ADDITIONAL_PATIENT_HISTORY: Tag = Tag::new(0x0010, 0x21B0);
    pub const PATIENT_IDENTITY_REMOVED: Tag = Tag::new(0x0012, 0x0062);
    pub const DEIDENTIFICATION_METHOD: Tag = Tag::new(0x0012, 0x0063);
    pub const DEIDENTIFICATION_METHOD_CODE_SEQUENCE: Tag = Tag::new(0x0012, 0x0064);
    pub const STUDY_INSTANCE_UID: Tag = Tag::new(0x0020, 0x000D);
    pub const SERIES_INSTANCE_UID: Tag = Tag::new(0x0020, 0x000E);
    pub const SERIES_NUMBER: Tag = Tag::new(0x0020, 0x0011);
    pub const INSTANCE_NUMBER: Tag = Tag::new(0x0020, 0x0013);
    pub const FRAME_OF_REFERENCE_UID: Tag = Tag::new(0x0020, 0x0052);
    pub const IMAGE_COMMENTS: Tag = Tag::new(0x0020, 0x4000);
    pub const SAMPLES_PER_PIXEL: Tag = Tag::new(0x0028, 0x0002);
    pub const PLANAR_CONFIGURATION: Tag = Tag::new(0x0028, 0x0006);
    pub const NUMBER_OF_FRAMES: Tag = Tag::new(0x0028, 0x0008);
    pub const ROWS: Tag = Tag::new(0x0028, 0x0010);
    pub const COLUMNS: Tag = Tag::new(0x0028, 0x0011);
    pub const BITS_ALLOCATED: Tag = Tag::new(0x0028, 0x0100);
    pub const LONGITUDINAL_TEMPORAL_INFORMATION_MODIFIED: Tag = Tag::new(0x0028, 0x0303);
    pub const CODE_VALUE: Tag = Tag::new(0x0008, 0x0100);
    pub const CODING_SCHEME_DESIGNATOR: Tag = Tag::new(0x0008, 0x0102);
    pub const CODE_MEANING: Tag = Tag::new(0x0008, 0x0104);
    pub const TEXT_VALUE: Tag = Tag::new(0x0040, 0xA160);
    pub const CONTENT_SEQUENCE: Tag = Tag::new(0x0040, 0xA730);
    pub const PIXEL_DATA: Tag = Tag::new(0x7FE0, 0x0010);
}
