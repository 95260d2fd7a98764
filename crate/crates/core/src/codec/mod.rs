//! DICOM Part 10 reading and writing in Implicit and Explicit VR Little
//! Endian. Values are kept as raw bytes so untouched elements are written
//! back exactly as read.

mod charset;
mod dataset;
mod element;
mod object;
mod path;
mod read;
mod tag;
mod validate;
mod vr;
mod write;

pub use charset::CharacterSet;
pub use dataset::DataSet;
pub use element::{DataElement, Item, Sequence, Value};
pub use object::{
    DicomObject, Encoding, DEFLATED_EXPLICIT_VR_LITTLE_ENDIAN, EXPLICIT_VR_BIG_ENDIAN,
    EXPLICIT_VR_LITTLE_ENDIAN, IMPLICIT_VR_LITTLE_ENDIAN,
};
pub use path::{PathParseError, TagPath};
pub use read::{parse_dataset, parse_file, ParseLimits};
pub use tag::{tags, Tag, TagParseError};
pub use validate::{is_valid_date, is_valid_datetime, is_valid_time, is_valid_uid, validate, IssueKind, ValidationIssue};
pub use vr::{VrParseError, VR};
pub use write::{serialize, write_dataset};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("malformed file: {0}")]
    MalformedFile(String),
    #[error("element {tag} truncated at offset {offset}")]
    TruncatedElement { tag: Tag, offset: usize },
    #[error("element {tag} has odd length {length}")]
    UnevenLength { tag: Tag, length: u32 },
    #[error("sequence nesting exceeds {limit}")]
    NestingTooDeep { limit: usize },
    #[error("unsupported transfer syntax {0}")]
    UnsupportedTransferSyntax(String),
    #[error("element {tag} has invalid VR bytes {code:?}")]
    InvalidVr { tag: Tag, code: [u8; 2] },
    #[error("value of {tag} ({vr}) is {length} characters, limit {max}")]
    ValueTooLong { tag: Tag, vr: VR, length: usize, max: usize },
    #[error("odd-length value of {tag} cannot be padded for VR {vr}")]
    OddLengthUnpaddable { tag: Tag, vr: VR },
    #[error("{tag} expects VR {expected}, got {found}")]
    VrMismatch { tag: Tag, expected: VR, found: VR },
    #[error("length {length} of {tag} does not fit its encoding")]
    LengthOverflow { tag: Tag, length: u64 },
    #[error("value of {tag} cannot be encoded in the dataset character set")]
    Unencodable { tag: Tag },
}
