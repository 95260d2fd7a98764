use super::{tags, CodecError, DataElement, DataSet, ParseLimits, VR};

pub const IMPLICIT_VR_LITTLE_ENDIAN: &str = "1.2.840.10008.1.2";
pub const EXPLICIT_VR_LITTLE_ENDIAN: &str = "1.2.840.10008.1.2.1";
pub const EXPLICIT_VR_BIG_ENDIAN: &str = "1.2.840.10008.1.2.2";
pub const DEFLATED_EXPLICIT_VR_LITTLE_ENDIAN: &str = "1.2.840.10008.1.2.1.99";

const IMPLEMENTATION_CLASS: &str = "1.2.826.0.1.3680043.10.1661.1";

/// How the dataset body is encoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Implicit,
    Explicit,
    /// Explicit VR Little Endian metadata with compressed pixel data carried opaquely.
    Encapsulated,
}

impl Encoding {
    pub fn for_transfer_syntax(uid: &str) -> Result<Encoding, CodecError> {
        match uid.trim_end_matches(['\0', ' ']) {
            IMPLICIT_VR_LITTLE_ENDIAN => Ok(Encoding::Implicit),
            EXPLICIT_VR_LITTLE_ENDIAN => Ok(Encoding::Explicit),
            EXPLICIT_VR_BIG_ENDIAN | DEFLATED_EXPLICIT_VR_LITTLE_ENDIAN => {
                Err(CodecError::UnsupportedTransferSyntax(uid.to_string()))
            }
            _ => Ok(Encoding::Encapsulated),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DicomObject {
    pub preamble: [u8; 128],
    pub file_meta: DataSet,
    pub transfer_syntax: String,
    pub dataset: DataSet,
}

impl DicomObject {
    /// Wraps `dataset` with a fresh file meta group derived from its SOP class
    /// and instance UIDs.
    pub fn new(transfer_syntax: &str, dataset: DataSet) -> DicomObject {
        let mut meta = DataSet::new();
        meta.insert(DataElement::bytes(tags::FILE_META_GROUP_LENGTH, VR::UL, vec![0; 4]));
        meta.insert(DataElement::bytes(tags::FILE_META_VERSION, VR::OB, vec![0, 1]));
        if let Some(class) = dataset.string(tags::SOP_CLASS_UID) {
            meta.insert(DataElement::string(tags::MEDIA_STORAGE_SOP_CLASS_UID, VR::UI, class));
        }
        if let Some(inst) = dataset.string(tags::SOP_INSTANCE_UID) {
            meta.insert(DataElement::string(tags::MEDIA_STORAGE_SOP_INSTANCE_UID, VR::UI, inst));
        }
        meta.insert(DataElement::string(tags::TRANSFER_SYNTAX_UID, VR::UI, transfer_syntax));
        meta.insert(DataElement::string(tags::IMPLEMENTATION_CLASS_UID, VR::UI, IMPLEMENTATION_CLASS));
        DicomObject {
            preamble: [0; 128],
            file_meta: meta,
            transfer_syntax: transfer_syntax.to_string(),
            dataset,
        }
    }

    pub fn parse(bytes: &[u8]) -> Result<DicomObject, CodecError> {
        super::parse_file(bytes, &ParseLimits::default())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, CodecError> {
        super::serialize(self)
    }

    pub fn encoding(&self) -> Result<Encoding, CodecError> {
        Encoding::for_transfer_syntax(&self.transfer_syntax)
    }

    pub fn sop_instance_uid(&self) -> Option<String> {
        self.dataset.string(tags::SOP_INSTANCE_UID)
    }

    pub fn sop_class_uid(&self) -> Option<String> {
        self.dataset.string(tags::SOP_CLASS_UID)
    }

    pub fn series_instance_uid(&self) -> Option<String> {
        self.dataset.string(tags::SERIES_INSTANCE_UID)
    }
}
