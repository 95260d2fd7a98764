//! Batch processing: filter, harmonize, deidentify and write a directory tree.

mod config;
mod masks;
mod run;

use std::collections::BTreeSet;

use crate::codec::DicomObject;

pub use config::{FailurePolicy, JobConfig, Overrides, AUDIT_LOG_NAME, DEFAULT_SALT_ENV, DEFAULT_UID_ROOT};
pub use masks::{apply_pixel_masks, MaskError, MaskSelector, PixelMaskSpec, Rect};
pub use run::{run, FileOutcome, RunReport, Summary};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
}

impl PipelineError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::Io(_) => 1,
        }
    }
}

/// SOP classes accepted by a job.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SopClassPolicy {
    Allow(BTreeSet<String>),
    Deny(BTreeSet<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterDecision {
    Keep,
    Reject(String),
}

/// Objects without a SOPClassUID are always rejected.
pub fn filter_sop_class(obj: &DicomObject, policy: &SopClassPolicy) -> FilterDecision {
    let Some(class) = obj.sop_class_uid().filter(|c| !c.is_empty()) else {
        return FilterDecision::Reject("missing SOPClassUID".into());
    };
    match policy {
        SopClassPolicy::Allow(set) if !set.contains(&class) => FilterDecision::Reject(format!("SOP class {class} not on allow list")),
        SopClassPolicy::Deny(set) if set.contains(&class) => FilterDecision::Reject(format!("SOP class {class} on deny list")),
        _ => FilterDecision::Keep,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{tags, DataElement, DataSet, EXPLICIT_VR_LITTLE_ENDIAN, VR};

    const CT: &str = "1.2.840.10008.5.1.4.1.1.2";
    const SC: &str = "1.2.840.10008.5.1.4.1.1.7";

    fn obj(class: Option<&str>) -> DicomObject {
        let mut ds = DataSet::new();
        if let Some(c) = class {
            ds.insert(DataElement::string(tags::SOP_CLASS_UID, VR::UI, c));
        }
        DicomObject::new(EXPLICIT_VR_LITTLE_ENDIAN, ds)
    }

    #[test]
    fn allow_and_deny() {
        let allow = SopClassPolicy::Allow([CT.to_string()].into());
        assert_eq!(filter_sop_class(&obj(Some(CT)), &allow), FilterDecision::Keep);
        assert!(matches!(filter_sop_class(&obj(Some(SC)), &allow), FilterDecision::Reject(_)));
        let deny = SopClassPolicy::Deny([SC.to_string()].into());
        assert!(matches!(filter_sop_class(&obj(Some(SC)), &deny), FilterDecision::Reject(_)));
        assert_eq!(filter_sop_class(&obj(Some(CT)), &deny), FilterDecision::Keep);
        assert!(matches!(filter_sop_class(&obj(None), &deny), FilterDecision::Reject(_)));
    }
}
