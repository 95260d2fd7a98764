use sha2::{Digest, Sha256};

use super::compose::{resolve_multiplex, Resolution};
use super::dummy::{date_offset, dummy_value_for, shift_value};
use super::private::strip_unsafe_private;
use super::{Profile, ProfileError, ResolvedAction, UidMap};
use crate::codec::{tags, CharacterSet, DataElement, DataSet, DicomObject, Item, Sequence, Tag, TagPath, Value, VR};
use crate::dictionary;
use crate::text::CleanContext;

const DICOM_UID_ROOT: &str = "1.2.840.10008.";
const DIGEST_HEX_CHARS: usize = 16;

/// What happened to one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRecord {
    pub path: TagPath,
    pub action: ResolvedAction,
    pub original_present: bool,
    /// Scorer category the action corresponds to.
    pub category: &'static str,
    /// Salted hash prefix of the original value bytes, never the value itself.
    pub original_digest: Option<String>,
    /// Text rules that fired, for Clean.
    pub rules: Vec<String>,
    /// Set when the intended action could not be carried out as is.
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Untabled leaves are kept.
    Standard,
    /// Inside a sequence being replaced or cleaned: untabled text leaves are
    /// cleaned when Clean Descriptors is on.
    Anonymize,
}

struct Run<'a> {
    profile: &'a Profile,
    uids: &'a UidMap,
    ctx: &'a CleanContext,
    day_offset: Option<i64>,
    audit: Vec<AuditRecord>,
}

fn digest(salt: &[u8], e: &DataElement, cs: &CharacterSet) -> Option<String> {
    let bytes = e.raw_value(cs).ok()?;
    let mut h = Sha256::new();
    h.update(salt);
    h.update([0u8]);
    h.update(&bytes[..]);
    let hex: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    Some(hex[..DIGEST_HEX_CHARS].to_string())
}

fn is_standard_class_uid(tag: Tag) -> bool {
    dictionary::lookup(tag).is_some_and(|e| e.keyword.contains("ClassUID") || e.keyword.contains("TransferSyntax"))
}

impl Run<'_> {
    fn record(&mut self, path: TagPath, action: ResolvedAction, digest: Option<String>) -> &mut AuditRecord {
        self.audit.push(AuditRecord {
            path,
            action,
            original_present: true,
            category: action.category(),
            original_digest: digest,
            rules: Vec::new(),
            note: None,
        });
        self.audit.last_mut().unwrap()
    }

    fn untabled_action(&self, e: &DataElement, cs: &CharacterSet, mode: Mode) -> ResolvedAction {
        let opts = &self.profile.options;
        if e.vr == VR::UI && !opts.retain_uids && !is_standard_class_uid(e.tag) {
            let values = e.to_strings(cs).unwrap_or_default();
            if values.iter().any(|v| !v.is_empty() && !v.starts_with(DICOM_UID_ROOT)) {
                return ResolvedAction::RemapUid;
            }
        }
        if mode == Mode::Anonymize && opts.clean_descriptors && e.vr.is_text() {
            return ResolvedAction::Clean;
        }
        ResolvedAction::Keep
    }

    fn level(&mut self, ds: &mut DataSet, parent: Option<(&TagPath, usize)>, mode: Mode) -> Result<(), ProfileError> {
        let cs = ds.charset().clone();
        for tag in ds.tags() {
            if tag.is_private() || tag.is_group_length() {
                continue;
            }
            let path = match parent {
                None => TagPath::root(tag),
                Some((p, i)) => p.child(i, tag),
            };
            let action = match self.profile.table.lookup(tag).map(|e| e.resolution) {
                Some(Resolution::Fixed(a)) => a,
                Some(Resolution::Multiplex(code)) => resolve_multiplex(code, tag, ds, &self.profile.multiplex),
                None => self.untabled_action(ds.get(tag).unwrap(), &cs, mode),
            };
            self.apply(ds, tag, path, action, &cs, mode)?;
        }
        Ok(())
    }

    fn recurse(&mut self, ds: &mut DataSet, tag: Tag, path: &TagPath, mode: Mode) -> Result<(), ProfileError> {
        if let Some(items) = ds.get_mut(tag).and_then(|e| e.items_mut()) {
            for (i, item) in items.iter_mut().enumerate() {
                self.level(&mut item.dataset, Some((path, i)), mode)?;
            }
        }
        Ok(())
    }

    fn apply(&mut self, ds: &mut DataSet, tag: Tag, path: TagPath, action: ResolvedAction, cs: &CharacterSet, mode: Mode) -> Result<(), ProfileError> {
        let Some(elem) = ds.get(tag) else {
            return Ok(());
        };
        let vr = elem.vr;
        let is_seq = matches!(elem.value, Value::Sequence(_));
        let dig = if action == ResolvedAction::Keep { None } else { digest(self.uids.salt(), elem, cs) };
        match action {
            ResolvedAction::Keep => {
                if is_seq {
                    self.recurse(ds, tag, &path, mode)?;
                }
            }
            ResolvedAction::Remove => {
                ds.remove(tag);
                self.record(path, action, dig);
            }
            ResolvedAction::Zero => {
                let value = if is_seq {
                    Value::Sequence(Sequence::new(Vec::new()))
                } else {
                    Value::Bytes(Vec::new())
                };
                ds.insert(DataElement::new(tag, vr, value));
                self.record(path, action, dig);
            }
            ResolvedAction::Dummy | ResolvedAction::Clean if is_seq => {
                self.record(path.clone(), action, dig);
                self.recurse(ds, tag, &path, Mode::Anonymize)?;
            }
            ResolvedAction::Dummy => {
                let seed = match vr {
                    VR::UI => elem.to_str(cs).filter(|s| !s.is_empty()).unwrap_or_else(|| format!("dummy:{path}")),
                    _ => String::new(),
                };
                ds.insert(DataElement::new(tag, vr, dummy_value_for(vr, &seed, self.uids)?));
                self.record(path, action, dig);
            }
            ResolvedAction::RemapUid => {
                if vr != VR::UI {
                    ds.remove(tag);
                    self.record(path, ResolvedAction::Remove, dig).note = Some(format!("remap requested on VR {vr}"));
                    return Ok(());
                }
                let values: Vec<String> = elem
                    .to_strings(cs)
                    .unwrap_or_default()
                    .iter()
                    .map(|v| self.uids.remap_lenient(v))
                    .collect();
                ds.insert(DataElement::new(tag, vr, Value::Strings(values)));
                self.record(path, action, dig);
            }
            ResolvedAction::Clean => self.clean(ds, tag, path, cs, dig),
            ResolvedAction::ShiftDate => self.shift(ds, tag, path, cs, dig),
        }
        Ok(())
    }

    fn clean(&mut self, ds: &mut DataSet, tag: Tag, path: TagPath, cs: &CharacterSet, dig: Option<String>) {
        let elem = ds.get(tag).unwrap();
        let vr = elem.vr;
        if vr == VR::UN || !cs.is_supported() {
            ds.remove(tag);
            let why = if vr == VR::UN { "undecodable VR UN" } else { "unsupported character set" };
            self.record(path, ResolvedAction::Remove, dig).note = Some(format!("clean not possible: {why}"));
            return;
        }
        if !vr.is_text() {
            ds.insert(DataElement::new(tag, vr, Value::Bytes(Vec::new())));
            self.record(path, ResolvedAction::Zero, dig).note = Some(format!("clean not applicable to VR {vr}"));
            return;
        }
        let Some(values) = elem.to_strings(cs) else {
            ds.remove(tag);
            self.record(path, ResolvedAction::Remove, dig).note = Some("value not decodable".into());
            return;
        };
        let mut rules: Vec<String> = Vec::new();
        let mut changed = false;
        let cleaned: Vec<String> = values
            .iter()
            .map(|v| {
                let (out, reds) = self.profile.cleaner.clean(v, self.ctx);
                for r in reds {
                    for id in r.rule.split('+') {
                        if !rules.iter().any(|x| x == id) {
                            rules.push(id.to_string());
                        }
                    }
                }
                changed |= out != *v;
                out
            })
            .collect();
        if changed {
            ds.insert(DataElement::new(tag, vr, Value::Strings(cleaned)));
        }
        self.record(path, ResolvedAction::Clean, dig).rules = rules;
    }

    fn shift(&mut self, ds: &mut DataSet, tag: Tag, path: TagPath, cs: &CharacterSet, dig: Option<String>) {
        let Some(days) = self.day_offset else {
            return;
        };
        let elem = ds.get(tag).unwrap();
        let vr = elem.vr;
        if !matches!(vr, VR::DA | VR::DT) {
            return;
        }
        let shifted: Option<Vec<String>> = elem
            .to_strings(cs)
            .unwrap_or_default()
            .iter()
            .map(|v| shift_value(vr, v, days))
            .collect();
        match shifted {
            Some(values) => {
                ds.insert(DataElement::new(tag, vr, Value::Strings(values)));
                self.record(path, ResolvedAction::ShiftDate, dig);
            }
            None => {
                ds.insert(DataElement::new(tag, vr, Value::Bytes(Vec::new())));
                self.record(path, ResolvedAction::Zero, dig).note = Some("unparseable date".into());
            }
        }
    }
}

/// Splits the method string into values of at most 64 characters at `+`.
fn method_values(method: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for part in method.split('+') {
        match out.last_mut() {
            Some(last) if last.len() + 1 + part.len() <= 64 => {
                last.push('+');
                last.push_str(part);
            }
            _ => out.push(part.to_string()),
        }
    }
    out
}

fn code_item(value: &str, meaning: &str) -> DataSet {
    [
        DataElement::string(tags::CODE_VALUE, VR::SH, value),
        DataElement::string(tags::CODING_SCHEME_DESIGNATOR, VR::SH, "DCM"),
        DataElement::string(tags::CODE_MEANING, VR::LO, meaning),
    ]
    .into_iter()
    .collect()
}

fn write_markers(ds: &mut DataSet, profile: &Profile) {
    let opts = &profile.options;
    ds.insert(DataElement::string(tags::PATIENT_IDENTITY_REMOVED, VR::CS, "YES"));
    ds.insert(DataElement::strings(tags::DEIDENTIFICATION_METHOD, VR::LO, method_values(&opts.method_string())));
    let items = opts.codes().into_iter().map(|(v, m)| code_item(v, m));
    ds.insert(DataElement::new(
        tags::DEIDENTIFICATION_METHOD_CODE_SEQUENCE,
        VR::SQ,
        Value::Sequence(Sequence::new(items.map(Item::new).collect())),
    ));
    let flag = if opts.retain_modified_dates {
        "MODIFIED"
    } else if opts.retain_full_dates {
        "UNMODIFIED"
    } else {
        "REMOVED"
    };
    ds.insert(DataElement::string(tags::LONGITUDINAL_TEMPORAL_INFORMATION_MODIFIED, VR::CS, flag));
}

/// Deidentifies one object. The UID map is shared by every object of a run
/// so that references between objects stay consistent.
pub fn apply_profile(obj: &DicomObject, profile: &Profile, uids: &UidMap, ctx: &CleanContext) -> Result<(DicomObject, Vec<AuditRecord>), ProfileError> {
    let mut out = obj.clone();
    let ds = &mut out.dataset;
    let already_shifted = ds
        .string(tags::LONGITUDINAL_TEMPORAL_INFORMATION_MODIFIED)
        .is_some_and(|v| v == "MODIFIED");
    let day_offset = (profile.options.retain_modified_dates && !already_shifted).then(|| {
        let pid = ds.string(tags::PATIENT_ID).unwrap_or_default();
        date_offset(profile.options.date_shift, uids.salt(), &pid)
    });
    let mut run = Run {
        profile,
        uids,
        ctx,
        day_offset,
        audit: Vec::new(),
    };

    for path in strip_unsafe_private(ds, &profile.safe_private, profile.options.retain_safe_private) {
        run.audit.push(AuditRecord {
            path,
            action: ResolvedAction::Remove,
            original_present: true,
            category: "remove",
            original_digest: None,
            rules: vec!["private".into()],
            note: None,
        });
    }
    run.level(ds, None, Mode::Standard)?;

    if profile.options.insert_missing_type2 {
        for tag in insert_missing_type2(ds, &profile.type2) {
            run.audit.push(AuditRecord {
                path: TagPath::root(tag),
                action: ResolvedAction::Zero,
                original_present: false,
                category: "remove",
                original_digest: None,
                rules: vec!["type2".into()],
                note: Some("inserted empty".into()),
            });
        }
    }
    write_markers(ds, profile);

    if let Some(sop) = out.dataset.string(tags::SOP_INSTANCE_UID) {
        out.file_meta.insert(DataElement::string(tags::MEDIA_STORAGE_SOP_INSTANCE_UID, VR::UI, sop));
    }
    Ok((out, run.audit))
}

/// Inserts a zero-length element for each listed tag that is absent and
/// returns the inserted tags.
pub fn insert_missing_type2(ds: &mut DataSet, required: &[Tag]) -> Vec<Tag> {
    let mut inserted = Vec::new();
    for &tag in required {
        if !ds.contains(tag) {
            let vr = dictionary::lookup(tag).map(|e| e.vr()).unwrap_or(VR::LO);
            ds.insert(DataElement::empty(tag, vr));
            inserted.push(tag);
        }
    }
    inserted
}
