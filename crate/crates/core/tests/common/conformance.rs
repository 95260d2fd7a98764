//! One synthetic dataset per action-table row, run through the profile with
//! Basic and with each single option, checked against the outcome the row
//! text calls for.

use deid_core::codec::{is_valid_date, is_valid_datetime, is_valid_uid, tags, validate, DataElement, DataSet, DicomObject, Tag, TagPath, Value, VR};
use deid_core::dictionary::{self, ActionCode, ActionTable, DeidActionEntry, OverrideAction, ProfileOption};
use deid_core::profile::{apply_profile, Profile, ProfileOptions, UidMap};
use deid_core::text::CleanContext;

const GIVEN: &str = "Quenby";
const FAMILY: &str = "Harlow";
const SOP: &str = "1.2.826.0.1.3680043.9.7433.1.1";
const PLANTED_UID: &str = "1.2.826.0.1.3680043.9.7433.55.1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Absent,
    Empty,
    Dummy,
    Remapped,
    Cleaned,
    Unchanged,
    Shifted,
}

#[derive(Debug)]
pub struct CaseResult {
    pub label: String,
    pub passed: bool,
    pub reason: String,
}

/// Concrete tag used to exercise a row.
fn tag_for(entry: &DeidActionEntry) -> Tag {
    let rep = entry.pattern.representative();
    if rep.element != 0 {
        return rep;
    }
    [0x0010, 0x3000, 0x0001]
        .into_iter()
        .map(|el| Tag::new(rep.group, el))
        .find(|t| entry.pattern.matches(*t))
        .unwrap_or(rep)
}

fn vr_for(tag: Tag) -> VR {
    dictionary::lookup(tag).map(|e| e.vr()).unwrap_or(VR::LO)
}

/// A value carrying the planted name tokens wherever the VR allows text.
fn planted(tag: Tag, vr: VR) -> DataElement {
    let text = format!("{GIVEN} {FAMILY} note");
    let blob = format!("{FAMILY} {GIVEN} 01").into_bytes();
    match vr {
        VR::AE => DataElement::string(tag, vr, FAMILY.to_uppercase()),
        VR::AS => DataElement::string(tag, vr, "045Y"),
        VR::CS => DataElement::string(tag, vr, FAMILY.to_uppercase()),
        VR::DA => DataElement::string(tag, vr, "20200115"),
        VR::DS => DataElement::string(tag, vr, "12.5"),
        VR::DT => DataElement::string(tag, vr, "20200115101500"),
        VR::IS => DataElement::string(tag, vr, "7"),
        VR::TM => DataElement::string(tag, vr, "101500"),
        VR::UI => DataElement::string(tag, vr, PLANTED_UID),
        VR::PN => DataElement::string(tag, vr, format!("{FAMILY}^{GIVEN}")),
        VR::UR => DataElement::string(tag, vr, format!("http://{}.example/x", FAMILY.to_lowercase())),
        VR::SH => DataElement::string(tag, vr, FAMILY),
        VR::LO | VR::ST | VR::LT | VR::UT | VR::UC => DataElement::string(tag, vr, text),
        VR::US | VR::SS => DataElement::bytes(tag, vr, vec![7, 0]),
        VR::UL | VR::SL | VR::FL | VR::AT => DataElement::bytes(tag, vr, vec![7, 0, 0, 0]),
        VR::FD | VR::SV | VR::UV => DataElement::bytes(tag, vr, vec![0, 0, 0, 0, 0, 0, 0x1C, 0x40]),
        VR::SQ => {
            let item: DataSet = [
                DataElement::string(tags::PATIENT_NAME, VR::PN, format!("{FAMILY}^{GIVEN}")),
                DataElement::string(tags::PATIENT_ID, VR::LO, format!("{FAMILY}01")),
            ]
            .into_iter()
            .collect();
            DataElement::sequence(tag, [item])
        }
        _ => DataElement::bytes(tag, vr, blob),
    }
}

/// Outcomes the row allows under `option`.
fn expected(entry: &DeidActionEntry, option: Option<ProfileOption>, vr: VR) -> Vec<Outcome> {
    if let Some(opt) = option {
        match entry.overrides.get(&opt) {
            Some(OverrideAction::Keep) => return vec![Outcome::Unchanged],
            Some(OverrideAction::Clean) if opt == ProfileOption::ModifiedDates => {
                return vec![if matches!(vr, VR::DA | VR::DT) { Outcome::Shifted } else { Outcome::Unchanged }]
            }
            Some(OverrideAction::Clean) => return vec![Outcome::Cleaned],
            None => {}
        }
    }
    let code = entry.basic.as_str();
    let mut v = Vec::new();
    for part in code.split('/') {
        match part {
            "X" => v.push(Outcome::Absent),
            "Z" => v.push(Outcome::Empty),
            "D" => v.push(Outcome::Dummy),
            "U" => v.push(Outcome::Remapped),
            "C" => v.push(Outcome::Cleaned),
            "U*" if vr == VR::UI => v.push(Outcome::Remapped),
            "U*" if vr == VR::SQ => v.push(Outcome::Cleaned),
            _ => {}
        }
    }
    v
}

fn all_text(e: &DataElement, ds: &DataSet) -> String {
    match &e.value {
        Value::Sequence(s) => s
            .items
            .iter()
            .flat_map(|it| it.dataset.iter().map(|c| all_text(c, &it.dataset)).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .join(" "),
        _ => e
            .raw_value(ds.charset())
            .map(|b| String::from_utf8_lossy(&b).into_owned())
            .unwrap_or_default(),
    }
}

fn token_free(e: &DataElement, ds: &DataSet) -> bool {
    let t = all_text(e, ds).to_lowercase();
    !t.contains(&GIVEN.to_lowercase()) && !t.contains(&FAMILY.to_lowercase())
}

fn is_empty_value(e: &DataElement) -> bool {
    match &e.value {
        Value::Sequence(s) => s.items.is_empty(),
        Value::Bytes(b) => b.is_empty(),
        Value::Strings(v) => v.iter().all(|s| s.is_empty()),
        Value::Fragments(_) => false,
    }
}

fn raw(e: &DataElement, ds: &DataSet) -> Vec<u8> {
    e.raw_value(ds.charset()).map(|b| b.into_owned()).unwrap_or_default()
}

/// Whether the output element meets `outcome`; `Err` explains why not.
fn check(outcome: Outcome, before: &DataElement, out: &DataSet) -> Result<(), String> {
    let tag = before.tag;
    let Some(after) = out.get(tag) else {
        return if matches!(outcome, Outcome::Absent | Outcome::Cleaned) { Ok(()) } else { Err("absent".into()) };
    };
    let before_ds = DataSet::new();
    let differs = raw(after, out) != raw(before, &before_ds);
    let strings = after.to_strings(out.charset()).unwrap_or_default();
    let ok = match outcome {
        Outcome::Absent => false,
        Outcome::Empty => is_empty_value(after),
        Outcome::Dummy if after.vr == VR::SQ => !is_empty_value(after) && token_free(after, out),
        Outcome::Dummy => {
            let issues = validate(out).into_iter().filter(|i| i.path == TagPath::root(tag)).count();
            !is_empty_value(after) && differs && issues == 0 && token_free(after, out)
        }
        Outcome::Remapped => after.vr == VR::UI && !strings.is_empty() && strings.iter().all(|s| is_valid_uid(s) && s != PLANTED_UID),
        Outcome::Cleaned => token_free(after, out),
        Outcome::Unchanged if after.vr == VR::SQ => after.items().map(|i| i.len()) == before.items().map(|i| i.len()),
        Outcome::Unchanged => !differs,
        Outcome::Shifted => {
            differs
                && strings.iter().all(|s| match after.vr {
                    VR::DA => is_valid_date(s),
                    _ => is_valid_datetime(s),
                })
        }
    };
    if ok {
        Ok(())
    } else {
        Err(format!("{outcome:?} not met: {:?}", all_text(after, out)))
    }
}

fn profile_for(table: &ActionTable, option: Option<ProfileOption>) -> Profile {
    let mut opts = ProfileOptions::basic();
    if let Some(o) = option {
        opts.set(o, true);
    }
    Profile::new(table, opts).expect("single option profile composes")
}

/// Runs every row of the built-in table under Basic and every single option.
pub fn run_conformance() -> Vec<CaseResult> {
    run_against(&ActionTable::builtin(), &ActionTable::builtin())
}

/// Expectations come from `table`; the profile under test is composed from
/// `applied`.
pub fn run_against(table: &ActionTable, applied: &ActionTable) -> Vec<CaseResult> {
    let uids = UidMap::new("2.25", b"conformance").unwrap();
    let ctx = CleanContext::from_tokens([GIVEN, FAMILY]);
    let mut out = Vec::new();
    let options: Vec<Option<ProfileOption>> = std::iter::once(None).chain(ProfileOption::ALL.into_iter().map(Some)).collect();
    for option in options {
        let profile = profile_for(applied, option);
        let label_opt = option.map(|o| o.key()).unwrap_or("Basic");
        for entry in table.entries() {
            let tag = tag_for(entry);
            let vr = vr_for(tag);
            let elem = planted(tag, vr);
            let mut ds = DataSet::new();
            ds.insert(DataElement::string(tags::SOP_CLASS_UID, VR::UI, "1.2.840.10008.5.1.4.1.1.2"));
            ds.insert(DataElement::string(tags::SOP_INSTANCE_UID, VR::UI, SOP));
            ds.insert(elem.clone());
            let obj = DicomObject::new("1.2.840.10008.1.2.1", ds);
            let label = format!("{label_opt} {} {} {vr}", entry.pattern, entry.basic);
            let allowed = expected(entry, option, vr);
            let result = match apply_profile(&obj, &profile, &uids, &ctx) {
                Err(e) => Err(format!("apply failed: {e}")),
                Ok((res, _)) => {
                    let errs: Vec<String> = allowed.iter().filter_map(|&o| check(o, &elem, &res.dataset).err()).collect();
                    if allowed.is_empty() {
                        Err("row allows no outcome".into())
                    } else if errs.len() < allowed.len() {
                        Ok(())
                    } else {
                        Err(errs.join("; "))
                    }
                }
            };
            out.push(CaseResult { label, passed: result.is_ok(), reason: result.err().unwrap_or_default() });
        }
    }
    out
}

/// Compound action codes present in the table, for coverage checks.
pub fn compound_codes() -> Vec<ActionCode> {
    let mut v: Vec<ActionCode> = ActionTable::builtin().entries().iter().map(|e| e.basic).filter(|c| c.is_compound()).collect();
    v.sort_by_key(|c| c.as_str());
    v.dedup();
    v
}
