use chrono::{Duration, NaiveDate};
use sha2::{Digest, Sha256};

use super::{DateShift, ProfileError, UidMap};
use crate::codec::{Value, VR};

pub const DUMMY_DATE: &str = "19000101";
pub const DUMMY_TIME: &str = "000000";
pub const DUMMY_DATETIME: &str = "19000101000000";
pub const DUMMY_TEXT: &str = "ANONYMIZED";
pub const DUMMY_NUMBER: &str = "0";
pub const DUMMY_CODE: &str = "UNKNOWN";
pub const DUMMY_AGE: &str = "000Y";

/// Fixed dummy value for a VR. UI values come from the UID map using `seed`
/// so that repeated runs agree. UN has no meaningful dummy and is zeroed.
pub fn dummy_value_for(vr: VR, seed: &str, uids: &UidMap) -> Result<Value, ProfileError> {
    let s = |v: &str| Value::Strings(vec![v.to_string()]);
    Ok(match vr {
        VR::SQ => return Err(ProfileError::DummySequence),
        VR::DA => s(DUMMY_DATE),
        VR::TM => s(DUMMY_TIME),
        VR::DT => s(DUMMY_DATETIME),
        VR::DS | VR::IS => s(DUMMY_NUMBER),
        VR::CS => s(DUMMY_CODE),
        VR::AS => s(DUMMY_AGE),
        VR::UI => s(&uids.remap_lenient(seed)),
        VR::UN => Value::Bytes(Vec::new()),
        VR::OB => Value::Bytes(vec![0; 2]),
        vr if vr.is_string() => s(DUMMY_TEXT),
        vr => Value::Bytes(vec![0; vr.binary_unit().unwrap_or(2).max(2)]),
    })
}

/// Offset in days applied to every date of a patient.
pub fn date_offset(shift: DateShift, salt: &[u8], patient_id: &str) -> i64 {
    match shift {
        DateShift::Fixed(d) => d,
        DateShift::PerPatient { max_days } => {
            let mut h = Sha256::new();
            h.update(salt);
            h.update([0u8]);
            h.update(patient_id.trim().as_bytes());
            let d = h.finalize();
            let n = u64::from_be_bytes(d[..8].try_into().unwrap());
            -((n % max_days.max(1) as u64) as i64 + 1)
        }
    }
}

fn shift_da(v: &str, days: i64) -> Option<String> {
    if v.len() != 8 {
        return None;
    }
    let d = NaiveDate::parse_from_str(v, "%Y%m%d").ok()?;
    Some(d.checked_add_signed(Duration::days(days))?.format("%Y%m%d").to_string())
}

/// Shifts one DA or DT value, including `start-end` ranges with either
/// end open. Returns None when the value is not a parseable date.
pub fn shift_value(vr: VR, value: &str, days: i64) -> Option<String> {
    let value = value.trim();
    if value.is_empty() {
        return Some(String::new());
    }
    let one = |v: &str| -> Option<String> {
        if v.is_empty() {
            return Some(String::new());
        }
        match vr {
            VR::DA => shift_da(v, days),
            VR::DT if v.len() >= 8 => Some(format!("{}{}", shift_da(&v[..8], days)?, &v[8..])),
            _ => None,
        }
    };
    // A DT may carry a "-hhmm" zone offset, so only a dash followed by a full
    // date or by nothing separates a range.
    let range_dash = value.char_indices().filter(|&(_, c)| c == '-').map(|(i, _)| i).find(|&i| {
        let rest = &value[i + 1..];
        vr == VR::DA || rest.is_empty() || rest.len() >= 8
    });
    match range_dash {
        Some(i) => Some(format!("{}-{}", one(&value[..i])?, one(&value[i + 1..])?)),
        None => one(value),
    }
}
