use std::str::FromStr;

use super::ProfileError;
use crate::dictionary::ProfileOption;

/// Date shift used by the modified-dates option.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DateShift {
    /// The same offset in days for every patient.
    Fixed(i64),
    /// An offset in `-max_days..=-1` derived from the salted PatientID hash.
    PerPatient { max_days: u32 },
}

impl Default for DateShift {
    fn default() -> Self {
        DateShift::PerPatient { max_days: 365 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProfileOptions {
    pub clean_descriptors: bool,
    pub retain_safe_private: bool,
    pub retain_uids: bool,
    pub retain_full_dates: bool,
    pub retain_modified_dates: bool,
    pub retain_patient_characteristics: bool,
    pub retain_device_identity: bool,
    pub retain_institution_identity: bool,
    pub insert_missing_type2: bool,
    pub date_shift: DateShift,
}

/// `(option, profile string keyword, method suffix, code value, code meaning)`.
const OPTION_INFO: [(ProfileOption, &str, &str, &str, &str); 8] = [
    (ProfileOption::CleanDesc, "cleandesc", "CleanDesc", "113105", "Clean Descriptors Option"),
    (ProfileOption::SafePrivate, "retainsafeprivate", "RetSafePriv", "113111", "Retain Safe Private Option"),
    (ProfileOption::Uids, "retainuids", "RetUIDs", "113110", "Retain UIDs Option"),
    (ProfileOption::Device, "retaindevice", "RetDev", "113109", "Retain Device Identity Option"),
    (ProfileOption::Institution, "retaininstitution", "RetInst", "113112", "Retain Institution Identity Option"),
    (ProfileOption::PatientChars, "retainpatientchars", "RetPatChars", "113108", "Retain Patient Characteristics Option"),
    (ProfileOption::FullDates, "retainfulldates", "RetLongFullDates", "113106", "Retain Longitudinal Temporal Information Full Dates Option"),
    (ProfileOption::ModifiedDates, "retainmodifieddates", "RetLongModifDates", "113107", "Retain Longitudinal Temporal Information Modified Dates Option"),
];

pub const BASIC_PROFILE_CODE: (&str, &str) = ("113100", "Basic Application Confidentiality Profile");

impl ProfileOptions {
    pub fn basic() -> ProfileOptions {
        ProfileOptions::default()
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        if self.retain_full_dates && self.retain_modified_dates {
            return Err(ProfileError::ConflictingOptions(
                "retain full dates and retain modified dates are mutually exclusive".into(),
            ));
        }
        Ok(())
    }

    pub fn is_enabled(&self, opt: ProfileOption) -> bool {
        match opt {
            ProfileOption::CleanDesc => self.clean_descriptors,
            ProfileOption::SafePrivate => self.retain_safe_private,
            ProfileOption::Uids => self.retain_uids,
            ProfileOption::Device => self.retain_device_identity,
            ProfileOption::Institution => self.retain_institution_identity,
            ProfileOption::PatientChars => self.retain_patient_characteristics,
            ProfileOption::FullDates => self.retain_full_dates,
            ProfileOption::ModifiedDates => self.retain_modified_dates,
        }
    }

    pub fn set(&mut self, opt: ProfileOption, on: bool) {
        let field = match opt {
            ProfileOption::CleanDesc => &mut self.clean_descriptors,
            ProfileOption::SafePrivate => &mut self.retain_safe_private,
            ProfileOption::Uids => &mut self.retain_uids,
            ProfileOption::Device => &mut self.retain_device_identity,
            ProfileOption::Institution => &mut self.retain_institution_identity,
            ProfileOption::PatientChars => &mut self.retain_patient_characteristics,
            ProfileOption::FullDates => &mut self.retain_full_dates,
            ProfileOption::ModifiedDates => &mut self.retain_modified_dates,
        };
        *field = on;
    }

    pub fn enabled(&self) -> Vec<ProfileOption> {
        OPTION_INFO
            .iter()
            .map(|i| i.0)
            .filter(|&o| self.is_enabled(o))
            .collect()
    }

    /// Value for DeidentificationMethod (0012,0063): `BasicProfile` plus one
    /// `+Suffix` per enabled option in canonical order.
    pub fn method_string(&self) -> String {
        let mut s = String::from("BasicProfile");
        for info in OPTION_INFO.iter().filter(|i| self.is_enabled(i.0)) {
            s.push('+');
            s.push_str(info.2);
        }
        s
    }

    /// `(code value, code meaning)` pairs for the method code sequence.
    pub fn codes(&self) -> Vec<(&'static str, &'static str)> {
        let mut v = vec![BASIC_PROFILE_CODE];
        v.extend(OPTION_INFO.iter().filter(|i| self.is_enabled(i.0)).map(|i| (i.3, i.4)));
        v
    }

    /// Profile string in the form accepted by `FromStr`.
    pub fn to_profile_string(&self) -> String {
        let mut s = String::from("basic");
        for info in OPTION_INFO.iter().filter(|i| self.is_enabled(i.0)) {
            s.push('+');
            s.push_str(info.1);
        }
        if self.insert_missing_type2 {
            s.push_str("+inserttype2");
        }
        s
    }
}

impl FromStr for ProfileOptions {
    type Err = ProfileError;

    /// Parses `basic+cleandesc+retainsafeprivate+...`. Terms are
    /// case-insensitive and `basic` is optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut opts = ProfileOptions::default();
        for term in s.split('+').map(|t| t.trim().to_ascii_lowercase()) {
            match term.as_str() {
                "" | "basic" => {}
                "inserttype2" => opts.insert_missing_type2 = true,
                t => {
                    let info = OPTION_INFO
                        .iter()
                        .find(|i| i.1 == t)
                        .ok_or_else(|| ProfileError::UnknownOption(t.to_string()))?;
                    opts.set(info.0, true);
                }
            }
        }
        opts.validate()?;
        Ok(opts)
    }
}
