use std::fmt;

use super::{DataSet, TagPath, Value, VR};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IssueKind {
    InvalidDate,
    InvalidTime,
    InvalidDateTime,
    InvalidUid,
    TooLong { length: usize, max: usize },
    Undecodable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub path: TagPath,
    pub vr: VR,
    pub kind: IssueKind,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {:?}", self.path, self.vr, self.kind)
    }
}

/// Checks UID syntax: dot-separated numeric components without leading
/// zeros, at most 64 characters.
pub fn is_valid_uid(uid: &str) -> bool {
    if uid.is_empty() || uid.len() > 64 {
        return false;
    }
    uid.split('.').all(|c| {
        !c.is_empty() && c.bytes().all(|b| b.is_ascii_digit()) && (c == "0" || !c.starts_with('0'))
    })
}

fn days_in_month(year: u32, month: u32) -> u32 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if (year % 4 == 0 && year % 100 != 0) || year % 400 == 0 => 29,
        2 => 28,
        _ => 0,
    }
}

/// `YYYYMMDD` naming a real calendar day.
pub fn is_valid_date(s: &str) -> bool {
    if s.len() != 8 || !s.bytes().all(|b| b.is_ascii_digit()) {
        return false;
    }
    let y: u32 = s[0..4].parse().unwrap_or(0);
    let m: u32 = s[4..6].parse().unwrap_or(0);
    let d: u32 = s[6..8].parse().unwrap_or(0);
    d >= 1 && d <= days_in_month(y, m)
}

/// `HH[MM[SS[.FFFFFF]]]`.
pub fn is_valid_time(s: &str) -> bool {
    let (main, frac) = match s.split_once('.') {
        Some((m, f)) => (m, Some(f)),
        None => (s, None),
    };
    if !matches!(main.len(), 2 | 4 | 6) || !main.bytes().all(|b| b.is_ascii_digit()) {
        return false;
    }
    if let Some(f) = frac {
        if main.len() != 6 || f.is_empty() || f.len() > 6 || !f.bytes().all(|b| b.is_ascii_digit()) {
            return false;
        }
    }
    let field = |i: usize| main[i..i + 2].parse::<u32>().unwrap_or(99);
    field(0) < 24 && (main.len() < 4 || field(2) < 60) && (main.len() < 6 || field(4) < 61)
}

/// `YYYY[MM[DD[HH[MM[SS[.F]]]]]][&ZZXX]`, checked on the date and time parts.
pub fn is_valid_datetime(s: &str) -> bool {
    let body = match s.find(['+', '-']) {
        Some(i) => {
            let off = &s[i + 1..];
            if off.len() != 4 || !off.bytes().all(|b| b.is_ascii_digit()) {
                return false;
            }
            &s[..i]
        }
        None => s,
    };
    let digits = body.split('.').next().unwrap_or("");
    if digits.len() < 4 || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.len() % 2 == 1 {
        return false;
    }
    if digits.len() >= 8 && !is_valid_date(&digits[..8]) {
        return false;
    }
    if digits.len() == 6 {
        let m: u32 = digits[4..6].parse().unwrap_or(0);
        if !(1..=12).contains(&m) {
            return false;
        }
    }
    if body.len() > 8 {
        return is_valid_time(&body[8..]);
    }
    true
}

/// Flags values that downstream readers are likely to reject: malformed
/// dates, times and UIDs, and strings over their VR length limit.
pub fn validate(ds: &DataSet) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    ds.walk(&mut |path, e| {
        if !e.vr.is_string() || matches!(e.value, Value::Sequence(_) | Value::Fragments(_)) {
            return;
        }
        let cs = ds.parent(path).map(|p| p.charset().clone()).unwrap_or_default();
        let push = |issues: &mut Vec<ValidationIssue>, kind| {
            issues.push(ValidationIssue {
                path: path.clone(),
                vr: e.vr,
                kind,
            })
        };
        let Some(values) = e.to_strings(&cs) else {
            push(&mut issues, IssueKind::Undecodable);
            return;
        };
        for v in values.iter().filter(|v| !v.is_empty()) {
            let v = v.trim();
            let ok = match e.vr {
                VR::DA => is_valid_date(v),
                VR::TM => is_valid_time(v),
                VR::DT => is_valid_datetime(v),
                VR::UI => is_valid_uid(v),
                _ => true,
            };
            if !ok {
                let kind = match e.vr {
                    VR::DA => IssueKind::InvalidDate,
                    VR::TM => IssueKind::InvalidTime,
                    VR::DT => IssueKind::InvalidDateTime,
                    _ => IssueKind::InvalidUid,
                };
                push(&mut issues, kind);
            }
            if let Some(max) = e.vr.max_value_len() {
                let longest = if e.vr == VR::PN {
                    v.split('=').map(|g| g.chars().count()).max().unwrap_or(0)
                } else {
                    v.chars().count()
                };
                if longest > max {
                    push(&mut issues, IssueKind::TooLong { length: longest, max });
                }
            }
        }
    });
    issues
}
