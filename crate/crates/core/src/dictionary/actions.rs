use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use super::{DictionaryError, TagPattern};
use crate::codec::Tag;

/// Basic profile action codes, including the compound forms whose choice
/// depends on the object being deidentified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionCode {
    X,
    Z,
    D,
    U,
    C,
    ZD,
    XZ,
    XD,
    XZD,
    XZU,
}

impl ActionCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ActionCode::X => "X",
            ActionCode::Z => "Z",
            ActionCode::D => "D",
            ActionCode::U => "U",
            ActionCode::C => "C",
            ActionCode::ZD => "Z/D",
            ActionCode::XZ => "X/Z",
            ActionCode::XD => "X/D",
            ActionCode::XZD => "X/Z/D",
            ActionCode::XZU => "X/Z/U*",
        }
    }

    pub fn is_compound(self) -> bool {
        matches!(
            self,
            ActionCode::ZD | ActionCode::XZ | ActionCode::XD | ActionCode::XZD | ActionCode::XZU
        )
    }

    pub fn allows_remove(self) -> bool {
        matches!(self, ActionCode::X | ActionCode::XZ | ActionCode::XD | ActionCode::XZD | ActionCode::XZU)
    }

    pub fn allows_zero(self) -> bool {
        matches!(self, ActionCode::Z | ActionCode::ZD | ActionCode::XZ | ActionCode::XZD | ActionCode::XZU)
    }

    pub fn allows_dummy(self) -> bool {
        matches!(self, ActionCode::D | ActionCode::ZD | ActionCode::XD | ActionCode::XZD)
    }
}

impl fmt::Display for ActionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ActionCode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "X" => ActionCode::X,
            "Z" => ActionCode::Z,
            "D" => ActionCode::D,
            "U" => ActionCode::U,
            "C" => ActionCode::C,
            "Z/D" => ActionCode::ZD,
            "X/Z" => ActionCode::XZ,
            "X/D" => ActionCode::XD,
            "X/Z/D" => ActionCode::XZD,
            "X/Z/U*" => ActionCode::XZU,
            other => return Err(format!("unknown action {other:?}")),
        })
    }
}

/// Confidentiality profile options that may override a basic action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProfileOption {
    CleanDesc,
    SafePrivate,
    Uids,
    Device,
    Institution,
    PatientChars,
    FullDates,
    ModifiedDates,
}

impl ProfileOption {
    pub const ALL: [ProfileOption; 8] = [
        ProfileOption::CleanDesc,
        ProfileOption::SafePrivate,
        ProfileOption::Uids,
        ProfileOption::Device,
        ProfileOption::Institution,
        ProfileOption::PatientChars,
        ProfileOption::FullDates,
        ProfileOption::ModifiedDates,
    ];

    /// Name used in the action table file.
    pub fn key(self) -> &'static str {
        match self {
            ProfileOption::CleanDesc => "CleanDesc",
            ProfileOption::SafePrivate => "SafePrivate",
            ProfileOption::Uids => "UIDs",
            ProfileOption::Device => "Device",
            ProfileOption::Institution => "Institution",
            ProfileOption::PatientChars => "PatientChars",
            ProfileOption::FullDates => "FullDates",
            ProfileOption::ModifiedDates => "ModifiedDates",
        }
    }

    pub fn from_key(s: &str) -> Option<Self> {
        ProfileOption::ALL.iter().copied().find(|o| o.key() == s)
    }
}

/// What an enabled option does to a row: keep it, or clean it. For
/// `ModifiedDates`, clean means shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OverrideAction {
    Keep,
    Clean,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeidActionEntry {
    pub pattern: TagPattern,
    pub basic: ActionCode,
    pub overrides: BTreeMap<ProfileOption, OverrideAction>,
    pub line: usize,
}

#[derive(Debug, Clone, Default)]
pub struct ActionTable {
    entries: Vec<DeidActionEntry>,
}

impl ActionTable {
    pub fn entries(&self) -> &[DeidActionEntry] {
        &self.entries
    }

    /// The table shipped with the crate.
    pub fn builtin() -> ActionTable {
        load_action_table(include_str!("../../data/action_table.txt"))
            .expect("built-in action table parses")
    }

    /// Entry for `tag`: exact rows first, then the first matching pattern row.
    pub fn find(&self, tag: Tag) -> Option<&DeidActionEntry> {
        self.entries
            .iter()
            .find(|e| e.pattern.as_exact() == Some(tag))
            .or_else(|| {
                self.entries
                    .iter()
                    .find(|e| !e.pattern.is_exact() && e.pattern.matches(tag))
            })
    }
}

/// Parses the line-oriented table format
/// `TAG_OR_PATTERN;BASIC_ACTION;OPT=ACTION,...` with `#` comments.
pub fn load_action_table(source: &str) -> Result<ActionTable, DictionaryError> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let err = |message: String| DictionaryError::Parse { line, message };
        let fields: Vec<&str> = text.split(';').map(str::trim).collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(err(format!("expected 2 or 3 ';'-separated fields, got {}", fields.len())));
        }
        let pattern: TagPattern = fields[0].parse().map_err(|e| err(format!("{e}")))?;
        let basic: ActionCode = fields[1].parse().map_err(err)?;
        let mut overrides = BTreeMap::new();
        if let Some(opts) = fields.get(2).filter(|s| !s.is_empty()) {
            for item in opts.split(',') {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| err(format!("malformed override {item:?}")))?;
                let option = ProfileOption::from_key(k.trim())
                    .ok_or_else(|| err(format!("unknown option {:?}", k.trim())))?;
                let action = match v.trim() {
                    "K" => OverrideAction::Keep,
                    "C" => OverrideAction::Clean,
                    other => return Err(err(format!("unknown override action {other:?}"))),
                };
                if overrides.insert(option, action).is_some() {
                    return Err(err(format!("option {} given twice", option.key())));
                }
            }
        }
        if !seen.insert(pattern) {
            return Err(DictionaryError::DuplicateTag { line, pattern });
        }
        entries.push(DeidActionEntry {
            pattern,
            basic,
            overrides,
            line,
        });
    }
    Ok(ActionTable { entries })
}
