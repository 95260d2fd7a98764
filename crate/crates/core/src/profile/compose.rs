use std::collections::HashMap;
use std::fmt;

use super::{ProfileError, ProfileOptions};
use crate::codec::{DataSet, Tag, VR};
use crate::dictionary::{self, ActionCode, ActionTable, OverrideAction, ProfileOption, TagPattern};

/// Concrete action applied to one element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResolvedAction {
    Remove,
    Zero,
    Dummy,
    RemapUid,
    Clean,
    Keep,
    ShiftDate,
}

impl ResolvedAction {
    pub fn as_str(self) -> &'static str {
        match self {
            ResolvedAction::Remove => "remove",
            ResolvedAction::Zero => "zero",
            ResolvedAction::Dummy => "dummy",
            ResolvedAction::RemapUid => "remap_uid",
            ResolvedAction::Clean => "clean",
            ResolvedAction::Keep => "keep",
            ResolvedAction::ShiftDate => "shift_date",
        }
    }

    /// Scorer category that this action satisfies.
    pub fn category(self) -> &'static str {
        match self {
            ResolvedAction::Remove | ResolvedAction::Zero => "remove",
            ResolvedAction::Dummy => "replace_dummy",
            ResolvedAction::RemapUid => "remap_uid",
            ResolvedAction::Clean => "text_remove",
            ResolvedAction::ShiftDate => "date_action",
            ResolvedAction::Keep => "retain",
        }
    }
}

impl fmt::Display for ResolvedAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An effective table entry: either fixed, or a compound action decided
/// per object.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    Fixed(ResolvedAction),
    Multiplex(ActionCode),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveEntry {
    pub pattern: TagPattern,
    pub basic: ActionCode,
    pub resolution: Resolution,
}

/// Action table with the profile options folded in.
#[derive(Debug, Clone, Default)]
pub struct EffectiveTable {
    entries: Vec<EffectiveEntry>,
    exact: HashMap<Tag, usize>,
    patterns: Vec<usize>,
}

impl EffectiveTable {
    pub fn entries(&self) -> &[EffectiveEntry] {
        &self.entries
    }

    /// Exact rows win over pattern rows; among patterns the first listed wins.
    pub fn lookup(&self, tag: Tag) -> Option<&EffectiveEntry> {
        if let Some(&i) = self.exact.get(&tag) {
            return Some(&self.entries[i]);
        }
        self.patterns
            .iter()
            .map(|&i| &self.entries[i])
            .find(|e| e.pattern.matches(tag))
    }
}

fn basic_resolution(code: ActionCode) -> Resolution {
    match code {
        ActionCode::X => Resolution::Fixed(ResolvedAction::Remove),
        ActionCode::Z => Resolution::Fixed(ResolvedAction::Zero),
        ActionCode::D => Resolution::Fixed(ResolvedAction::Dummy),
        ActionCode::U => Resolution::Fixed(ResolvedAction::RemapUid),
        ActionCode::C => Resolution::Fixed(ResolvedAction::Clean),
        compound => Resolution::Multiplex(compound),
    }
}

fn is_date_vr(pattern: &TagPattern) -> bool {
    dictionary::lookup(pattern.representative()).is_some_and(|e| matches!(e.vr(), VR::DA | VR::DT))
}

fn override_action(opt: ProfileOption, action: OverrideAction, pattern: &TagPattern) -> ResolvedAction {
    match (opt, action) {
        (_, OverrideAction::Keep) => ResolvedAction::Keep,
        (ProfileOption::ModifiedDates, OverrideAction::Clean) if is_date_vr(pattern) => ResolvedAction::ShiftDate,
        (ProfileOption::ModifiedDates, OverrideAction::Clean) => ResolvedAction::Keep,
        (_, OverrideAction::Clean) => ResolvedAction::Clean,
    }
}

/// Folds the enabled options into the table. An option override replaces
/// the basic action; Keep yields to any other enabled override, and two
/// different non-Keep overrides on one row are an error.
pub fn compose_profile(table: &ActionTable, opts: &ProfileOptions) -> Result<EffectiveTable, ProfileError> {
    opts.validate()?;
    let mut out = EffectiveTable::default();
    for entry in table.entries() {
        let mut chosen: Option<(ProfileOption, ResolvedAction)> = None;
        let mut keep = false;
        for (&opt, &action) in &entry.overrides {
            if !opts.is_enabled(opt) {
                continue;
            }
            match override_action(opt, action, &entry.pattern) {
                ResolvedAction::Keep => keep = true,
                a => match chosen {
                    Some((prev, b)) if b != a => {
                        return Err(ProfileError::ConflictingOverride {
                            pattern: entry.pattern.to_string(),
                            first: prev.key().to_string(),
                            second: opt.key().to_string(),
                        })
                    }
                    _ => chosen = Some((opt, a)),
                },
            }
        }
        let resolution = match (chosen, keep) {
            (Some((_, a)), _) => Resolution::Fixed(a),
            (None, true) => Resolution::Fixed(ResolvedAction::Keep),
            (None, false) => basic_resolution(entry.basic),
        };
        let idx = out.entries.len();
        match entry.pattern.as_exact() {
            Some(tag) => {
                out.exact.insert(tag, idx);
            }
            None => out.patterns.push(idx),
        }
        out.entries.push(EffectiveEntry {
            pattern: entry.pattern,
            basic: entry.basic,
            resolution,
        });
    }
    Ok(out)
}

/// Attribute type used to choose among the alternatives of a compound action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttributeType {
    Type1,
    Type2,
    Type3,
}

impl AttributeType {
    fn preference(self) -> [ResolvedAction; 3] {
        use ResolvedAction::*;
        match self {
            AttributeType::Type1 => [Dummy, Zero, Remove],
            AttributeType::Type2 => [Zero, Dummy, Remove],
            AttributeType::Type3 => [Remove, Zero, Dummy],
        }
    }
}

/// Per-tag attribute types. Unlisted tags are type 3, except VR UI which
/// defaults to type 1.
#[derive(Debug, Clone, Default)]
pub struct MultiplexPolicy {
    types: HashMap<Tag, AttributeType>,
}

impl MultiplexPolicy {
    pub fn builtin() -> MultiplexPolicy {
        load_multiplex_policy(include_str!("../../data/multiplex_policy.txt")).expect("built-in multiplex policy parses")
    }

    pub fn set(&mut self, tag: Tag, ty: AttributeType) {
        self.types.insert(tag, ty);
    }

    pub fn attribute_type(&self, tag: Tag, vr: VR) -> AttributeType {
        match self.types.get(&tag) {
            Some(&t) => t,
            None if vr == VR::UI => AttributeType::Type1,
            None => AttributeType::Type3,
        }
    }
}

/// Parses `TAG;TYPE` lines with `#` comments.
pub fn load_multiplex_policy(source: &str) -> Result<MultiplexPolicy, ProfileError> {
    let mut p = MultiplexPolicy::default();
    for (i, raw) in source.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let err = |message: String| ProfileError::PolicyFormat { line: i + 1, message };
        let (tag, ty) = text.split_once(';').ok_or_else(|| err("expected TAG;TYPE".into()))?;
        let tag: Tag = tag.trim().parse().map_err(|e| err(format!("{e}")))?;
        let ty = match ty.trim() {
            "1" => AttributeType::Type1,
            "2" => AttributeType::Type2,
            "3" => AttributeType::Type3,
            other => return Err(err(format!("unknown attribute type {other:?}"))),
        };
        if p.types.insert(tag, ty).is_some() {
            return Err(err(format!("duplicate entry for {tag}")));
        }
    }
    Ok(p)
}

/// Chooses the concrete action of a compound code for the element `tag`
/// of `ds`. Absent elements resolve to Remove, which is a no-op. For
/// `X/Z/U*` a sequence is anonymized in place and a UID is remapped.
pub fn resolve_multiplex(action: ActionCode, tag: Tag, ds: &DataSet, policy: &MultiplexPolicy) -> ResolvedAction {
    let Some(elem) = ds.get(tag) else {
        return ResolvedAction::Remove;
    };
    if action == ActionCode::XZU {
        match elem.vr {
            VR::SQ => return ResolvedAction::Dummy,
            VR::UI => return ResolvedAction::RemapUid,
            _ => {}
        }
    }
    let allowed = |a: ResolvedAction| match a {
        ResolvedAction::Remove => action.allows_remove(),
        ResolvedAction::Zero => action.allows_zero(),
        ResolvedAction::Dummy => action.allows_dummy(),
        _ => false,
    };
    policy
        .attribute_type(tag, elem.vr)
        .preference()
        .into_iter()
        .find(|&a| allowed(a))
        .unwrap_or(ResolvedAction::Remove)
}
