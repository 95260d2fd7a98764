//! Confidentiality profile composition and application.

mod apply;
mod compose;
mod dummy;
mod options;
mod private;
mod uid;

use crate::codec::{CodecError, Tag};
use crate::dictionary::{ActionTable, SafePrivateKb};
use crate::text::Cleaner;

pub use apply::{apply_profile, insert_missing_type2, AuditRecord};
pub use compose::{
    compose_profile, load_multiplex_policy, resolve_multiplex, AttributeType, EffectiveEntry, EffectiveTable,
    MultiplexPolicy, Resolution, ResolvedAction,
};
pub use dummy::{
    date_offset, dummy_value_for, shift_value, DUMMY_AGE, DUMMY_CODE, DUMMY_DATE, DUMMY_DATETIME, DUMMY_NUMBER,
    DUMMY_TEXT, DUMMY_TIME,
};
pub use options::{DateShift, ProfileOptions, BASIC_PROFILE_CODE};
pub use private::strip_unsafe_private;
pub use uid::UidMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("conflicting options: {0}")]
    ConflictingOptions(String),
    #[error("unknown profile option {0:?}")]
    UnknownOption(String),
    #[error("options {first} and {second} assign different actions to {pattern}")]
    ConflictingOverride { pattern: String, first: String, second: String },
    #[error("invalid UID {0:?}")]
    InvalidUid(String),
    #[error("uid map line {line}: {message}")]
    UidMapFormat { line: usize, message: String },
    #[error("policy line {line}: {message}")]
    PolicyFormat { line: usize, message: String },
    #[error("tag list line {line}: {message}")]
    TagListFormat { line: usize, message: String },
    #[error("sequences have no dummy value")]
    DummySequence,
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// Parses one tag per line with `#` comments.
pub fn load_tag_list(source: &str) -> Result<Vec<Tag>, ProfileError> {
    let mut out = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let tag = text
            .parse()
            .map_err(|e| ProfileError::TagListFormat { line: i + 1, message: format!("{e}") })?;
        out.push(tag);
    }
    Ok(out)
}

/// Default attributes inserted when missing and type-2 insertion is on.
pub fn builtin_type2() -> Vec<Tag> {
    load_tag_list(include_str!("../../data/type2_required.txt")).expect("built-in type 2 list parses")
}

/// Everything needed to deidentify objects: the composed table plus the
/// policies and knowledge bases it consults.
#[derive(Debug, Clone)]
pub struct Profile {
    pub options: ProfileOptions,
    pub table: EffectiveTable,
    pub multiplex: MultiplexPolicy,
    pub safe_private: SafePrivateKb,
    pub type2: Vec<Tag>,
    pub cleaner: Cleaner,
}

impl Profile {
    /// Composes `table` with `options` using the built-in policies and an
    /// empty safe private list.
    pub fn new(table: &ActionTable, options: ProfileOptions) -> Result<Profile, ProfileError> {
        Ok(Profile {
            options,
            table: compose_profile(table, &options)?,
            multiplex: MultiplexPolicy::builtin(),
            safe_private: SafePrivateKb::default(),
            type2: builtin_type2(),
            cleaner: Cleaner::default(),
        })
    }

    /// Built-in action table with the given options.
    pub fn builtin(options: ProfileOptions) -> Result<Profile, ProfileError> {
        Profile::new(&ActionTable::builtin(), options)
    }

    pub fn with_safe_private(mut self, kb: SafePrivateKb) -> Profile {
        self.safe_private = kb;
        self
    }

    pub fn with_cleaner(mut self, cleaner: Cleaner) -> Profile {
        self.cleaner = cleaner;
        self
    }

    pub fn with_multiplex(mut self, policy: MultiplexPolicy) -> Profile {
        self.multiplex = policy;
        self
    }
}
