use std::fmt;
use std::str::FromStr;

use super::Tag;

/// Location of an element inside nested sequences, written
/// `(0040,A730)[0].(0040,A160)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TagPath {
    pub steps: Vec<(Tag, usize)>,
    pub leaf: Tag,
}

impl TagPath {
    pub fn root(tag: Tag) -> TagPath {
        TagPath {
            steps: Vec::new(),
            leaf: tag,
        }
    }

    /// Path of an element inside item `index` of the sequence at `self`.
    pub fn child(&self, index: usize, tag: Tag) -> TagPath {
        let mut steps = self.steps.clone();
        steps.push((self.leaf, index));
        TagPath { steps, leaf: tag }
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }
}

impl From<Tag> for TagPath {
    fn from(tag: Tag) -> Self {
        TagPath::root(tag)
    }
}

impl fmt::Display for TagPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (tag, idx) in &self.steps {
            write!(f, "{tag}[{idx}].")?;
        }
        write!(f, "{}", self.leaf)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid tag path: {0:?}")]
pub struct PathParseError(pub String);

impl FromStr for TagPath {
    type Err = PathParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PathParseError(s.to_string());
        let s = s.trim();
        let mut steps = Vec::new();
        let mut rest = s;
        loop {
            match rest.find('[') {
                None => {
                    let leaf: Tag = rest.parse().map_err(|_| err())?;
                    return Ok(TagPath { steps, leaf });
                }
                Some(open) => {
                    let tag: Tag = rest[..open].parse().map_err(|_| err())?;
                    let close = rest[open..].find(']').ok_or_else(err)? + open;
                    let idx: usize = rest[open + 1..close].trim().parse().map_err(|_| err())?;
                    steps.push((tag, idx));
                    rest = rest[close + 1..].strip_prefix('.').ok_or_else(err)?;
                }
            }
        }
    }
}
