use std::fmt;
use std::str::FromStr;

use crate::codec::Tag;

/// A tag with optional `x` wildcards per hex digit, e.g. `(60xx,3000)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TagPattern {
    group: u16,
    group_mask: u16,
    element: u16,
    element_mask: u16,
}

impl TagPattern {
    pub const fn exact(tag: Tag) -> Self {
        TagPattern {
            group: tag.group,
            group_mask: 0xFFFF,
            element: tag.element,
            element_mask: 0xFFFF,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.group_mask == 0xFFFF && self.element_mask == 0xFFFF
    }

    pub fn as_exact(&self) -> Option<Tag> {
        self.is_exact().then(|| Tag::new(self.group, self.element))
    }

    pub fn matches(&self, tag: Tag) -> bool {
        tag.group & self.group_mask == self.group && tag.element & self.element_mask == self.element
    }

    /// Whether some tag matches both patterns.
    pub fn overlaps(&self, other: &TagPattern) -> bool {
        let gm = self.group_mask & other.group_mask;
        let em = self.element_mask & other.element_mask;
        self.group & gm == other.group & gm && self.element & em == other.element & em
    }

    /// The lowest tag matching this pattern, used as a concrete representative.
    pub fn representative(&self) -> Tag {
        Tag::new(self.group, self.element)
    }
}

fn parse_half(s: &str) -> Option<(u16, u16)> {
    if s.len() != 4 {
        return None;
    }
    let mut value = 0u16;
    let mut mask = 0u16;
    for c in s.chars() {
        value <<= 4;
        mask <<= 4;
        if c == 'x' || c == 'X' {
            continue;
        }
        value |= c.to_digit(16)? as u16;
        mask |= 0xF;
    }
    Some((value, mask))
}

fn fmt_half(f: &mut fmt::Formatter<'_>, value: u16, mask: u16) -> fmt::Result {
    for shift in [12u16, 8, 4, 0] {
        if (mask >> shift) & 0xF == 0 {
            f.write_str("x")?;
        } else {
            write!(f, "{:X}", (value >> shift) & 0xF)?;
        }
    }
    Ok(())
}

impl fmt::Display for TagPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        fmt_half(f, self.group, self.group_mask)?;
        f.write_str(",")?;
        fmt_half(f, self.element, self.element_mask)?;
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid tag pattern: {0:?}")]
pub struct PatternParseError(pub String);

impl FromStr for TagPattern {
    type Err = PatternParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PatternParseError(s.to_string());
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(t);
        let (g, e) = t.split_once(',').ok_or_else(err)?;
        let (group, group_mask) = parse_half(g.trim()).ok_or_else(err)?;
        let (element, element_mask) = parse_half(e.trim()).ok_or_else(err)?;
        Ok(TagPattern {
            group,
            group_mask,
            element,
            element_mask,
        })
    }
}

impl From<Tag> for TagPattern {
    fn from(tag: Tag) -> Self {
        TagPattern::exact(tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wildcard_matching() {
        let p: TagPattern = "(60xx,3000)".parse().unwrap();
        assert!(p.matches(Tag::new(0x6000, 0x3000)));
        assert!(p.matches(Tag::new(0x601E, 0x3000)));
        assert!(!p.matches(Tag::new(0x6000, 0x3001)));
        assert!(!p.matches(Tag::new(0x7000, 0x3000)));
        assert_eq!(p.to_string(), "(60xx,3000)");
        assert!(!p.is_exact());
    }

    #[test]
    fn exact_pattern() {
        let p: TagPattern = "0010,0010".parse().unwrap();
        assert_eq!(p.as_exact(), Some(Tag::new(0x0010, 0x0010)));
        assert!("(50xx,xxxx)".parse::<TagPattern>().unwrap().matches(Tag::new(0x5002, 0x1234)));
        assert!("(50x,xxxx)".parse::<TagPattern>().is_err());
    }

    #[test]
    fn overlap() {
        let a: TagPattern = "(50xx,xxxx)".parse().unwrap();
        let b: TagPattern = "(50xx,3000)".parse().unwrap();
        let c: TagPattern = "(60xx,3000)".parse().unwrap();
        assert!(a.overlaps(&b));
        assert!(!a.overlaps(&c));
    }
}
