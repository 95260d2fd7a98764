use std::borrow::Cow;

use super::{CharacterSet, CodecError, DataSet, Tag, VR};

/// Value of a data element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    /// Raw value bytes as read, written back verbatim.
    Bytes(Vec<u8>),
    /// Caller-supplied string values, encoded with the dataset character set on write.
    Strings(Vec<String>),
    Sequence(Sequence),
    /// Encapsulated pixel data. The first fragment is the basic offset table.
    Fragments(Vec<Vec<u8>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sequence {
    pub items: Vec<Item>,
    pub undefined_length: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Item {
    pub dataset: DataSet,
    pub undefined_length: bool,
}

impl Item {
    pub fn new(dataset: DataSet) -> Item {
        Item {
            dataset,
            undefined_length: false,
        }
    }
}

impl Sequence {
    pub fn new(items: Vec<Item>) -> Sequence {
        Sequence {
            items,
            undefined_length: false,
        }
    }

    pub fn from_datasets(datasets: impl IntoIterator<Item = DataSet>) -> Sequence {
        Sequence::new(datasets.into_iter().map(Item::new).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataElement {
    pub tag: Tag,
    pub vr: VR,
    pub value: Value,
}

impl DataElement {
    pub fn new(tag: Tag, vr: VR, value: Value) -> DataElement {
        DataElement { tag, vr, value }
    }

    pub fn bytes(tag: Tag, vr: VR, bytes: impl Into<Vec<u8>>) -> DataElement {
        DataElement::new(tag, vr, Value::Bytes(bytes.into()))
    }

    pub fn string(tag: Tag, vr: VR, s: impl Into<String>) -> DataElement {
        DataElement::new(tag, vr, Value::Strings(vec![s.into()]))
    }

    pub fn strings<S: Into<String>>(tag: Tag, vr: VR, values: impl IntoIterator<Item = S>) -> DataElement {
        DataElement::new(tag, vr, Value::Strings(values.into_iter().map(Into::into).collect()))
    }

    pub fn empty(tag: Tag, vr: VR) -> DataElement {
        match vr {
            VR::SQ => DataElement::new(tag, vr, Value::Sequence(Sequence::default())),
            _ => DataElement::bytes(tag, vr, Vec::new()),
        }
    }

    pub fn sequence(tag: Tag, items: impl IntoIterator<Item = DataSet>) -> DataElement {
        DataElement::new(tag, VR::SQ, Value::Sequence(Sequence::from_datasets(items)))
    }

    pub fn u16s(tag: Tag, vr: VR, values: &[u16]) -> DataElement {
        DataElement::bytes(tag, vr, values.iter().flat_map(|v| v.to_le_bytes()).collect::<Vec<_>>())
    }

    pub fn items(&self) -> Option<&[Item]> {
        match &self.value {
            Value::Sequence(s) => Some(&s.items),
            _ => None,
        }
    }

    pub fn items_mut(&mut self) -> Option<&mut Vec<Item>> {
        match &mut self.value {
            Value::Sequence(s) => Some(&mut s.items),
            _ => None,
        }
    }

    /// True for a zero-length value or an empty sequence.
    pub fn is_empty(&self) -> bool {
        match &self.value {
            Value::Bytes(b) => b.is_empty(),
            Value::Strings(v) => v.iter().all(String::is_empty),
            Value::Sequence(s) => s.items.is_empty(),
            Value::Fragments(f) => f.is_empty(),
        }
    }

    /// Encoded value bytes before padding.
    pub fn raw_value(&self, cs: &CharacterSet) -> Result<Cow<'_, [u8]>, CodecError> {
        match &self.value {
            Value::Bytes(b) => Ok(Cow::Borrowed(b)),
            Value::Strings(values) => {
                let joined = values.join("\\");
                let enc = if self.vr.is_text() {
                    cs.encode(&joined)
                } else {
                    joined.is_ascii().then(|| joined.clone().into_bytes())
                };
                enc.map(Cow::Owned).ok_or(CodecError::Unencodable { tag: self.tag })
            }
            Value::Sequence(_) | Value::Fragments(_) => Err(CodecError::VrMismatch {
                tag: self.tag,
                expected: VR::SQ,
                found: self.vr,
            }),
        }
    }

    /// Decoded string values with trailing padding removed. Multi-valued VRs
    /// are split on backslash.
    pub fn to_strings(&self, cs: &CharacterSet) -> Option<Vec<String>> {
        match &self.value {
            Value::Strings(v) => Some(v.clone()),
            Value::Bytes(b) => {
                let cs = if self.vr.is_text() { cs } else { &CharacterSet::Default };
                let text = cs.decode(b)?;
                let text = text.trim_end_matches(['\0', ' ']);
                if text.is_empty() {
                    return Some(Vec::new());
                }
                if self.vr.is_single_valued_text() || !self.vr.is_string() {
                    Some(vec![text.to_string()])
                } else {
                    Some(text.split('\\').map(|s| s.trim_end().to_string()).collect())
                }
            }
            _ => None,
        }
    }

    /// First string value, trimmed of padding.
    pub fn to_str(&self, cs: &CharacterSet) -> Option<String> {
        self.to_strings(cs).map(|v| v.into_iter().next().unwrap_or_default())
    }

    /// First numeric value for US, UL, SS, SL, IS and DS elements.
    pub fn to_int(&self) -> Option<i64> {
        let b = match &self.value {
            Value::Bytes(b) => b.as_slice(),
            Value::Strings(v) => return v.first()?.trim().parse::<f64>().ok().map(|f| f as i64),
            _ => return None,
        };
        match self.vr {
            VR::US if b.len() >= 2 => Some(u16::from_le_bytes([b[0], b[1]]) as i64),
            VR::SS if b.len() >= 2 => Some(i16::from_le_bytes([b[0], b[1]]) as i64),
            VR::UL if b.len() >= 4 => Some(u32::from_le_bytes([b[0], b[1], b[2], b[3]]) as i64),
            VR::SL if b.len() >= 4 => Some(i32::from_le_bytes([b[0], b[1], b[2], b[3]]) as i64),
            VR::IS | VR::DS => {
                let s = std::str::from_utf8(b).ok()?;
                let first = s.split('\\').next()?.trim_matches(['\0', ' ']);
                first.parse::<f64>().ok().map(|f| f as i64)
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_valued_split() {
        let e = DataElement::bytes(Tag::new(0x0008, 0x0008), VR::CS, b"ORIGINAL\\PRIMARY ".to_vec());
        assert_eq!(
            e.to_strings(&CharacterSet::Default).unwrap(),
            vec!["ORIGINAL", "PRIMARY"]
        );
        let lt = DataElement::bytes(Tag::new(0x0020, 0x4000), VR::LT, b"a\\b ".to_vec());
        assert_eq!(lt.to_strings(&CharacterSet::Default).unwrap(), vec!["a\\b"]);
    }

    #[test]
    fn uid_padding_trimmed() {
        let e = DataElement::bytes(Tag::new(0x0008, 0x0018), VR::UI, b"1.2.3\0".to_vec());
        assert_eq!(e.to_str(&CharacterSet::Default).unwrap(), "1.2.3");
    }

    #[test]
    fn numeric_values() {
        let e = DataElement::u16s(Tag::new(0x0028, 0x0010), VR::US, &[512]);
        assert_eq!(e.to_int(), Some(512));
        let is = DataElement::bytes(Tag::new(0x0020, 0x0013), VR::IS, b"12 ".to_vec());
        assert_eq!(is.to_int(), Some(12));
    }

    #[test]
    fn empty_forms() {
        assert!(DataElement::empty(Tag::new(0x0010, 0x0010), VR::PN).is_empty());
        assert!(DataElement::empty(Tag::new(0x0040, 0xA730), VR::SQ).is_empty());
        assert!(!DataElement::string(Tag::new(0x0010, 0x0010), VR::PN, "X").is_empty());
    }
}
