use super::tag::{ITEM, ITEM_DELIMITATION, SEQUENCE_DELIMITATION};
use super::{
    CharacterSet, CodecError, DataElement, DataSet, DicomObject, Encoding, Item, Sequence, Tag,
    Value, VR,
};
use crate::dictionary;

const UNDEFINED: u32 = 0xFFFF_FFFF;

/// Bounds applied while parsing untrusted input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseLimits {
    pub max_depth: usize,
    pub max_element_length: u32,
    /// Accept odd value lengths instead of failing with `UnevenLength`.
    /// Such values are padded when written back.
    pub allow_odd_length: bool,
}

impl Default for ParseLimits {
    fn default() -> Self {
        ParseLimits {
            max_depth: 16,
            max_element_length: 0x8000_0000,
            allow_odd_length: false,
        }
    }
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
    explicit: bool,
    limits: &'a ParseLimits,
}

enum Stop {
    /// Stop at this absolute offset.
    At(usize),
    /// Stop at an item delimitation item.
    ItemDelimiter,
    /// Stop at end of input.
    Eof,
    /// Stop before the first element whose group differs.
    GroupChange(u16),
}

impl<'a> Reader<'a> {
    fn truncated(&self, tag: Tag) -> CodecError {
        CodecError::TruncatedElement { tag, offset: self.pos }
    }

    fn take(&mut self, n: usize, tag: Tag) -> Result<&'a [u8], CodecError> {
        if self.data.len() - self.pos < n {
            return Err(self.truncated(tag));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u16(&mut self, tag: Tag) -> Result<u16, CodecError> {
        let b = self.take(2, tag)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self, tag: Tag) -> Result<u32, CodecError> {
        let b = self.take(4, tag)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn tag(&mut self) -> Result<Tag, CodecError> {
        let unknown = Tag::new(0xFFFF, 0xFFFF);
        let g = self.u16(unknown)?;
        let e = self.u16(unknown)?;
        Ok(Tag::new(g, e))
    }

    fn peek_group(&self) -> Option<u16> {
        let b = self.data.get(self.pos..self.pos + 2)?;
        Some(u16::from_le_bytes([b[0], b[1]]))
    }

    fn dataset(&mut self, stop: Stop, depth: usize, charset: CharacterSet) -> Result<DataSet, CodecError> {
        let mut ds = DataSet::with_charset(charset);
        loop {
            match stop {
                Stop::At(end) => {
                    if self.pos == end {
                        break;
                    }
                    if self.pos > end {
                        return Err(CodecError::MalformedFile(format!(
                            "element overruns item end at offset {end}"
                        )));
                    }
                }
                Stop::Eof => {
                    if self.pos == self.data.len() {
                        break;
                    }
                }
                Stop::GroupChange(g) => {
                    if self.peek_group() != Some(g) {
                        break;
                    }
                }
                Stop::ItemDelimiter => {}
            }
            let start = self.pos;
            let tag = self.tag()?;
            if tag.group == 0xFFFE {
                if tag == ITEM_DELIMITATION && matches!(stop, Stop::ItemDelimiter) {
                    self.u32(tag)?;
                    return Ok(ds);
                }
                return Err(CodecError::MalformedFile(format!(
                    "unexpected delimiter {tag} at offset {start}"
                )));
            }
            let element = self.element(tag, depth, ds.charset().clone())?;
            if ds.contains(tag) {
                return Err(CodecError::MalformedFile(format!("duplicate element {tag}")));
            }
            ds.insert(element);
        }
        if matches!(stop, Stop::ItemDelimiter) {
            return Err(self.truncated(ITEM_DELIMITATION));
        }
        Ok(ds)
    }

    fn element(&mut self, tag: Tag, depth: usize, charset: CharacterSet) -> Result<DataElement, CodecError> {
        let (vr, len) = if self.explicit {
            let code = self.take(2, tag)?;
            let code = [code[0], code[1]];
            let vr = VR::from_bytes(code).ok_or(CodecError::InvalidVr { tag, code })?;
            let len = if vr.has_long_length() {
                self.take(2, tag)?;
                self.u32(tag)?
            } else {
                self.u16(tag)? as u32
            };
            (vr, len)
        } else {
            let len = self.u32(tag)?;
            let vr = dictionary::implicit_vr(tag);
            let vr = if len == UNDEFINED && vr != VR::OB && vr != VR::OW {
                VR::SQ
            } else {
                vr
            };
            (vr, len)
        };

        if len == UNDEFINED {
            return match vr {
                VR::SQ => {
                    let seq = self.sequence(None, depth + 1, charset)?;
                    Ok(DataElement::new(tag, vr, Value::Sequence(seq)))
                }
                VR::OB | VR::OW => {
                    let frags = self.fragments(tag)?;
                    Ok(DataElement::new(tag, vr, Value::Fragments(frags)))
                }
                _ => Err(CodecError::MalformedFile(format!(
                    "undefined length on {tag} with VR {vr}"
                ))),
            };
        }
        if len > self.limits.max_element_length {
            return Err(CodecError::LengthOverflow { tag, length: len as u64 });
        }
        if len % 2 == 1 && !self.limits.allow_odd_length {
            return Err(CodecError::UnevenLength { tag, length: len });
        }
        if vr == VR::SQ {
            let end = self
                .pos
                .checked_add(len as usize)
                .filter(|&e| e <= self.data.len())
                .ok_or_else(|| self.truncated(tag))?;
            let seq = self.sequence(Some(end), depth + 1, charset)?;
            return Ok(DataElement::new(tag, vr, Value::Sequence(seq)));
        }
        let bytes = self.take(len as usize, tag)?;
        Ok(DataElement::bytes(tag, vr, bytes.to_vec()))
    }

    fn sequence(&mut self, end: Option<usize>, depth: usize, charset: CharacterSet) -> Result<Sequence, CodecError> {
        if depth > self.limits.max_depth {
            return Err(CodecError::NestingTooDeep { limit: self.limits.max_depth });
        }
        let mut items = Vec::new();
        loop {
            if let Some(end) = end {
                if self.pos >= end {
                    if self.pos > end {
                        return Err(CodecError::MalformedFile("item overruns sequence".into()));
                    }
                    break;
                }
            }
            let tag = self.tag()?;
            let len = self.u32(tag)?;
            if tag == SEQUENCE_DELIMITATION && end.is_none() {
                break;
            }
            if tag != ITEM {
                return Err(CodecError::MalformedFile(format!(
                    "expected item, found {tag} at offset {}",
                    self.pos - 8
                )));
            }
            let item = if len == UNDEFINED {
                Item {
                    dataset: self.dataset(Stop::ItemDelimiter, depth, charset.clone())?,
                    undefined_length: true,
                }
            } else {
                let item_end = self
                    .pos
                    .checked_add(len as usize)
                    .filter(|&e| e <= self.data.len() && end.map_or(true, |s| e <= s))
                    .ok_or_else(|| self.truncated(ITEM))?;
                Item {
                    dataset: self.dataset(Stop::At(item_end), depth, charset.clone())?,
                    undefined_length: false,
                }
            };
            items.push(item);
        }
        Ok(Sequence {
            items,
            undefined_length: end.is_none(),
        })
    }

    fn fragments(&mut self, tag: Tag) -> Result<Vec<Vec<u8>>, CodecError> {
        let mut out = Vec::new();
        loop {
            let t = self.tag()?;
            let len = self.u32(t)?;
            if t == SEQUENCE_DELIMITATION {
                return Ok(out);
            }
            if t != ITEM || len == UNDEFINED {
                return Err(CodecError::MalformedFile(format!("bad fragment in {tag}")));
            }
            out.push(self.take(len as usize, tag)?.to_vec());
        }
    }
}

/// Parses a Part 10 file. Input without the preamble and magic is accepted
/// when it begins directly with a group 0002 element.
pub fn parse_file(bytes: &[u8], limits: &ParseLimits) -> Result<DicomObject, CodecError> {
    let mut preamble = [0u8; 128];
    let start = if bytes.len() >= 132 && &bytes[128..132] == b"DICM" {
        preamble.copy_from_slice(&bytes[..128]);
        132
    } else if bytes.len() >= 8 && bytes[0..2] == [0x02, 0x00] {
        0
    } else {
        return Err(CodecError::MalformedFile("missing DICM magic".into()));
    };
    let mut r = Reader {
        data: bytes,
        pos: start,
        explicit: true,
        limits,
    };
    let file_meta = r.dataset(Stop::GroupChange(0x0002), 0, CharacterSet::Default)?;
    let transfer_syntax = file_meta
        .string(super::tags::TRANSFER_SYNTAX_UID)
        .ok_or_else(|| CodecError::MalformedFile("file meta lacks (0002,0010)".into()))?;
    let encoding = Encoding::for_transfer_syntax(&transfer_syntax)?;
    r.explicit = encoding != Encoding::Implicit;
    let dataset = r.dataset(Stop::Eof, 0, CharacterSet::Default)?;
    Ok(DicomObject {
        preamble,
        file_meta,
        transfer_syntax,
        dataset,
    })
}

/// Parses a bare dataset with no file meta.
pub fn parse_dataset(bytes: &[u8], encoding: Encoding, limits: &ParseLimits) -> Result<DataSet, CodecError> {
    let mut r = Reader {
        data: bytes,
        pos: 0,
        explicit: encoding != Encoding::Implicit,
        limits,
    };
    r.dataset(Stop::Eof, 0, CharacterSet::Default)
}
