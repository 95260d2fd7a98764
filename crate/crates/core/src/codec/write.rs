use super::tag::{ITEM, ITEM_DELIMITATION, SEQUENCE_DELIMITATION};
use super::{tags, CharacterSet, CodecError, DataElement, DataSet, DicomObject, Encoding, Tag, Value, VR};

const UNDEFINED: u32 = 0xFFFF_FFFF;

fn put_tag(out: &mut Vec<u8>, tag: Tag) {
    out.extend_from_slice(&tag.group.to_le_bytes());
    out.extend_from_slice(&tag.element.to_le_bytes());
}

fn put_header(out: &mut Vec<u8>, tag: Tag, vr: VR, len: u32, explicit: bool) -> Result<(), CodecError> {
    put_tag(out, tag);
    if !explicit {
        out.extend_from_slice(&len.to_le_bytes());
        return Ok(());
    }
    out.extend_from_slice(vr.code().as_bytes());
    if vr.has_long_length() {
        out.extend_from_slice(&[0, 0]);
        out.extend_from_slice(&len.to_le_bytes());
    } else {
        let short = u16::try_from(len).map_err(|_| CodecError::LengthOverflow {
            tag,
            length: len as u64,
        })?;
        out.extend_from_slice(&short.to_le_bytes());
    }
    Ok(())
}

fn len32(tag: Tag, n: usize) -> Result<u32, CodecError> {
    u32::try_from(n)
        .ok()
        .filter(|&l| l != UNDEFINED)
        .ok_or(CodecError::LengthOverflow { tag, length: n as u64 })
}

/// Checks caller-supplied strings against the VR length limits.
fn check_lengths(e: &DataElement, values: &[String]) -> Result<(), CodecError> {
    let Some(max) = e.vr.max_value_len() else {
        return Ok(());
    };
    for v in values {
        let parts: Vec<&str> = if e.vr.is_single_valued_text() {
            vec![v.as_str()]
        } else {
            v.split('\\').collect()
        };
        for part in parts {
            let groups: Vec<&str> = if e.vr == VR::PN {
                part.split('=').collect()
            } else {
                vec![part]
            };
            for g in groups {
                let n = g.chars().count();
                if n > max {
                    return Err(CodecError::ValueTooLong {
                        tag: e.tag,
                        vr: e.vr,
                        length: n,
                        max,
                    });
                }
            }
        }
    }
    Ok(())
}

fn padded_value(e: &DataElement, cs: &CharacterSet) -> Result<Vec<u8>, CodecError> {
    if let Value::Strings(values) = &e.value {
        check_lengths(e, values)?;
    }
    let mut bytes = e.raw_value(cs)?.into_owned();
    if bytes.len() % 2 == 1 {
        if e.vr.is_string() || matches!(e.vr, VR::OB | VR::UN) {
            bytes.push(e.vr.padding());
        } else {
            return Err(CodecError::OddLengthUnpaddable { tag: e.tag, vr: e.vr });
        }
    }
    Ok(bytes)
}

pub(crate) fn write_element(out: &mut Vec<u8>, e: &DataElement, cs: &CharacterSet, explicit: bool) -> Result<(), CodecError> {
    match &e.value {
        Value::Sequence(seq) => {
            let mut body = Vec::new();
            for item in &seq.items {
                let mut inner = Vec::new();
                write_dataset_into(&mut inner, &item.dataset, explicit)?;
                put_tag(&mut body, ITEM);
                if item.undefined_length {
                    body.extend_from_slice(&UNDEFINED.to_le_bytes());
                    body.extend_from_slice(&inner);
                    put_tag(&mut body, ITEM_DELIMITATION);
                    body.extend_from_slice(&0u32.to_le_bytes());
                } else {
                    body.extend_from_slice(&len32(ITEM, inner.len())?.to_le_bytes());
                    body.extend_from_slice(&inner);
                }
            }
            if seq.undefined_length {
                put_header(out, e.tag, e.vr, UNDEFINED, explicit)?;
                out.extend_from_slice(&body);
                put_tag(out, SEQUENCE_DELIMITATION);
                out.extend_from_slice(&0u32.to_le_bytes());
            } else {
                put_header(out, e.tag, e.vr, len32(e.tag, body.len())?, explicit)?;
                out.extend_from_slice(&body);
            }
        }
        Value::Fragments(frags) => {
            put_header(out, e.tag, e.vr, UNDEFINED, explicit)?;
            for f in frags {
                put_tag(out, ITEM);
                let mut f = f.clone();
                if f.len() % 2 == 1 {
                    f.push(0);
                }
                out.extend_from_slice(&len32(ITEM, f.len())?.to_le_bytes());
                out.extend_from_slice(&f);
            }
            put_tag(out, SEQUENCE_DELIMITATION);
            out.extend_from_slice(&0u32.to_le_bytes());
        }
        _ => {
            let bytes = padded_value(e, cs)?;
            put_header(out, e.tag, e.vr, len32(e.tag, bytes.len())?, explicit)?;
            out.extend_from_slice(&bytes);
        }
    }
    Ok(())
}

fn write_dataset_into(out: &mut Vec<u8>, ds: &DataSet, explicit: bool) -> Result<(), CodecError> {
    for e in ds.iter() {
        if e.tag.is_group_length() {
            continue;
        }
        write_element(out, e, ds.charset(), explicit)?;
    }
    Ok(())
}

/// Encodes a bare dataset. Group length elements are omitted.
pub fn write_dataset(ds: &DataSet, encoding: Encoding) -> Result<Vec<u8>, CodecError> {
    let mut out = Vec::new();
    write_dataset_into(&mut out, ds, encoding != Encoding::Implicit)?;
    Ok(out)
}

/// Encodes file meta in Explicit VR Little Endian. (0002,0000) is
/// recomputed when present.
fn write_file_meta(out: &mut Vec<u8>, meta: &DataSet) -> Result<(), CodecError> {
    let mut body = Vec::new();
    for e in meta.iter() {
        if e.tag == tags::FILE_META_GROUP_LENGTH {
            continue;
        }
        write_element(&mut body, e, &CharacterSet::Default, true)?;
    }
    if meta.contains(tags::FILE_META_GROUP_LENGTH) {
        let gl = DataElement::bytes(
            tags::FILE_META_GROUP_LENGTH,
            VR::UL,
            len32(tags::FILE_META_GROUP_LENGTH, body.len())?.to_le_bytes().to_vec(),
        );
        write_element(out, &gl, &CharacterSet::Default, true)?;
    }
    out.extend_from_slice(&body);
    Ok(())
}

/// Encodes a complete Part 10 file: preamble, magic, file meta and dataset.
pub fn serialize(obj: &DicomObject) -> Result<Vec<u8>, CodecError> {
    let encoding = Encoding::for_transfer_syntax(&obj.transfer_syntax)?;
    let mut out = Vec::with_capacity(1024);
    out.extend_from_slice(&obj.preamble);
    out.extend_from_slice(b"DICM");
    if obj.file_meta.string(tags::TRANSFER_SYNTAX_UID).as_deref() == Some(obj.transfer_syntax.as_str()) {
        write_file_meta(&mut out, &obj.file_meta)?;
    } else {
        let mut meta = obj.file_meta.clone();
        meta.insert(DataElement::string(tags::TRANSFER_SYNTAX_UID, VR::UI, obj.transfer_syntax.clone()));
        write_file_meta(&mut out, &meta)?;
    }
    write_dataset_into(&mut out, &obj.dataset, encoding != Encoding::Implicit)?;
    Ok(out)
}
