use crate::codec::{tags, DicomObject, Encoding, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaskSelector {
    All,
    SopClass(String),
    Series(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelMaskSpec {
    pub selector: MaskSelector,
    pub rects: Vec<Rect>,
    pub fill: u16,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MaskError {
    #[error("unsupported pixel format: {0}")]
    UnsupportedPixelFormat(String),
    #[error("rectangle {rect:?} outside {columns}x{rows} image")]
    MaskOutOfBounds { rect: Rect, rows: u32, columns: u32 },
}

impl PixelMaskSpec {
    pub fn selects(&self, obj: &DicomObject) -> bool {
        match &self.selector {
            MaskSelector::All => true,
            MaskSelector::SopClass(c) => obj.sop_class_uid().as_deref() == Some(c.as_str()),
            MaskSelector::Series(s) => obj.series_instance_uid().as_deref() == Some(s.as_str()),
        }
    }
}

/// Sets every pixel inside the rectangles to the fill value in all frames
/// and all samples. Returns the number of pixel samples written.
pub fn apply_pixel_masks(obj: &mut DicomObject, spec: &PixelMaskSpec) -> Result<usize, MaskError> {
    if spec.rects.is_empty() {
        return Ok(0);
    }
    let unsupported = |m: &str| MaskError::UnsupportedPixelFormat(m.to_string());
    match obj.encoding() {
        Ok(Encoding::Implicit | Encoding::Explicit) => {}
        _ => return Err(unsupported("compressed or unknown transfer syntax")),
    }
    let ds = &obj.dataset;
    let int = |t| ds.int(t).and_then(|v| u32::try_from(v).ok());
    let rows = int(tags::ROWS).ok_or_else(|| unsupported("missing Rows"))?;
    let columns = int(tags::COLUMNS).ok_or_else(|| unsupported("missing Columns"))?;
    let bits = int(tags::BITS_ALLOCATED).ok_or_else(|| unsupported("missing BitsAllocated"))?;
    let samples = int(tags::SAMPLES_PER_PIXEL).unwrap_or(1).max(1);
    let planar = int(tags::PLANAR_CONFIGURATION).unwrap_or(0) == 1 && samples > 1;
    let frames = ds
        .strings(tags::NUMBER_OF_FRAMES)
        .and_then(|v| v.first().and_then(|s| s.trim().parse::<u32>().ok()))
        .unwrap_or(1)
        .max(1);
    let bytes_per = match bits {
        8 => 1usize,
        16 => 2,
        other => return Err(unsupported(&format!("BitsAllocated {other}"))),
    };
    for &r in &spec.rects {
        let fits = r.x.checked_add(r.width).is_some_and(|e| e <= columns) && r.y.checked_add(r.height).is_some_and(|e| e <= rows);
        if !fits {
            return Err(MaskError::MaskOutOfBounds { rect: r, rows, columns });
        }
    }
    let (rows, columns, samples) = (rows as usize, columns as usize, samples as usize);
    let frame_len = rows * columns * samples * bytes_per;
    let data = match obj.dataset.get_mut(tags::PIXEL_DATA).map(|e| &mut e.value) {
        Some(Value::Bytes(b)) => b,
        Some(_) => return Err(unsupported("encapsulated pixel data")),
        None => return Err(unsupported("no PixelData")),
    };
    if data.len() < frame_len * frames as usize {
        return Err(unsupported("PixelData shorter than Rows x Columns x frames"));
    }
    let fill = spec.fill.to_le_bytes();
    let mut written = 0;
    for f in 0..frames as usize {
        let frame = &mut data[f * frame_len..(f + 1) * frame_len];
        for r in &spec.rects {
            for y in r.y as usize..(r.y + r.height) as usize {
                for x in r.x as usize..(r.x + r.width) as usize {
                    for s in 0..samples {
                        let idx = if planar {
                            s * rows * columns + y * columns + x
                        } else {
                            (y * columns + x) * samples + s
                        };
                        let at = idx * bytes_per;
                        frame[at..at + bytes_per].copy_from_slice(&fill[..bytes_per]);
                        written += 1;
                    }
                }
            }
        }
    }
    Ok(written)
}
