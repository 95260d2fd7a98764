use std::collections::BTreeMap;

use super::{tags, CharacterSet, CodecError, DataElement, TagPath, Tag, Value, VR};
use crate::dictionary;

/// Elements keyed by tag, with the character set in effect at this level.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DataSet {
    elements: BTreeMap<Tag, DataElement>,
    charset: CharacterSet,
}

impl DataSet {
    pub fn new() -> DataSet {
        DataSet::default()
    }

    pub fn with_charset(charset: CharacterSet) -> DataSet {
        DataSet {
            elements: BTreeMap::new(),
            charset,
        }
    }

    pub fn charset(&self) -> &CharacterSet {
        &self.charset
    }

    pub fn set_charset(&mut self, charset: CharacterSet) {
        self.charset = charset;
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, tag: Tag) -> Option<&DataElement> {
        self.elements.get(&tag)
    }

    pub fn get_mut(&mut self, tag: Tag) -> Option<&mut DataElement> {
        self.elements.get_mut(&tag)
    }

    pub fn contains(&self, tag: Tag) -> bool {
        self.elements.contains_key(&tag)
    }

    /// Elements in ascending tag order.
    pub fn iter(&self) -> impl Iterator<Item = &DataElement> {
        self.elements.values()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut DataElement> {
        self.elements.values_mut()
    }

    pub fn tags(&self) -> Vec<Tag> {
        self.elements.keys().copied().collect()
    }

    /// Inserts without dictionary checks, returning any replaced element.
    /// Setting (0008,0005) updates the character set of this level.
    pub fn insert(&mut self, element: DataElement) -> Option<DataElement> {
        if element.tag == tags::SPECIFIC_CHARACTER_SET {
            if let Some(raw) = element.raw_value(&CharacterSet::Default).ok() {
                self.charset = CharacterSet::from_declaration(&raw);
            }
        }
        self.elements.insert(element.tag, element)
    }

    /// Inserts after checking `vr` against the dictionary.
    pub fn set_element(&mut self, tag: Tag, vr: VR, value: Value) -> Result<Option<DataElement>, CodecError> {
        if let Some(entry) = dictionary::lookup(tag) {
            if !entry.vrs.contains(&vr) {
                return Err(CodecError::VrMismatch {
                    tag,
                    expected: entry.vr(),
                    found: vr,
                });
            }
        }
        Ok(self.insert(DataElement::new(tag, vr, value)))
    }

    /// Sets a string value using the dictionary VR, or LO if the tag is unknown.
    pub fn set_str(&mut self, tag: Tag, value: impl Into<String>) {
        let vr = dictionary::lookup(tag).map(|e| e.vr()).unwrap_or(VR::LO);
        self.insert(DataElement::string(tag, vr, value));
    }

    pub fn remove(&mut self, tag: Tag) -> Option<DataElement> {
        self.elements.remove(&tag)
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&DataElement) -> bool) {
        self.elements.retain(|_, e| keep(e));
    }

    /// First string value of `tag`, decoded with the dataset character set.
    pub fn string(&self, tag: Tag) -> Option<String> {
        self.get(tag)?.to_str(&self.charset)
    }

    pub fn strings(&self, tag: Tag) -> Option<Vec<String>> {
        self.get(tag)?.to_strings(&self.charset)
    }

    pub fn int(&self, tag: Tag) -> Option<i64> {
        self.get(tag)?.to_int()
    }

    /// The element at a nested location, if every step exists.
    pub fn get_path(&self, path: &TagPath) -> Option<&DataElement> {
        self.parent(path)?.get(path.leaf)
    }

    /// Dataset containing the leaf of `path`.
    pub fn parent(&self, path: &TagPath) -> Option<&DataSet> {
        let mut ds = self;
        for &(tag, idx) in &path.steps {
            ds = &ds.get(tag)?.items()?.get(idx)?.dataset;
        }
        Some(ds)
    }

    /// Mutable dataset containing the leaf of `path`.
    pub fn parent_mut(&mut self, path: &TagPath) -> Option<&mut DataSet> {
        let mut ds = self;
        for &(tag, idx) in &path.steps {
            ds = &mut ds.get_mut(tag)?.items_mut()?.get_mut(idx)?.dataset;
        }
        Some(ds)
    }

    pub fn get_path_mut(&mut self, path: &TagPath) -> Option<&mut DataElement> {
        self.parent_mut(path)?.get_mut(path.leaf)
    }

    /// Depth-first visit of every element in tag order. A sequence is
    /// visited before its items.
    pub fn walk(&self, visit: &mut dyn FnMut(&TagPath, &DataElement)) {
        self.walk_from(None, visit);
    }

    fn walk_from(&self, parent: Option<(&TagPath, usize)>, visit: &mut dyn FnMut(&TagPath, &DataElement)) {
        for e in self.elements.values() {
            let path = match parent {
                None => TagPath::root(e.tag),
                Some((p, idx)) => p.child(idx, e.tag),
            };
            visit(&path, e);
            if let Some(items) = e.items() {
                for (i, item) in items.iter().enumerate() {
                    item.dataset.walk_from(Some((&path, i)), visit);
                }
            }
        }
    }

    /// Number of elements at all nesting levels.
    pub fn count_all(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_, _| n += 1);
        n
    }
}

impl FromIterator<DataElement> for DataSet {
    fn from_iter<I: IntoIterator<Item = DataElement>>(iter: I) -> Self {
        let mut ds = DataSet::new();
        for e in iter {
            ds.insert(e);
        }
        ds
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nested() -> DataSet {
        let leaf: DataSet = [DataElement::string(tags::TEXT_VALUE, VR::UT, "seen by Dr. Adams")]
            .into_iter()
            .collect();
        let mid: DataSet = [
            DataElement::string(Tag::new(0x0040, 0xA040), VR::CS, "CONTAINER"),
            DataElement::sequence(tags::CONTENT_SEQUENCE, [leaf]),
        ]
        .into_iter()
        .collect();
        [
            DataElement::string(tags::PATIENT_NAME, VR::PN, "DOE^JOHN"),
            DataElement::sequence(tags::CONTENT_SEQUENCE, [mid]),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn nested_path_lookup() {
        let ds = nested();
        let p: TagPath = "(0040,A730)[0].(0040,A730)[0].(0040,A160)".parse().unwrap();
        assert_eq!(ds.get_path(&p).unwrap().to_str(ds.charset()).unwrap(), "seen by Dr. Adams");
        assert!(ds.get_path(&"(0040,A730)[1].(0040,A160)".parse().unwrap()).is_none());
        assert!(ds.get_path(&"(0008,1115)[0].(0008,1155)".parse().unwrap()).is_none());
        assert!(ds.get_path(&TagPath::root(tags::PATIENT_NAME)).is_some());
    }

    #[test]
    fn walk_counts_every_element() {
        let ds = nested();
        let mut paths = Vec::new();
        ds.walk(&mut |p, _| paths.push(p.to_string()));
        assert_eq!(
            paths,
            vec![
                "(0010,0010)",
                "(0040,A730)",
                "(0040,A730)[0].(0040,A040)",
                "(0040,A730)[0].(0040,A730)",
                "(0040,A730)[0].(0040,A730)[0].(0040,A160)",
            ]
        );
        assert_eq!(ds.count_all(), 5);
    }

    #[test]
    fn set_get_delete() {
        let mut ds = DataSet::new();
        let before = ds.clone();
        assert!(ds.remove(tags::PATIENT_ID).is_none());
        assert_eq!(ds, before);
        ds.set_element(tags::PATIENT_ID, VR::LO, Value::Strings(vec!["12345".into()]))
            .unwrap();
        assert_eq!(ds.string(tags::PATIENT_ID).unwrap(), "12345");
        let err = ds.set_element(tags::PATIENT_NAME, VR::DA, Value::Bytes(vec![]));
        assert!(matches!(err, Err(CodecError::VrMismatch { .. })));
        ds.insert(DataElement::bytes(tags::PATIENT_NAME, VR::DA, vec![]));
        assert!(ds.contains(tags::PATIENT_NAME));
    }

    #[test]
    fn charset_follows_declaration() {
        let mut ds = DataSet::new();
        ds.insert(DataElement::bytes(tags::SPECIFIC_CHARACTER_SET, VR::CS, b"ISO_IR 192".to_vec()));
        assert_eq!(ds.charset(), &CharacterSet::Utf8);
    }
}
