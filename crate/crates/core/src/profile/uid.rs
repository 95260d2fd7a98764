use std::collections::HashMap;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;
use std::sync::Mutex;

use sha2::{Digest, Sha256};

use super::ProfileError;
use crate::codec::is_valid_uid;

const MAX_UID_LEN: usize = 64;

#[derive(Debug, Default)]
struct Maps {
    forward: HashMap<String, String>,
    reverse: HashMap<String, String>,
}

/// Persistent original to replacement UID mapping shared by every object of
/// a run. Replacements are `root.N` where N is the decimal value of the
/// leading 128 bits of the salted SHA-256 of the original.
#[derive(Debug)]
pub struct UidMap {
    root: String,
    salt: Vec<u8>,
    maps: Mutex<Maps>,
}

impl UidMap {
    pub fn new(root: &str, salt: &[u8]) -> Result<UidMap, ProfileError> {
        let root = root.trim_end_matches('.');
        if !is_valid_uid(root) || root.len() > MAX_UID_LEN - 2 {
            return Err(ProfileError::InvalidUid(root.to_string()));
        }
        Ok(UidMap {
            root: root.to_string(),
            salt: salt.to_vec(),
            maps: Mutex::default(),
        })
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn salt(&self) -> &[u8] {
        &self.salt
    }

    pub fn len(&self) -> usize {
        self.maps.lock().unwrap().forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, original: &str) -> Option<String> {
        self.maps.lock().unwrap().forward.get(original).cloned()
    }

    pub fn original_of(&self, replacement: &str) -> Option<String> {
        self.maps.lock().unwrap().reverse.get(replacement).cloned()
    }

    /// Whether `uid` is one of this map's replacements.
    pub fn is_replacement(&self, uid: &str) -> bool {
        self.maps.lock().unwrap().reverse.contains_key(uid)
    }

    fn candidate(&self, original: &str, attempt: u32) -> String {
        let mut h = Sha256::new();
        h.update(&self.salt);
        h.update([0u8]);
        h.update(original.as_bytes());
        if attempt > 0 {
            h.update(attempt.to_be_bytes());
        }
        let digest = h.finalize();
        let mut first = [0u8; 16];
        first.copy_from_slice(&digest[..16]);
        let mut digits = u128::from_be_bytes(first).to_string();
        digits.truncate(MAX_UID_LEN - self.root.len() - 1);
        format!("{}.{}", self.root, digits)
    }

    fn insert_new(&self, original: &str) -> String {
        let mut maps = self.maps.lock().unwrap();
        if let Some(r) = maps.forward.get(original) {
            return r.clone();
        }
        if maps.reverse.contains_key(original) {
            return original.to_string();
        }
        let mut attempt = 0;
        let replacement = loop {
            let c = self.candidate(original, attempt);
            if !maps.reverse.contains_key(&c) && !maps.forward.contains_key(&c) {
                break c;
            }
            attempt += 1;
        };
        maps.forward.insert(original.to_string(), replacement.clone());
        maps.reverse.insert(replacement.clone(), original.to_string());
        replacement
    }

    /// Replacement for a syntactically valid UID, created on first use.
    /// A value that is already a replacement maps to itself.
    pub fn remap(&self, uid: &str) -> Result<String, ProfileError> {
        let uid = uid.trim_end_matches(['\0', ' ']);
        if !is_valid_uid(uid) {
            return Err(ProfileError::InvalidUid(uid.to_string()));
        }
        Ok(self.insert_new(uid))
    }

    /// Like `remap` but also maps malformed values, so that every UI value
    /// in a processed object is replaced.
    pub fn remap_lenient(&self, uid: &str) -> String {
        self.insert_new(uid.trim_end_matches(['\0', ' ']))
    }

    /// Loads `original<TAB>replacement` lines, keeping existing entries.
    pub fn merge_from<R: BufRead>(&self, reader: R) -> Result<usize, ProfileError> {
        let mut maps = self.maps.lock().unwrap();
        let mut n = 0;
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| ProfileError::Io(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let (orig, repl) = line.split_once('\t').ok_or_else(|| {
                ProfileError::UidMapFormat { line: i + 1, message: "expected two tab-separated fields".into() }
            })?;
            if !is_valid_uid(repl) {
                return Err(ProfileError::UidMapFormat { line: i + 1, message: format!("invalid replacement {repl:?}") });
            }
            match (maps.forward.get(orig), maps.reverse.get(repl)) {
                (Some(r), _) if r != repl => {
                    return Err(ProfileError::UidMapFormat { line: i + 1, message: format!("conflicting mapping for {orig}") })
                }
                (_, Some(o)) if o != orig => {
                    return Err(ProfileError::UidMapFormat { line: i + 1, message: format!("replacement {repl} reused") })
                }
                _ => {}
            }
            maps.forward.insert(orig.to_string(), repl.to_string());
            maps.reverse.insert(repl.to_string(), orig.to_string());
            n += 1;
        }
        Ok(n)
    }

    pub fn load(&self, path: &Path) -> Result<usize, ProfileError> {
        match fs::File::open(path) {
            Ok(f) => self.merge_from(io::BufReader::new(f)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(0),
            Err(e) => Err(ProfileError::Io(format!("{}: {e}", path.display()))),
        }
    }

    /// Entries sorted by original UID.
    pub fn entries(&self) -> Vec<(String, String)> {
        let maps = self.maps.lock().unwrap();
        let mut v: Vec<_> = maps.forward.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
        v.sort();
        v
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (a, b) in self.entries() {
            writeln!(w, "{a}\t{b}")?;
        }
        Ok(())
    }

    /// Writes to a temporary file beside `path` and renames it into place.
    pub fn save(&self, path: &Path) -> Result<(), ProfileError> {
        let io_err = |e: io::Error| ProfileError::Io(format!("{}: {e}", path.display()));
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        fs::create_dir_all(dir).map_err(io_err)?;
        let tmp = dir.join(format!(
            ".{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("uidmap")
        ));
        {
            let mut f = io::BufWriter::new(fs::File::create(&tmp).map_err(io_err)?);
            self.write_to(&mut f).map_err(io_err)?;
            f.into_inner().map_err(|e| io_err(e.into_error()))?.sync_all().map_err(io_err)?;
        }
        fs::rename(&tmp, path).map_err(io_err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map() -> UidMap {
        UidMap::new("2.25", b"secret").unwrap()
    }

    #[test]
    fn deterministic_and_valid() {
        let m = map();
        let a = m.remap("1.2.840.113619.2.55.3.1").unwrap();
        assert_eq!(m.remap("1.2.840.113619.2.55.3.1").unwrap(), a);
        assert!(a.starts_with("2.25."));
        assert!(is_valid_uid(&a));
        let other = map();
        assert_eq!(other.remap("1.2.840.113619.2.55.3.1").unwrap(), a);
        let salted = UidMap::new("2.25", b"pepper").unwrap();
        assert_ne!(salted.remap("1.2.840.113619.2.55.3.1").unwrap(), a);
    }

    #[test]
    fn replacement_maps_to_itself() {
        let m = map();
        let a = m.remap("1.2.3").unwrap();
        assert_eq!(m.remap(&a).unwrap(), a);
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn invalid_input_rejected() {
        assert!(matches!(map().remap("1.2.840..5"), Err(ProfileError::InvalidUid(_))));
        assert!(UidMap::new("1..2", b"").is_err());
    }

    #[test]
    fn long_root_fits() {
        let root = "1.2.826.0.1.3680043.10.1661.999999.12345678";
        let m = UidMap::new(root, b"s").unwrap();
        let r = m.remap("1.2.3.4").unwrap();
        assert!(r.len() <= 64 && is_valid_uid(&r) && r.starts_with(root));
    }

    #[test]
    fn persistence_round_trip() {
        let m = map();
        for i in 0..20 {
            m.remap(&format!("1.2.3.{i}")).unwrap();
        }
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/uids.tsv");
        m.save(&p).unwrap();
        let m2 = UidMap::new("2.25", b"other-salt").unwrap();
        assert_eq!(m2.load(&p).unwrap(), 20);
        assert_eq!(m2.entries(), m.entries());
        assert_eq!(m2.remap("1.2.3.7").unwrap(), m.get("1.2.3.7").unwrap());
    }

    #[test]
    fn conflicting_file_rejected() {
        let m = map();
        let bad = "1.2.3\t2.25.1\n1.2.3\t2.25.2\n";
        assert!(matches!(m.merge_from(bad.as_bytes()), Err(ProfileError::UidMapFormat { line: 2, .. })));
    }

    proptest::proptest! {
        #[test]
        fn injective(uids in proptest::collection::hash_set("[1-9][0-9]{0,5}(\\.[1-9][0-9]{0,5}){1,6}", 1..100)) {
            let m = map();
            let out: std::collections::HashSet<String> = uids.iter().map(|u| m.remap(u).unwrap()).collect();
            proptest::prop_assert_eq!(out.len(), uids.len());
        }
    }
}
