/// Character repertoire declared by Specific Character Set (0008,0005).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum CharacterSet {
    #[default]
    Default,
    Latin1,
    Utf8,
    /// Any other declaration. Text is left as raw bytes.
    Unsupported(String),
}

impl CharacterSet {
    /// Interprets the raw value of (0008,0005).
    pub fn from_declaration(raw: &[u8]) -> CharacterSet {
        let text: String = raw.iter().map(|&b| b as char).collect();
        let terms: Vec<&str> = text
            .trim_end_matches(['\0', ' '])
            .split('\\')
            .map(str::trim)
            .collect();
        match terms.as_slice() {
            [] | [""] | ["ISO_IR 6"] => CharacterSet::Default,
            ["ISO_IR 100"] => CharacterSet::Latin1,
            ["ISO_IR 192"] => CharacterSet::Utf8,
            _ => CharacterSet::Unsupported(text.trim().to_string()),
        }
    }

    pub fn is_supported(&self) -> bool {
        !matches!(self, CharacterSet::Unsupported(_))
    }

    /// Decodes text bytes. The default repertoire is read as Latin-1 so that
    /// stray high bytes survive a decode/encode cycle.
    pub fn decode(&self, bytes: &[u8]) -> Option<String> {
        match self {
            CharacterSet::Default | CharacterSet::Latin1 => {
                Some(bytes.iter().map(|&b| b as char).collect())
            }
            CharacterSet::Utf8 => String::from_utf8(bytes.to_vec()).ok(),
            CharacterSet::Unsupported(_) => None,
        }
    }

    pub fn encode(&self, text: &str) -> Option<Vec<u8>> {
        match self {
            CharacterSet::Default | CharacterSet::Latin1 => text
                .chars()
                .map(|c| u8::try_from(c as u32).ok())
                .collect(),
            CharacterSet::Utf8 => Some(text.as_bytes().to_vec()),
            CharacterSet::Unsupported(_) => {
                text.is_ascii().then(|| text.as_bytes().to_vec())
            }
        }
    }
}
