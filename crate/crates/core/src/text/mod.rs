//! Rules-based scrubbing of identifying text from free-text values.
//!
//! Rules run in a fixed order: context tokens, trigger words,
//! dates and years, long digit runs, then the optional address
//! gazetteer and any extension rules. Matches are merged and deleted.

mod rules;

use std::collections::BTreeSet;

use regex::{Regex, RegexBuilder};

use crate::codec::{tags, DataSet};

pub use rules::{rule_r1_tokens, rule_r2_triggers, rule_r3_dates, rule_r4_digit_runs, rule_r5_address, Match};

/// Identifying tokens of one patient. Tokens are stored lowercased.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CleanContext {
    pub name_tokens: BTreeSet<String>,
    pub id_tokens: BTreeSet<String>,
    pub extra_tokens: BTreeSet<String>,
    /// Tokens dropped for being shorter than two characters.
    pub skipped: BTreeSet<String>,
}

const MIN_TOKEN_CHARS: usize = 2;

fn split_tokens(s: &str, seps: &[char]) -> Vec<String> {
    s.split(|c: char| c.is_whitespace() || seps.contains(&c))
        .map(|t| t.trim_matches(|c: char| c.is_ascii_punctuation()))
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

impl CleanContext {
    pub fn new() -> CleanContext {
        CleanContext::default()
    }

    /// Context built from PatientName and PatientID.
    pub fn from_dataset(ds: &DataSet) -> CleanContext {
        let mut ctx = CleanContext::new();
        for name in ds.strings(tags::PATIENT_NAME).unwrap_or_default() {
            for t in split_tokens(&name, &['^', '=', ',']) {
                ctx.add(Kind::Name, t);
            }
        }
        if let Some(id) = ds.string(tags::PATIENT_ID) {
            let id = id.trim().to_lowercase();
            for t in split_tokens(&id, &['^']) {
                ctx.add(Kind::Id, t);
            }
            if !id.is_empty() {
                ctx.add(Kind::Id, id);
            }
        }
        ctx
    }

    /// Context holding only extra tokens, mainly for tests.
    pub fn from_tokens<S: AsRef<str>>(tokens: impl IntoIterator<Item = S>) -> CleanContext {
        let mut ctx = CleanContext::new();
        for t in tokens {
            ctx.add_extra(t.as_ref());
        }
        ctx
    }

    pub fn add_extra(&mut self, token: &str) {
        let t = token.trim().to_lowercase();
        if !t.is_empty() {
            self.add(Kind::Extra, t);
        }
    }

    fn add(&mut self, kind: Kind, token: String) {
        if token.chars().count() < MIN_TOKEN_CHARS {
            self.skipped.insert(token);
            return;
        }
        match kind {
            Kind::Name => self.name_tokens.insert(token),
            Kind::Id => self.id_tokens.insert(token),
            Kind::Extra => self.extra_tokens.insert(token),
        };
    }

    /// All applicable tokens, longest first.
    pub fn tokens(&self) -> Vec<&str> {
        let mut all: Vec<&str> = self
            .name_tokens
            .iter()
            .chain(&self.id_tokens)
            .chain(&self.extra_tokens)
            .map(String::as_str)
            .collect();
        all.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        all.dedup();
        all
    }
}

enum Kind {
    Name,
    Id,
    Extra,
}

/// One removed span of the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redaction {
    /// Rule ids that contributed, joined with `+`.
    pub rule: String,
    pub start: usize,
    pub end: usize,
    pub replacement: String,
}

/// Replays redactions against the original text.
pub fn apply_redactions(text: &str, redactions: &[Redaction]) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pos = 0;
    for r in redactions {
        out.push_str(&text[pos..r.start]);
        out.push_str(&r.replacement);
        pos = r.end;
    }
    out.push_str(&text[pos..]);
    out
}

#[derive(Debug, Clone)]
pub struct ExtensionRule {
    pub id: String,
    pub regex: Regex,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("rules file line {line}: {message}")]
pub struct RuleFileError {
    pub line: usize,
    pub message: String,
}

/// Parses `RULEID;REGEX;DESCRIPTION` lines. Patterns are case-insensitive
/// and only match on word boundaries.
pub fn load_extension_rules(source: &str) -> Result<Vec<ExtensionRule>, RuleFileError> {
    let mut out = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| RuleFileError { line: i + 1, message };
        let mut parts = line.splitn(3, ';');
        let id = parts.next().unwrap_or("").trim();
        let pattern = parts.next().ok_or_else(|| err("missing regex".into()))?.trim();
        let description = parts.next().unwrap_or("").trim();
        if id.is_empty() {
            return Err(err("missing rule id".into()));
        }
        let regex = RegexBuilder::new(pattern)
            .case_insensitive(true)
            .build()
            .map_err(|e| err(e.to_string()))?;
        out.push(ExtensionRule {
            id: id.to_string(),
            regex,
            description: description.to_string(),
        });
    }
    Ok(out)
}

/// Street and state keywords for the optional address rule.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    pub streets: Vec<String>,
    pub states: Vec<String>,
}

impl Gazetteer {
    pub fn builtin() -> Gazetteer {
        let streets = "St Street Ave Avenue Rd Road Ln Lane Dr Drive Blvd Ct Court Pl Way Hwy Pkwy Terrace Ter Cir";
        let states = "AL AK AZ AR CA CO CT DE FL GA HI ID IL IN IA KS KY LA ME MD MA MI MN MS MO MT NE NV NH NJ NM NY NC ND OH OK OR PA RI SC SD TN TX UT VT VA WA WV WI WY";
        Gazetteer {
            streets: streets.split(' ').map(String::from).collect(),
            states: states.split(' ').map(String::from).collect(),
        }
    }
}

/// Rule configuration.
#[derive(Debug, Clone)]
pub struct Cleaner {
    /// Trigger words with their enable flags.
    pub triggers: Vec<(String, bool)>,
    /// Text substituted for each merged span. Empty means delete and
    /// collapse surrounding whitespace.
    pub replacement: String,
    pub gazetteer: Option<Gazetteer>,
    pub extensions: Vec<ExtensionRule>,
}

impl Default for Cleaner {
    fn default() -> Self {
        let triggers = [("for", true), ("by", true), ("at", true), ("to", true), ("on", true), ("in", false)];
        Cleaner {
            triggers: triggers.iter().map(|&(t, on)| (t.to_string(), on)).collect(),
            replacement: String::new(),
            gazetteer: None,
            extensions: Vec::new(),
        }
    }
}

impl Cleaner {
    pub fn set_trigger(&mut self, word: &str, enabled: bool) {
        match self.triggers.iter_mut().find(|(t, _)| t.eq_ignore_ascii_case(word)) {
            Some(t) => t.1 = enabled,
            None => self.triggers.push((word.to_lowercase(), enabled)),
        }
    }

    pub fn enabled_triggers(&self) -> Vec<&str> {
        self.triggers.iter().filter(|(_, on)| *on).map(|(t, _)| t.as_str()).collect()
    }

    /// Every raw rule match in rule order.
    pub fn matches(&self, text: &str, ctx: &CleanContext) -> Vec<Match> {
        let mut all = rule_r1_tokens(text, ctx);
        all.extend(rule_r2_triggers(text, &self.enabled_triggers()));
        all.extend(rule_r3_dates(text));
        all.extend(rule_r4_digit_runs(text));
        if let Some(g) = &self.gazetteer {
            all.extend(rule_r5_address(text, &g.streets, &g.states));
        }
        for ext in &self.extensions {
            for m in ext.regex.find_iter(text) {
                if m.start() < m.end() && rules::bounded(text, m.start(), m.end()) {
                    all.push(Match {
                        rule: ext.id.clone(),
                        start: m.start(),
                        end: m.end(),
                    });
                }
            }
        }
        all
    }

    fn one_pass(&self, text: &str, ctx: &CleanContext) -> Vec<Redaction> {
        let deleting = self.replacement.is_empty();
        merge(text, self.matches(text, ctx), deleting, &self.replacement)
    }

    /// Cleans `text`, returning the result and the redactions relative to
    /// the original. With the default deleting replacement the rules are
    /// reapplied until nothing more matches.
    pub fn clean(&self, text: &str, ctx: &CleanContext) -> (String, Vec<Redaction>) {
        let mut current = text.to_string();
        // origin[i] is the offset in `text` of byte i of `current`.
        let mut origin: Vec<usize> = (0..=text.len()).collect();
        let mut acc: Vec<Redaction> = Vec::new();
        loop {
            let reds = self.one_pass(&current, ctx);
            if reds.is_empty() {
                break;
            }
            for r in &reds {
                acc.push(Redaction {
                    rule: r.rule.clone(),
                    start: origin[r.start],
                    end: origin[r.end],
                    replacement: r.replacement.clone(),
                });
            }
            let next = apply_redactions(&current, &reds);
            let mut next_origin = Vec::with_capacity(next.len() + 1);
            let mut pos = 0;
            for r in &reds {
                next_origin.extend_from_slice(&origin[pos..r.start]);
                pos = r.end;
            }
            next_origin.extend_from_slice(&origin[pos..]);
            current = next;
            origin = next_origin;
            if !self.replacement.is_empty() {
                break;
            }
        }
        acc.sort_by_key(|r| (r.start, r.end));
        let mut merged: Vec<Redaction> = Vec::new();
        for r in acc {
            match merged.last_mut() {
                Some(last) if r.start <= last.end => {
                    last.end = last.end.max(r.end);
                    for id in r.rule.split('+') {
                        if !last.rule.split('+').any(|x| x == id) {
                            last.rule.push('+');
                            last.rule.push_str(id);
                        }
                    }
                }
                _ => merged.push(r),
            }
        }
        (current, merged)
    }
}

/// Merges overlapping matches and matches separated only by whitespace.
/// When deleting, each span also takes the whitespace after it, or before
/// it when it ends the text.
fn merge(text: &str, mut ms: Vec<Match>, deleting: bool, replacement: &str) -> Vec<Redaction> {
    ms.retain(|m| m.start < m.end);
    ms.sort_by_key(|m| (m.start, m.end));
    let b = text.as_bytes();
    let mut out: Vec<Redaction> = Vec::new();
    for m in ms {
        if let Some(last) = out.last_mut() {
            let gap_ws = m.start >= last.end && b[last.end..m.start].iter().all(u8::is_ascii_whitespace);
            if m.start <= last.end || (deleting && gap_ws) {
                last.end = last.end.max(m.end);
                if !last.rule.split('+').any(|x| x == m.rule) {
                    last.rule.push('+');
                    last.rule.push_str(&m.rule);
                }
                continue;
            }
        }
        out.push(Redaction {
            rule: m.rule,
            start: m.start,
            end: m.end,
            replacement: replacement.to_string(),
        });
    }
    if deleting {
        let n = out.len();
        for i in 0..n {
            let limit = if i + 1 < n { out[i + 1].start } else { b.len() };
            let mut end = out[i].end;
            while end < limit && b[end].is_ascii_whitespace() {
                end += 1;
            }
            out[i].end = end;
            if end == b.len() {
                let floor = if i > 0 { out[i - 1].end } else { 0 };
                let mut start = out[i].start;
                while start > floor && b[start - 1].is_ascii_whitespace() {
                    start -= 1;
                }
                out[i].start = start;
            }
        }
    }
    out
}

/// Cleans with the default rule configuration.
pub fn clean_text(text: &str, ctx: &CleanContext) -> (String, Vec<Redaction>) {
    Cleaner::default().clean(text, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{DataElement, VR};

    fn ctx(tokens: &[&str]) -> CleanContext {
        CleanContext::from_tokens(tokens.iter().copied())
    }

    #[test]
    fn address_example_keeps_address() {
        let (out, reds) = clean_text("Mark Wilcox : 908 E Maryland Ln Laurel, MT 59044", &ctx(&["mark", "wilcox"]));
        assert_eq!(out, ": 908 E Maryland Ln Laurel, MT 59044");
        assert_eq!(reds.len(), 1);
        assert_eq!(reds[0].rule, "token");
    }

    #[test]
    fn gazetteer_catches_address() {
        let cleaner = Cleaner {
            gazetteer: Some(Gazetteer::builtin()),
            ..Cleaner::default()
        };
        let (out, _) = cleaner.clean("Mark Wilcox : 908 E Maryland Ln Laurel, MT 59044", &ctx(&["mark", "wilcox"]));
        assert_eq!(out, ":");
    }

    #[test]
    fn empty_and_clean_inputs() {
        assert_eq!(clean_text("", &ctx(&["doe"])), (String::new(), vec![]));
        let (out, reds) = clean_text("AX T1 POST GD", &CleanContext::new());
        assert_eq!(out, "AX T1 POST GD");
        assert!(reds.is_empty());
    }

    #[test]
    fn trigger_phrase_removed() {
        let (out, _) = clean_text("CHEST CT for John Smith", &CleanContext::new());
        assert_eq!(out, "CHEST CT");
        let (out, _) = clean_text("seen by Dr. Adams", &CleanContext::new());
        assert_eq!(out, "seen");
    }

    #[test]
    fn in_trigger_off_by_default() {
        let (out, _) = clean_text("lesion in liver", &CleanContext::new());
        assert_eq!(out, "lesion in liver");
        let mut c = Cleaner::default();
        c.set_trigger("in", true);
        assert_eq!(c.clean("lesion in liver", &CleanContext::new()).0, "lesion");
    }

    #[test]
    fn combined_rules_and_reconstruction() {
        let text = "DOE JANE 19850317 MRN 555-123-4567x89 ok";
        let (out, reds) = clean_text(text, &ctx(&["doe", "jane"]));
        assert_eq!(out, "MRN ok");
        assert_eq!(apply_redactions(text, &reds), out);
    }

    #[test]
    fn placeholder_replacement() {
        let c = Cleaner {
            replacement: "*".into(),
            ..Cleaner::default()
        };
        let (out, reds) = c.clean("Head 20230115 scan", &CleanContext::new());
        assert_eq!(out, "Head * scan");
        assert_eq!(reds[0].start, 5);
    }

    #[test]
    fn context_from_dataset() {
        let mut ds = DataSet::new();
        ds.insert(DataElement::string(tags::PATIENT_NAME, VR::PN, "O'NEIL^J^Mary"));
        ds.insert(DataElement::string(tags::PATIENT_ID, VR::LO, "MRN 48213"));
        let c = CleanContext::from_dataset(&ds);
        assert!(c.name_tokens.contains("o'neil"));
        assert!(c.name_tokens.contains("mary"));
        assert!(c.skipped.contains("j"));
        assert!(c.id_tokens.contains("48213"));
        assert!(c.id_tokens.contains("mrn 48213"));
    }

    #[test]
    fn extension_rules() {
        let rules = load_extension_rules("# c\nMRN;mrn\\s*\\d+;record numbers\n").unwrap();
        let c = Cleaner {
            extensions: rules,
            ..Cleaner::default()
        };
        assert_eq!(c.clean("ct MRN 1234", &CleanContext::new()).0, "ct");
        assert!(load_extension_rules("BAD;(\n").is_err());
        assert!(load_extension_rules(";x\n").is_err());
    }

    proptest::proptest! {
        #[test]
        fn idempotent_and_reconstructible(text in "[A-Za-z0-9 ()x\\-:,.]{0,60}", tok in "[a-z]{2,5}") {
            let c = ctx(&[tok.as_str()]);
            let (once, reds) = clean_text(&text, &c);
            proptest::prop_assert_eq!(apply_redactions(&text, &reds), once.clone());
            proptest::prop_assert!(once.len() <= text.len());
            let (twice, more) = clean_text(&once, &c);
            proptest::prop_assert_eq!(twice, once.clone());
            proptest::prop_assert!(more.is_empty());
            proptest::prop_assert!(rule_r1_tokens(&once, &c).is_empty());
        }

        #[test]
        fn year_predicate_matches_brute_force(n in 0u32..10000) {
            let s = format!("{n:04}");
            let hit = !rule_r3_dates(&s).is_empty();
            proptest::prop_assert_eq!(hit, (1900..=2099).contains(&n));
        }
    }
}
