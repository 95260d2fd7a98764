//! The individual matching rules. Each returns byte spans into the input.

use super::CleanContext;

/// A rule hit as a byte range of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub rule: String,
    pub start: usize,
    pub end: usize,
}

impl Match {
    fn new(rule: &str, start: usize, end: usize) -> Match {
        Match {
            rule: rule.to_string(),
            start,
            end,
        }
    }
}

pub(crate) fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric()
}

/// True when `text[start..end]` has no ASCII alphanumeric neighbour on either side.
pub(crate) fn bounded(text: &str, start: usize, end: usize) -> bool {
    let b = text.as_bytes();
    let before = start == 0 || !is_word_byte(b[start - 1]);
    let after = end >= b.len() || !is_word_byte(b[end]);
    before && after
}

fn fold(c: char) -> char {
    c.to_lowercase().next().unwrap_or(c)
}

/// Whole-word, case-insensitive occurrences of every context token.
pub fn rule_r1_tokens(text: &str, ctx: &CleanContext) -> Vec<Match> {
    let chars: Vec<(usize, char)> = text.char_indices().map(|(i, c)| (i, fold(c))).collect();
    let mut out = Vec::new();
    for token in ctx.tokens() {
        let tok: Vec<char> = token.chars().map(fold).collect();
        if tok.is_empty() || tok.len() > chars.len() {
            continue;
        }
        for s in 0..=chars.len() - tok.len() {
            if chars[s..s + tok.len()].iter().map(|&(_, c)| c).eq(tok.iter().copied()) {
                let start = chars[s].0;
                let end = chars.get(s + tok.len()).map_or(text.len(), |&(i, _)| i);
                if bounded(text, start, end) {
                    out.push(Match::new("token", start, end));
                }
            }
        }
    }
    out.sort_by_key(|m| (m.start, m.end));
    out
}

/// Byte ranges of ASCII words.
fn words(text: &str) -> impl Iterator<Item = (usize, usize)> + '_ {
    let b = text.as_bytes();
    let mut i = 0;
    std::iter::from_fn(move || {
        while i < b.len() && !is_word_byte(b[i]) {
            i += 1;
        }
        if i >= b.len() {
            return None;
        }
        let start = i;
        while i < b.len() && is_word_byte(b[i]) {
            i += 1;
        }
        Some((start, i))
    })
}

/// From the leftmost whole-word trigger to the end of the text.
pub fn rule_r2_triggers(text: &str, triggers: &[&str]) -> Vec<Match> {
    words(text)
        .find(|&(s, e)| triggers.iter().any(|t| text[s..e].eq_ignore_ascii_case(t)))
        .map(|(s, _)| vec![Match::new("trigger", s, text.len())])
        .unwrap_or_default()
}

fn is_calendar_ymd(d: &[u8]) -> bool {
    let num = |r: std::ops::Range<usize>| {
        d[r].iter().fold(0u32, |acc, &c| acc * 10 + (c - b'0') as u32)
    };
    let (m, day) = (num(4..6), num(6..8));
    (1..=12).contains(&m) && (1..=31).contains(&day)
}

pub(crate) fn is_year(d: &[u8]) -> bool {
    let y = d.iter().fold(0u32, |acc, &c| acc * 10 + (c - b'0') as u32);
    (1900..=2099).contains(&y)
}

/// Whole-word `yyyymmdd` dates and whole-word years 1900 to 2099.
pub fn rule_r3_dates(text: &str) -> Vec<Match> {
    words(text)
        .filter_map(|(s, e)| {
            let w = &text.as_bytes()[s..e];
            if !w.iter().all(u8::is_ascii_digit) {
                return None;
            }
            match w.len() {
                8 if is_calendar_ymd(w) => Some(Match::new("date", s, e)),
                4 if is_year(w) => Some(Match::new("date", s, e)),
                _ => None,
            }
        })
        .collect()
}

pub(crate) fn is_run_byte(b: u8) -> bool {
    b.is_ascii_digit() || matches!(b, b'(' | b')' | b'-' | b'x' | b'X')
}

/// Maximal runs of at least nine characters from digits, parentheses,
/// dashes and the letter x.
pub fn rule_r4_digit_runs(text: &str) -> Vec<Match> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        if !is_run_byte(b[i]) {
            i += 1;
            continue;
        }
        let start = i;
        while i < b.len() && is_run_byte(b[i]) {
            i += 1;
        }
        if i - start >= 9 {
            out.push(Match::new("digits", start, i));
        }
    }
    out
}

/// Optional address heuristic. A house number followed within four words by
/// a street keyword starts a match that runs to the end of the text; a state
/// keyword followed by a five digit zip code is matched on its own.
pub fn rule_r5_address(text: &str, streets: &[String], states: &[String]) -> Vec<Match> {
    let ws: Vec<(usize, usize)> = words(text).collect();
    let is_in = |list: &[String], s: usize, e: usize| list.iter().any(|k| text[s..e].eq_ignore_ascii_case(k));
    let mut out = Vec::new();
    for (i, &(s, e)) in ws.iter().enumerate() {
        let w = &text[s..e];
        if w.len() <= 6 && w.bytes().all(|c| c.is_ascii_digit()) {
            if ws[i + 1..].iter().take(4).any(|&(a, b)| is_in(streets, a, b)) {
                out.push(Match::new("address", s, text.len()));
                break;
            }
        }
        if is_in(states, s, e) {
            if let Some(&(a, b)) = ws.get(i + 1) {
                if b - a == 5 && text[a..b].bytes().all(|c| c.is_ascii_digit()) {
                    out.push(Match::new("address", s, b));
                }
            }
        }
    }
    out
}
