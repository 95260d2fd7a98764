//! Series-level consistency of selected attributes.
//!
//! Members of a series vote on each listed tag. Absence is a candidate like
//! any value, so a tag missing from most members is removed from all.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::codec::{tags, write_dataset, DataElement, DataSet, Encoding, Tag, Value};

pub const DEFAULT_TAGS: [Tag; 2] = [tags::SERIES_DESCRIPTION, tags::SERIES_NUMBER];

/// Indices of corpus members sharing one SeriesInstanceUID.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesGroup {
    pub series_uid: String,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Grouping {
    /// Groups in ascending series UID order, members in corpus order.
    pub groups: Vec<SeriesGroup>,
    /// Members without a SeriesInstanceUID.
    pub quarantine: Vec<usize>,
}

pub fn group_by_series<'a>(corpus: impl IntoIterator<Item = &'a DataSet>) -> Grouping {
    let mut by_uid: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut quarantine = Vec::new();
    for (i, ds) in corpus.into_iter().enumerate() {
        match ds.string(tags::SERIES_INSTANCE_UID).filter(|s| !s.is_empty()) {
            Some(uid) => by_uid.entry(uid).or_default().push(i),
            None => quarantine.push(i),
        }
    }
    Grouping {
        groups: by_uid
            .into_iter()
            .map(|(series_uid, members)| SeriesGroup { series_uid, members })
            .collect(),
        quarantine,
    }
}

/// Comparable form of an element value: string padding is ignored and
/// sequences compare by their encoding.
fn value_key(ds: &DataSet, tag: Tag) -> Option<Vec<u8>> {
    let e = ds.get(tag)?;
    Some(match &e.value {
        Value::Sequence(_) | Value::Fragments(_) => {
            let single: DataSet = [e.clone()].into_iter().collect();
            write_dataset(&single, Encoding::Explicit).unwrap_or_default()
        }
        _ => {
            let mut raw = e.raw_value(ds.charset()).map(|c| c.into_owned()).unwrap_or_default();
            while raw.last().is_some_and(|&b| b == 0 || b == b' ') {
                raw.pop();
            }
            raw
        }
    })
}

/// One distinct value of a tag within a series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observed {
    /// Padding-trimmed value, None for absence.
    pub value: Option<Vec<u8>>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagDecision {
    pub tag: Tag,
    /// Distinct values, most frequent first.
    pub observed: Vec<Observed>,
    /// Element every member receives. None means the tag is removed.
    pub canonical: Option<DataElement>,
    canonical_key: Option<Vec<u8>>,
}

impl TagDecision {
    pub fn canonical_value(&self) -> Option<&[u8]> {
        self.canonical_key.as_deref()
    }
}

/// Canonical values chosen for one series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPlan {
    pub series_uid: String,
    pub decisions: Vec<TagDecision>,
}

/// Majority value of each tag. Ties go to the value held by the member
/// with the lowest InstanceNumber, then to the smallest value, absence
/// sorting first.
pub fn plan_series(series_uid: &str, members: &[&DataSet], tag_list: &[Tag]) -> SeriesPlan {
    let decisions = tag_list
        .iter()
        .map(|&tag| {
            // key -> (count, lowest instance number, holder index)
            let mut tally: BTreeMap<Option<Vec<u8>>, (usize, i64, usize)> = BTreeMap::new();
            for (i, ds) in members.iter().enumerate() {
                let inst = ds.int(tags::INSTANCE_NUMBER).unwrap_or(i64::MAX);
                let t = tally.entry(value_key(ds, tag)).or_insert((0, i64::MAX, i));
                t.0 += 1;
                if inst < t.1 {
                    t.1 = inst;
                    t.2 = i;
                }
            }
            let best = tally
                .iter()
                .min_by(|a, b| b.1 .0.cmp(&a.1 .0).then(a.1 .1.cmp(&b.1 .1)).then(a.0.cmp(b.0)))
                .map(|(k, v)| (k.clone(), v.2));
            let (canonical_key, holder) = best.unwrap_or((None, 0));
            let canonical = canonical_key.as_ref().and_then(|_| members[holder].get(tag).cloned());
            let mut observed: Vec<Observed> = tally
                .into_iter()
                .map(|(value, (count, _, _))| Observed { value, count })
                .collect();
            observed.sort_by(|a, b| b.count.cmp(&a.count).then(a.value.cmp(&b.value)));
            TagDecision {
                tag,
                observed,
                canonical,
                canonical_key,
            }
        })
        .collect();
    SeriesPlan {
        series_uid: series_uid.to_string(),
        decisions,
    }
}

/// Rewrites `ds` to the plan and returns the tags that changed.
pub fn apply_plan(ds: &mut DataSet, plan: &SeriesPlan) -> Vec<Tag> {
    let mut changed = Vec::new();
    for d in &plan.decisions {
        if value_key(ds, d.tag) == d.canonical_key {
            continue;
        }
        match &d.canonical {
            Some(e) => {
                ds.insert(e.clone());
            }
            None => {
                ds.remove(d.tag);
            }
        }
        changed.push(d.tag);
    }
    changed
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagReport {
    pub tag: Tag,
    pub observed: Vec<Observed>,
    pub canonical: Option<Vec<u8>>,
    pub rewritten: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonizationReport {
    pub series_uid: String,
    pub members: usize,
    pub tags: Vec<TagReport>,
}

impl HarmonizationReport {
    pub fn new(plan: &SeriesPlan, members: usize) -> HarmonizationReport {
        HarmonizationReport {
            series_uid: plan.series_uid.clone(),
            members,
            tags: plan
                .decisions
                .iter()
                .map(|d| TagReport {
                    tag: d.tag,
                    observed: d.observed.clone(),
                    canonical: d.canonical_key.clone(),
                    rewritten: 0,
                })
                .collect(),
        }
    }

    pub fn count_rewrites(&mut self, changed: &[Tag]) {
        for t in &mut self.tags {
            if changed.contains(&t.tag) {
                t.rewritten += 1;
            }
        }
    }

    pub fn total_rewrites(&self) -> usize {
        self.tags.iter().map(|t| t.rewritten).sum()
    }

    /// Text rendering for the audit log. Values appear only as salted
    /// digests so the log carries no original content.
    pub fn render(&self, salt: &[u8]) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[harmonize]");
        let _ = writeln!(s, "series = {}", self.series_uid);
        let _ = writeln!(s, "members = {}", self.members);
        for t in &self.tags {
            let obs: Vec<String> = t.observed.iter().map(|o| format!("{}x{}", digest(salt, o.value.as_deref()), o.count)).collect();
            let _ = writeln!(
                s,
                "{} distinct={} canonical={} rewritten={} observed={}",
                t.tag,
                t.observed.len(),
                digest(salt, t.canonical.as_deref()),
                t.rewritten,
                obs.join(",")
            );
        }
        s
    }
}

fn digest(salt: &[u8], v: Option<&[u8]>) -> String {
    match v {
        None => "absent".into(),
        Some(b) => {
            let mut h = Sha256::new();
            h.update(salt);
            h.update([0u8]);
            h.update(b);
            h.finalize()[..6].iter().map(|b| format!("{b:02x}")).collect()
        }
    }
}

/// Plans and applies in one step for a series held in memory.
pub fn harmonize(series_uid: &str, members: &mut [DataSet], tag_list: &[Tag]) -> HarmonizationReport {
    let plan = {
        let refs: Vec<&DataSet> = members.iter().collect();
        plan_series(series_uid, &refs, tag_list)
    };
    let mut report = HarmonizationReport::new(&plan, members.len());
    for ds in members.iter_mut() {
        let changed = apply_plan(ds, &plan);
        report.count_rewrites(&changed);
    }
    report
}

/// A member whose value of a listed tag differs from its series majority.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistency {
    pub series_uid: String,
    pub member: usize,
    pub tag: Tag,
}

/// Instance-level findings over a whole corpus.
pub fn find_inconsistencies(corpus: &[DataSet], tag_list: &[Tag]) -> Vec<Inconsistency> {
    let grouping = group_by_series(corpus);
    let mut out = Vec::new();
    for g in &grouping.groups {
        let refs: Vec<&DataSet> = g.members.iter().map(|&i| &corpus[i]).collect();
        let plan = plan_series(&g.series_uid, &refs, tag_list);
        for &i in &g.members {
            for d in &plan.decisions {
                if value_key(&corpus[i], d.tag) != d.canonical_key {
                    out.push(Inconsistency {
                        series_uid: g.series_uid.clone(),
                        member: i,
                        tag: d.tag,
                    });
                }
            }
        }
    }
    out
}
