use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use super::{apply_pixel_masks, filter_sop_class, FailurePolicy, FilterDecision, JobConfig, PipelineError};
use crate::codec::{tags, DataSet, DicomObject, Tag};
use crate::dictionary::{load_action_table, load_safe_private_kb, ActionTable, SafePrivateKb};
use crate::harmonize::{apply_plan, group_by_series, plan_series, HarmonizationReport, SeriesPlan};
use crate::profile::{apply_profile, load_multiplex_policy, AuditRecord, MultiplexPolicy, Profile, UidMap};
use crate::text::{load_extension_rules, CleanContext, Cleaner, Gazetteer};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub files_in: usize,
    pub processed: usize,
    pub rejected: usize,
    pub failed: usize,
    pub series: usize,
    pub harmonized_rewrites: usize,
}

impl Summary {
    pub fn render(&self) -> String {
        format!(
            "files={} processed={} rejected={} failed={} series={} harmonized_rewrites={}",
            self.files_in, self.processed, self.rejected, self.failed, self.series, self.harmonized_rewrites
        )
    }
}

/// Result for one input file, by path relative to the input root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FileOutcome {
    Written { output: PathBuf, audit: Vec<AuditRecord> },
    Rejected(String),
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub summary: Summary,
    pub files: Vec<(PathBuf, FileOutcome)>,
    pub harmonization: Vec<HarmonizationReport>,
    pub audit_log: String,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.summary.failed == 0 {
            0
        } else {
            1
        }
    }
}

fn read_text(p: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(p).map_err(|e| PipelineError::Config(format!("{}: {e}", p.display())))
}

fn build_profile(cfg: &JobConfig) -> Result<Profile, PipelineError> {
    let conf = |e: String| PipelineError::Config(e);
    let table = match &cfg.action_table {
        Some(p) => load_action_table(&read_text(p)?).map_err(|e| conf(format!("{}: {e}", p.display())))?,
        None => ActionTable::builtin(),
    };
    let kb = match &cfg.safe_private_kb {
        Some(p) => {
            let f = fs::File::open(p).map_err(|e| conf(format!("{}: {e}", p.display())))?;
            load_safe_private_kb(f).map_err(|e| conf(format!("{}: {e}", p.display())))?
        }
        None => SafePrivateKb::default(),
    };
    let multiplex = match &cfg.multiplex_policy {
        Some(p) => load_multiplex_policy(&read_text(p)?).map_err(|e| conf(format!("{}: {e}", p.display())))?,
        None => MultiplexPolicy::builtin(),
    };
    let mut cleaner = Cleaner::default();
    if let Some(p) = &cfg.text_rules {
        cleaner.extensions = load_extension_rules(&read_text(p)?).map_err(|e| conf(format!("{}: {e}", p.display())))?;
    }
    for t in &cfg.disabled_triggers {
        cleaner.set_trigger(t, false);
    }
    for t in &cfg.enabled_triggers {
        cleaner.set_trigger(t, true);
    }
    if cfg.address_gazetteer {
        cleaner.gazetteer = Some(Gazetteer::builtin());
    }
    Ok(Profile::new(&table, cfg.options)
        .map_err(|e| conf(e.to_string()))?
        .with_safe_private(kb)
        .with_multiplex(multiplex)
        .with_cleaner(cleaner))
}

fn list_files(root: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    let mut out = Vec::new();
    for entry in walkdir::WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| PipelineError::Io(format!("{}: {e}", root.display())))?;
        if entry.file_type().is_file() {
            out.push(entry.path().strip_prefix(root).unwrap_or(entry.path()).to_path_buf());
        }
    }
    Ok(out)
}

/// What pass 1 keeps about an accepted file.
struct Header {
    series_uid: Option<String>,
    sop_uid: String,
    /// Only the harmonized tags and InstanceNumber.
    votes: DataSet,
}

enum Pass1 {
    Accepted(Header),
    Rejected(String),
    Failed(String),
}

fn read_object(path: &Path) -> Result<DicomObject, String> {
    let bytes = fs::read(path).map_err(|e| format!("read: {e}"))?;
    DicomObject::parse(&bytes).map_err(|e| format!("parse: {e}"))
}

fn pass1(cfg: &JobConfig, rel: &Path) -> Pass1 {
    let obj = match read_object(&cfg.input.join(rel)) {
        Ok(o) => o,
        Err(e) => return Pass1::Failed(e),
    };
    if let FilterDecision::Reject(why) = filter_sop_class(&obj, &cfg.sop_classes) {
        return Pass1::Rejected(why);
    }
    let Some(sop_uid) = obj.sop_instance_uid().filter(|s| !s.is_empty()) else {
        return Pass1::Failed("missing SOPInstanceUID".into());
    };
    let mut votes = DataSet::with_charset(obj.dataset.charset().clone());
    for &t in cfg.harmonize_tags.iter().chain([&tags::INSTANCE_NUMBER]) {
        if let Some(e) = obj.dataset.get(t) {
            votes.insert(e.clone());
        }
    }
    Pass1::Accepted(Header {
        series_uid: obj.series_instance_uid().filter(|s| !s.is_empty()),
        sop_uid,
        votes,
    })
}

struct Ctx<'a> {
    cfg: &'a JobConfig,
    profile: &'a Profile,
    uids: &'a UidMap,
}

fn pass2(cx: &Ctx, rel: &Path, plan: Option<&SeriesPlan>) -> Result<(PathBuf, Vec<AuditRecord>, Vec<Tag>), String> {
    let mut obj = read_object(&cx.cfg.input.join(rel))?;
    let changed = plan.map(|p| apply_plan(&mut obj.dataset, p)).unwrap_or_default();
    let selected: Vec<_> = cx.cfg.masks.iter().filter(|m| m.selects(&obj)).collect();
    for spec in selected {
        apply_pixel_masks(&mut obj, spec).map_err(|e| format!("mask: {e}"))?;
    }
    let mut ctx = CleanContext::from_dataset(&obj.dataset);
    for t in &cx.cfg.extra_tokens {
        ctx.add_extra(t);
    }
    let (out, audit) = apply_profile(&obj, cx.profile, cx.uids, &ctx).map_err(|e| format!("deidentify: {e}"))?;
    let bytes = out.to_bytes().map_err(|e| format!("serialize: {e}"))?;
    let sop = out.sop_instance_uid().filter(|s| !s.is_empty()).ok_or("no SOPInstanceUID after deidentification")?;
    let out_rel = rel.parent().unwrap_or(Path::new("")).join(format!("{sop}.dcm"));
    if !cx.cfg.dry_run {
        let dest = cx.cfg.output.join(&out_rel);
        if let Some(dir) = dest.parent() {
            fs::create_dir_all(dir).map_err(|e| format!("create {}: {e}", dir.display()))?;
        }
        fs::write(&dest, bytes).map_err(|e| format!("write {}: {e}", dest.display()))?;
    }
    Ok((out_rel, audit, changed))
}

fn render_audit(report: &RunReport, salt: &[u8]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "[summary]\n{}\n", report.summary.render());
    for h in &report.harmonization {
        let _ = writeln!(s, "{}", h.render(salt));
    }
    for (rel, outcome) in &report.files {
        match outcome {
            FileOutcome::Written { output, audit } => {
                let _ = writeln!(s, "[file]\noutput = {}", output.display());
                for r in audit {
                    let _ = writeln!(
                        s,
                        "{} action={} category={} present={} digest={} rules={}{}",
                        r.path,
                        r.action,
                        r.category,
                        r.original_present,
                        r.original_digest.as_deref().unwrap_or("-"),
                        if r.rules.is_empty() { "-".to_string() } else { r.rules.join("+") },
                        r.note.as_ref().map(|n| format!(" note={n:?}")).unwrap_or_default(),
                    );
                }
            }
            FileOutcome::Rejected(why) => {
                let _ = writeln!(s, "[rejected]\ninput = {}\nreason = {why}", rel.display());
            }
            FileOutcome::Failed(why) => {
                let _ = writeln!(s, "[failed]\ninput = {}\nreason = {why}", rel.display());
            }
        }
        s.push('\n');
    }
    s
}

/// Runs a job. Pass 1 reads every file to filter it and collect series
/// votes; pass 2 harmonizes, masks, deidentifies and writes in parallel.
/// Outputs go to the mirrored directory as `<new SOPInstanceUID>.dcm`.
pub fn run(cfg: &JobConfig) -> Result<RunReport, PipelineError> {
    let profile = build_profile(cfg)?;
    let uids = UidMap::new(&cfg.uid_root, &cfg.salt).map_err(|e| PipelineError::Config(format!("uid_root: {e}")))?;
    if let Some(p) = &cfg.uid_map {
        uids.load(p).map_err(|e| PipelineError::Config(format!("uid map: {e}")))?;
    }
    if !cfg.input.is_dir() {
        return Err(PipelineError::Config(format!("input {} is not a directory", cfg.input.display())));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| PipelineError::Io(e.to_string()))?;

    let files = list_files(&cfg.input)?;
    let halt = cfg.failure_policy == FailurePolicy::Halt;
    let halted = AtomicBool::new(false);
    let halted_msg = || FileOutcome::Failed("not processed: run halted after a failure".into());

    let first: Vec<Pass1> = pool.install(|| files.par_iter().map(|rel| pass1(cfg, rel)).collect());
    let mut outcomes: Vec<Option<FileOutcome>> = vec![None; files.len()];
    let mut accepted: Vec<(usize, Header)> = Vec::new();
    let mut seen: HashSet<(PathBuf, String)> = HashSet::new();
    for (i, p) in first.into_iter().enumerate() {
        match p {
            Pass1::Rejected(why) => outcomes[i] = Some(FileOutcome::Rejected(why)),
            Pass1::Failed(why) => outcomes[i] = Some(FileOutcome::Failed(why)),
            Pass1::Accepted(h) => {
                let dir = files[i].parent().unwrap_or(Path::new("")).to_path_buf();
                if seen.insert((dir, h.sop_uid.clone())) {
                    accepted.push((i, h));
                } else {
                    outcomes[i] = Some(FileOutcome::Failed("duplicate SOPInstanceUID in directory".into()));
                }
            }
        }
    }
    if halt && outcomes.iter().any(|o| matches!(o, Some(FileOutcome::Failed(_)))) {
        halted.store(true, Ordering::SeqCst);
    }

    let votes: Vec<DataSet> = accepted
        .iter()
        .map(|(_, h)| {
            let mut v = h.votes.clone();
            if let Some(s) = &h.series_uid {
                v.set_str(tags::SERIES_INSTANCE_UID, s.clone());
            }
            v
        })
        .collect();
    let grouping = group_by_series(&votes);
    let mut plan_of: HashMap<usize, usize> = HashMap::new();
    let mut plans: Vec<SeriesPlan> = Vec::new();
    for g in &grouping.groups {
        let refs: Vec<&DataSet> = g.members.iter().map(|&m| &votes[m]).collect();
        for &m in &g.members {
            plan_of.insert(m, plans.len());
        }
        plans.push(plan_series(&g.series_uid, &refs, &cfg.harmonize_tags));
    }
    let mut harmonization: Vec<HarmonizationReport> =
        grouping.groups.iter().zip(&plans).map(|(g, p)| HarmonizationReport::new(p, g.members.len())).collect();

    let cx = Ctx { cfg, profile: &profile, uids: &uids };
    let second: Vec<(usize, Option<usize>, FileOutcome, Vec<Tag>)> = pool.install(|| {
        accepted
            .par_iter()
            .enumerate()
            .map(|(k, (i, _))| {
                if halted.load(Ordering::SeqCst) {
                    return (*i, None, halted_msg(), Vec::new());
                }
                let plan_idx = plan_of.get(&k).copied();
                match pass2(&cx, &files[*i], plan_idx.map(|p| &plans[p])) {
                    Ok((output, audit, changed)) => (*i, plan_idx, FileOutcome::Written { output, audit }, changed),
                    Err(e) => {
                        if halt {
                            halted.store(true, Ordering::SeqCst);
                        }
                        (*i, None, FileOutcome::Failed(e), Vec::new())
                    }
                }
            })
            .collect()
    });
    for (i, plan_idx, outcome, changed) in second {
        if let Some(p) = plan_idx {
            harmonization[p].count_rewrites(&changed);
        }
        outcomes[i] = Some(outcome);
    }

    let files: Vec<(PathBuf, FileOutcome)> = files
        .into_iter()
        .zip(outcomes)
        .map(|(rel, o)| (rel, o.unwrap_or_else(halted_msg)))
        .collect();
    let mut summary = Summary {
        files_in: files.len(),
        series: grouping.groups.len(),
        harmonized_rewrites: harmonization.iter().map(|h| h.total_rewrites()).sum(),
        ..Summary::default()
    };
    for (_, o) in &files {
        match o {
            FileOutcome::Written { .. } => summary.processed += 1,
            FileOutcome::Rejected(_) => summary.rejected += 1,
            FileOutcome::Failed(_) => summary.failed += 1,
        }
    }
    let mut report = RunReport {
        summary,
        files,
        harmonization,
        audit_log: String::new(),
    };
    report.audit_log = render_audit(&report, &cfg.salt);

    if !cfg.dry_run {
        if let Some(p) = &cfg.uid_map {
            uids.save(p).map_err(|e| PipelineError::Io(format!("uid map: {e}")))?;
        }
        if let Some(dir) = cfg.audit_log.parent() {
            fs::create_dir_all(dir).map_err(|e| PipelineError::Io(format!("{}: {e}", dir.display())))?;
        }
        fs::write(&cfg.audit_log, &report.audit_log).map_err(|e| PipelineError::Io(format!("{}: {e}", cfg.audit_log.display())))?;
    }
    Ok(report)
}
