use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::{MaskSelector, PipelineError, PixelMaskSpec, Rect, SopClassPolicy};
use crate::codec::Tag;
use crate::harmonize::DEFAULT_TAGS;
use crate::profile::{DateShift, ProfileOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FailurePolicy {
    /// Stop at the first failed file.
    #[default]
    Halt,
    /// Log the failure and continue.
    Skip,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    input: Option<PathBuf>,
    output: Option<PathBuf>,
    profile: Option<String>,
    action_table: Option<PathBuf>,
    safe_private_kb: Option<PathBuf>,
    multiplex_policy: Option<PathBuf>,
    text_rules: Option<PathBuf>,
    uid_map: Option<PathBuf>,
    uid_root: Option<String>,
    salt_env: Option<String>,
    date_shift_days: Option<i64>,
    date_shift_max_days: Option<u32>,
    failure_policy: Option<FailurePolicy>,
    jobs: Option<usize>,
    sop_class_allow: Option<Vec<String>>,
    sop_class_deny: Option<Vec<String>>,
    harmonize_tags: Option<Vec<String>>,
    extra_tokens: Option<Vec<String>>,
    address_gazetteer: Option<bool>,
    disabled_triggers: Option<Vec<String>>,
    enabled_triggers: Option<Vec<String>>,
    audit_log: Option<PathBuf>,
    #[serde(default)]
    pixel_mask: Vec<RawMask>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMask {
    sop_class: Option<String>,
    series_uid: Option<String>,
    rectangles: Vec<[u32; 4]>,
    #[serde(default)]
    fill: u16,
}

/// Command line values that replace config keys.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub profile: Option<String>,
    pub uid_map: Option<PathBuf>,
    pub salt_env: Option<String>,
    pub jobs: Option<usize>,
    pub dry_run: bool,
}

pub const DEFAULT_UID_ROOT: &str = "2.25";
pub const DEFAULT_SALT_ENV: &str = "DEID_SALT";
pub const AUDIT_LOG_NAME: &str = "deid-audit.log";

/// A validated job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub input: PathBuf,
    pub output: PathBuf,
    pub options: ProfileOptions,
    pub action_table: Option<PathBuf>,
    pub safe_private_kb: Option<PathBuf>,
    pub multiplex_policy: Option<PathBuf>,
    pub text_rules: Option<PathBuf>,
    pub uid_map: Option<PathBuf>,
    pub uid_root: String,
    pub salt: Vec<u8>,
    pub sop_classes: SopClassPolicy,
    pub harmonize_tags: Vec<Tag>,
    pub extra_tokens: Vec<String>,
    pub address_gazetteer: bool,
    pub disabled_triggers: Vec<String>,
    pub enabled_triggers: Vec<String>,
    pub masks: Vec<PixelMaskSpec>,
    pub failure_policy: FailurePolicy,
    pub jobs: usize,
    pub audit_log: PathBuf,
    pub dry_run: bool,
}

fn resolve(base: &Path, p: PathBuf) -> PathBuf {
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

fn absolute(p: &Path) -> PathBuf {
    fs::canonicalize(p).unwrap_or_else(|_| std::path::absolute(p).unwrap_or_else(|_| p.to_path_buf()))
}

impl JobConfig {
    /// Reads a config file. Relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path, overrides: &Overrides) -> Result<JobConfig, PipelineError> {
        let text = fs::read_to_string(path).map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        JobConfig::from_toml(&text, base, overrides, &|k| std::env::var(k).ok())
    }

    /// Builds a job from overrides alone, as when no config file is given.
    pub fn from_overrides(overrides: &Overrides) -> Result<JobConfig, PipelineError> {
        JobConfig::from_toml("", Path::new("."), overrides, &|k| std::env::var(k).ok())
    }

    pub fn from_toml(text: &str, base: &Path, ov: &Overrides, env: &dyn Fn(&str) -> Option<String>) -> Result<JobConfig, PipelineError> {
        let cfg = |m: String| PipelineError::Config(m);
        let raw: RawConfig = toml::from_str(text).map_err(|e| cfg(e.to_string()))?;
        let path = |p: Option<PathBuf>| p.map(|p| resolve(base, p));

        let input = ov.input.clone().or(path(raw.input)).ok_or_else(|| cfg("input is required".into()))?;
        let output = ov.output.clone().or(path(raw.output)).ok_or_else(|| cfg("output is required".into()))?;
        let (ai, ao) = (absolute(&input), absolute(&output));
        if ai == ao || ao.starts_with(&ai) || ai.starts_with(&ao) {
            return Err(cfg(format!("input {} and output {} must be separate trees", input.display(), output.display())));
        }

        let profile = ov.profile.clone().or(raw.profile).unwrap_or_else(|| "basic".into());
        let mut options: ProfileOptions = profile.parse().map_err(|e| cfg(format!("profile: {e}")))?;
        options.date_shift = match (raw.date_shift_days, raw.date_shift_max_days) {
            (Some(_), Some(_)) => return Err(cfg("date_shift_days and date_shift_max_days are exclusive".into())),
            (Some(d), None) => DateShift::Fixed(d),
            (None, Some(0)) => return Err(cfg("date_shift_max_days must be positive".into())),
            (None, Some(m)) => DateShift::PerPatient { max_days: m },
            (None, None) => DateShift::default(),
        };

        let sop_classes = match (raw.sop_class_allow, raw.sop_class_deny) {
            (Some(_), Some(_)) => return Err(cfg("only one of sop_class_allow and sop_class_deny may be given".into())),
            (Some(a), None) => SopClassPolicy::Allow(a.into_iter().collect::<BTreeSet<_>>()),
            (None, d) => SopClassPolicy::Deny(d.unwrap_or_default().into_iter().collect()),
        };

        let harmonize_tags = match raw.harmonize_tags {
            None => DEFAULT_TAGS.to_vec(),
            Some(list) => list
                .iter()
                .map(|s| s.parse::<Tag>().map_err(|e| cfg(format!("harmonize_tags: {e}"))))
                .collect::<Result<_, _>>()?,
        };

        let masks = raw
            .pixel_mask
            .into_iter()
            .map(|m| {
                let selector = match (m.sop_class, m.series_uid) {
                    (Some(_), Some(_)) => return Err(cfg("pixel_mask takes one selector".into())),
                    (Some(c), None) => MaskSelector::SopClass(c),
                    (None, Some(s)) => MaskSelector::Series(s),
                    (None, None) => MaskSelector::All,
                };
                let rects = m.rectangles.iter().map(|&[x, y, width, height]| Rect { x, y, width, height }).collect();
                Ok(PixelMaskSpec { selector, rects, fill: m.fill })
            })
            .collect::<Result<Vec<_>, _>>()?;

        let salt_env = ov.salt_env.clone().or(raw.salt_env).unwrap_or_else(|| DEFAULT_SALT_ENV.into());
        let salt = env(&salt_env).unwrap_or_default().into_bytes();
        let hashing = !options.retain_uids || (options.retain_modified_dates && matches!(options.date_shift, DateShift::PerPatient { .. }));
        if hashing && salt.is_empty() {
            return Err(cfg(format!("environment variable {salt_env} must hold a non-empty salt")));
        }

        let jobs = ov.jobs.or(raw.jobs).unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if jobs == 0 {
            return Err(cfg("jobs must be at least 1".into()));
        }
        let audit_log = path(raw.audit_log).unwrap_or_else(|| output.join(AUDIT_LOG_NAME));

        Ok(JobConfig {
            input,
            output,
            options,
            action_table: path(raw.action_table),
            safe_private_kb: path(raw.safe_private_kb),
            multiplex_policy: path(raw.multiplex_policy),
            text_rules: path(raw.text_rules),
            uid_map: ov.uid_map.clone().or(path(raw.uid_map)),
            uid_root: raw.uid_root.unwrap_or_else(|| DEFAULT_UID_ROOT.into()),
            salt,
            sop_classes,
            harmonize_tags,
            extra_tokens: raw.extra_tokens.unwrap_or_default(),
            address_gazetteer: raw.address_gazetteer.unwrap_or(false),
            disabled_triggers: raw.disabled_triggers.unwrap_or_default(),
            enabled_triggers: raw.enabled_triggers.unwrap_or_default(),
            masks,
            failure_policy: raw.failure_policy.unwrap_or_default(),
            jobs,
            audit_log,
            dry_run: ov.dry_run,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(k: &str) -> Option<String> {
        (k == "TEST_SALT").then(|| "pepper".into())
    }

    const BASE: &str = r#"
input = "in"
output = "out"
salt_env = "TEST_SALT"
"#;

    fn parse(extra: &str) -> Result<JobConfig, PipelineError> {
        JobConfig::from_toml(&format!("{BASE}{extra}"), Path::new("/data"), &Overrides::default(), &env)
    }

    #[test]
    fn full_config() {
        let c = parse(
            r#"
profile = "basic+cleandesc+retainsafeprivate"
safe_private_kb = "kb.csv"
sop_class_allow = ["1.2.840.10008.5.1.4.1.1.2"]
harmonize_tags = ["(0008,103E)", "(0020,0011)", "(0018,0015)"]
date_shift_days = -30
failure_policy = "skip"
jobs = 3

[[pixel_mask]]
sop_class = "1.2.840.10008.5.1.4.1.1.7"
rectangles = [[0, 0, 10, 10], [20, 0, 5, 5]]
fill = 0
"#,
        )
        .unwrap();
        assert_eq!(c.input, PathBuf::from("/data/in"));
        assert_eq!(c.safe_private_kb, Some(PathBuf::from("/data/kb.csv")));
        assert!(c.options.clean_descriptors && c.options.retain_safe_private);
        assert_eq!(c.options.date_shift, DateShift::Fixed(-30));
        assert_eq!(c.harmonize_tags.len(), 3);
        assert_eq!(c.masks[0].rects.len(), 2);
        assert_eq!(c.failure_policy, FailurePolicy::Skip);
        assert_eq!(c.salt, b"pepper");
        assert_eq!(c.audit_log, PathBuf::from("/data/out").join(AUDIT_LOG_NAME));
    }

    #[test]
    fn overrides_win() {
        let ov = Overrides {
            output: Some("/elsewhere".into()),
            profile: Some("basic+retainuids".into()),
            jobs: Some(1),
            ..Overrides::default()
        };
        let c = JobConfig::from_toml(BASE, Path::new("/data"), &ov, &env).unwrap();
        assert_eq!(c.output, PathBuf::from("/elsewhere"));
        assert!(c.options.retain_uids);
        assert_eq!(c.jobs, 1);
    }

    #[test]
    fn invalid_configs() {
        for bad in [
            "sop_class_allow = [\"1\"]\nsop_class_deny = [\"2\"]\n",
            "profile = \"basic+retainfulldates+retainmodifieddates\"\n",
            "bogus_key = 1\n",
            "jobs = 0\n",
            "harmonize_tags = [\"0008\"]\n",
        ] {
            assert!(matches!(parse(bad), Err(PipelineError::Config(_))), "{bad}");
        }
        let same = "input = \"x\"\noutput = \"x\"\nsalt_env = \"TEST_SALT\"\n";
        assert!(JobConfig::from_toml(same, Path::new("/d"), &Overrides::default(), &env).is_err());
        let nested = "input = \"x\"\noutput = \"x/out\"\nsalt_env = \"TEST_SALT\"\n";
        assert!(JobConfig::from_toml(nested, Path::new("/d"), &Overrides::default(), &env).is_err());
        let nosalt = "input = \"a\"\noutput = \"b\"\nsalt_env = \"UNSET_VAR\"\n";
        assert!(JobConfig::from_toml(nosalt, Path::new("/d"), &Overrides::default(), &env).is_err());
        let retain = "input = \"a\"\noutput = \"b\"\nsalt_env = \"UNSET_VAR\"\nprofile = \"basic+retainuids\"\n";
        assert!(JobConfig::from_toml(retain, Path::new("/d"), &Overrides::default(), &env).is_ok());
    }
}
