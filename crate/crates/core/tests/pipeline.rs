mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use common::{dcm_files, job, job_toml, read_outputs, try_job_toml};
use deid_core::codec::{tags, DataElement, DataSet, DicomObject, Tag, VR};
use deid_core::harmonize::{find_inconsistencies, harmonize, plan_series, DEFAULT_TAGS};
use deid_core::pipeline::{run, FileOutcome, PipelineError};
use deid_core::synth::{scan_tree, SynthConfig, SynthCorpus, MR_IMAGE};
use proptest::prelude::*;
use tempfile::TempDir;

fn small() -> SynthCorpus {
    SynthCorpus::generate(&SynthConfig { series: 6, instances_per_series: 5, ..SynthConfig::default() })
}

fn tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    dcm_files(root)
        .into_iter()
        .map(|p| (p.strip_prefix(root).unwrap().display().to_string(), fs::read(&p).unwrap()))
        .collect()
}

fn distinct_per_series(corpus: &[DataSet], tag: Tag) -> BTreeMap<String, BTreeSet<Option<String>>> {
    let mut m: BTreeMap<String, BTreeSet<Option<String>>> = BTreeMap::new();
    for ds in corpus {
        m.entry(ds.string(tags::SERIES_INSTANCE_UID).unwrap_or_default()).or_default().insert(ds.string(tag));
    }
    m
}

#[test]
fn end_to_end_run() {
    let corpus = small();
    let dir = TempDir::new().unwrap();
    let (input, output) = (dir.path().join("in"), dir.path().join("out"));
    corpus.write_inputs(&input).unwrap();
    let map = dir.path().join("uids.tsv");
    let cfg = job_toml(&input, &output, &format!("profile = \"basic+cleandesc\"\nuid_map = {:?}\n", map.display().to_string()));
    let report = run(&cfg).unwrap();
    let s = report.summary;
    assert_eq!(s.files_in, corpus.instances.len());
    assert_eq!(s.files_in, s.processed + s.rejected + s.failed);
    assert_eq!((s.processed, s.failed), (corpus.instances.len(), 0));
    assert_eq!(s.series, corpus.series_uids.len());
    assert_eq!(report.exit_code(), 0);

    let outs = read_outputs(&output);
    assert_eq!(outs.len(), corpus.instances.len());
    for (rel, outcome) in &report.files {
        let FileOutcome::Written { output: out_rel, .. } = outcome else { panic!("{rel:?}: {outcome:?}") };
        assert_eq!(out_rel.parent(), rel.parent());
        let ds = DicomObject::parse(&fs::read(output.join(out_rel)).unwrap()).unwrap().dataset;
        assert_eq!(format!("{}.dcm", ds.string(tags::SOP_INSTANCE_UID).unwrap()), out_rel.file_name().unwrap().to_str().unwrap());
    }
    assert!(output.join("deid-audit.log").is_file());
    let saved = fs::read_to_string(&map).unwrap();
    assert!(saved.lines().count() >= corpus.instances.len());

    let hits = scan_tree(&output, &corpus.covered_tokens()).unwrap();
    assert!(hits.is_empty(), "{hits:?}");
    assert!(hits.iter().all(|h| !h.file.ends_with("deid-audit.log")));
}

#[test]
fn dry_run_writes_nothing() {
    let corpus = small();
    let dir = TempDir::new().unwrap();
    let (input, output) = (dir.path().join("in"), dir.path().join("out"));
    corpus.write_inputs(&input).unwrap();
    let mut cfg = job(&input, &output, "basic");
    cfg.dry_run = true;
    let report = run(&cfg).unwrap();
    assert_eq!(report.summary.processed, corpus.instances.len());
    assert!(!output.exists());
    assert!(!report.audit_log.is_empty());
}

#[test]
fn runs_are_deterministic() {
    let corpus = small();
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("in");
    corpus.write_inputs(&input).unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    run(&job(&input, &a, "basic+cleandesc")).unwrap();
    run(&job(&input, &b, "basic+cleandesc")).unwrap();
    assert_eq!(tree(&a), tree(&b));

    // A persisted map from an earlier run gives the same answer.
    let map = dir.path().join("map.tsv");
    let extra = format!("profile = \"basic+cleandesc\"\nuid_map = {:?}\n", map.display().to_string());
    run(&job_toml(&input, &dir.path().join("c"), &extra)).unwrap();
    run(&job_toml(&input, &dir.path().join("d"), &extra)).unwrap();
    assert_eq!(tree(&dir.path().join("c")), tree(&a));
    assert_eq!(tree(&dir.path().join("d")), tree(&a));
}

#[test]
fn series_are_harmonized() {
    let corpus = small();
    assert!(!corpus.corrupted.is_empty());
    let dir = TempDir::new().unwrap();
    let (input, output) = (dir.path().join("in"), dir.path().join("out"));
    corpus.write_inputs(&input).unwrap();
    let before: Vec<DataSet> = corpus.instances.iter().map(|i| i.object.dataset.clone()).collect();
    assert!(!find_inconsistencies(&before, &DEFAULT_TAGS).is_empty());
    let report = run(&job(&input, &output, "basic+cleandesc")).unwrap();
    assert!(report.summary.harmonized_rewrites >= corpus.corrupted.len());
    let after = read_outputs(&output);
    for tag in DEFAULT_TAGS {
        for (series, values) in distinct_per_series(&after, tag) {
            assert_eq!(values.len(), 1, "{series} {tag}: {values:?}");
        }
    }
    assert!(find_inconsistencies(&after, &DEFAULT_TAGS).is_empty());
}

#[test]
fn harmonization_touches_only_listed_tags() {
    let corpus = small();
    let series = &corpus.corrupted[0].series_uid;
    let mut members: Vec<DataSet> = corpus
        .instances
        .iter()
        .map(|i| i.object.dataset.clone())
        .filter(|d| d.string(tags::SERIES_INSTANCE_UID).as_deref() == Some(series))
        .collect();
    let before = members.clone();
    let report = harmonize(series, &mut members, &DEFAULT_TAGS);
    assert!(report.total_rewrites() > 0);
    for (a, b) in before.iter().zip(&members) {
        for e in a.iter().filter(|e| !DEFAULT_TAGS.contains(&e.tag)) {
            assert_eq!(Some(e), b.get(e.tag));
        }
    }
    let again = harmonize(series, &mut members, &DEFAULT_TAGS);
    assert_eq!(again.total_rewrites(), 0);
}

fn member(series: &str, inst: usize, desc: &str) -> DataSet {
    let mut ds = DataSet::new();
    ds.insert(DataElement::string(tags::SERIES_INSTANCE_UID, VR::UI, series));
    ds.insert(DataElement::string(tags::INSTANCE_NUMBER, VR::IS, inst.to_string()));
    ds.insert(DataElement::string(tags::SERIES_DESCRIPTION, VR::LO, desc));
    ds
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn majority_ignores_order(descs in proptest::collection::vec(0usize..3, 1..12), seed in any::<u64>()) {
        let names = ["AX T1", "AX T2", "COR"];
        let members: Vec<DataSet> = descs.iter().enumerate().map(|(i, &d)| member("1.2.3", i + 1, names[d])).collect();
        let refs: Vec<&DataSet> = members.iter().collect();
        let mut shuffled = refs.clone();
        let n = shuffled.len();
        for i in 0..n {
            let j = (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64) % n as u64) as usize;
            shuffled.swap(i, j);
        }
        let a = plan_series("1.2.3", &refs, &DEFAULT_TAGS);
        let b = plan_series("1.2.3", &shuffled, &DEFAULT_TAGS);
        let canon = |p: &deid_core::harmonize::SeriesPlan| p.decisions.iter().map(|d| d.canonical_value().map(|v| v.to_vec())).collect::<Vec<_>>();
        prop_assert_eq!(canon(&a), canon(&b));
    }
}

#[test]
fn config_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("in");
    fs::create_dir_all(&input).unwrap();
    let nested = try_job_toml(&input, &input.join("out"), "").unwrap_err();
    assert_eq!(nested.exit_code(), 2);
    let bad_profile = try_job_toml(&input, &dir.path().join("out"), "profile = \"basic+nonsense\"\n").unwrap_err();
    assert!(matches!(bad_profile, PipelineError::Config(_)));
    let no_salt = deid_core::pipeline::JobConfig::from_toml(
        &format!("input = {:?}\noutput = {:?}\nsalt_env = \"UNSET_VAR\"\n", input.display().to_string(), dir.path().join("o").display().to_string()),
        Path::new("/"),
        &Default::default(),
        &|_| None,
    )
    .unwrap_err();
    assert_eq!(no_salt.exit_code(), 2);
    let missing = run(&job(&dir.path().join("absent"), &dir.path().join("out"), "basic")).unwrap_err();
    assert_eq!(missing.exit_code(), 2);
}

#[test]
fn failures_follow_policy() {
    let corpus = small();
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("in");
    corpus.write_inputs(&input).unwrap();
    fs::write(input.join(corpus.instances[0].rel_path.parent().unwrap()).join("broken.dcm"), b"not a dicom file").unwrap();

    let report = run(&job(&input, &dir.path().join("halt"), "basic")).unwrap();
    assert_eq!(report.exit_code(), 1);
    assert_eq!(report.summary.processed, 0);
    assert_eq!(report.summary.failed, report.summary.files_in);

    let skip = run(&job_toml(&input, &dir.path().join("skip"), "failure_policy = \"skip\"\n")).unwrap();
    assert_eq!(skip.exit_code(), 1);
    assert_eq!(skip.summary.failed, 1);
    assert_eq!(skip.summary.processed, corpus.instances.len());
    assert_eq!(dcm_files(&dir.path().join("skip")).len(), corpus.instances.len());
}

#[test]
fn sop_class_filter_rejects() {
    let corpus = small();
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("in");
    corpus.write_inputs(&input).unwrap();
    let mr = corpus.instances.iter().filter(|i| i.object.sop_class_uid().as_deref() == Some(MR_IMAGE)).count();
    assert!(mr > 0);
    let report = run(&job_toml(&input, &dir.path().join("out"), &format!("sop_class_deny = [{MR_IMAGE:?}]\n"))).unwrap();
    assert_eq!(report.summary.rejected, mr);
    assert_eq!(report.summary.processed + mr, corpus.instances.len());
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn masks_change_only_their_rectangle() {
    let corpus = SynthCorpus::generate(&SynthConfig { series: 1, instances_per_series: 2, ..SynthConfig::default() });
    let dir = TempDir::new().unwrap();
    let (input, output) = (dir.path().join("in"), dir.path().join("out"));
    corpus.write_inputs(&input).unwrap();
    let extra = "[[pixel_mask]]\nrectangles = [[1, 2, 3, 2]]\nfill = 4095\n";
    run(&job_toml(&input, &output, extra)).unwrap();
    let outs = read_outputs(&output);
    for inst in &corpus.instances {
        let number = inst.object.dataset.string(tags::INSTANCE_NUMBER);
        let out = outs.iter().find(|d| d.string(tags::INSTANCE_NUMBER) == number).unwrap();
        let cols = inst.object.dataset.int(tags::COLUMNS).unwrap() as usize;
        let px = |d: &DataSet| d.get(tags::PIXEL_DATA).unwrap().raw_value(d.charset()).unwrap().into_owned();
        let (a, b) = (px(&inst.object.dataset), px(out));
        for i in 0..a.len() / 2 {
            let (x, y) = (i % cols, i / cols);
            let inside = (1..4).contains(&x) && (2..4).contains(&y);
            let v = u16::from_le_bytes([b[2 * i], b[2 * i + 1]]);
            if inside {
                assert_eq!(v, 4095);
            } else {
                assert_eq!(&a[2 * i..2 * i + 2], &b[2 * i..2 * i + 2], "pixel {x},{y}");
            }
        }
    }
}
