use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use deid_core::codec::{DataElement, DataSet, DicomObject, Value};
use deid_core::dictionary;
use deid_core::pipeline::{run, JobConfig, Overrides};
use deid_core::profile::UidMap;
use deid_core::score::{load_answer_key, score};

const EXIT_FAILURES: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "deid", version, about = "Batch DICOM deidentification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deidentify every file under the input directory.
    Run(RunArgs),
    /// Print the dataset of one file.
    Inspect {
        file: PathBuf,
        /// Longest value printed before truncation.
        #[arg(long, default_value_t = 64)]
        width: usize,
    },
    /// Score deidentified outputs against an answer key.
    Score(ScoreArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Job config file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Profile string such as basic+cleandesc+retainsafeprivate.
    #[arg(long)]
    profile: Option<String>,
    /// UID map file, loaded if present and saved after the run.
    #[arg(long)]
    uid_map: Option<PathBuf>,
    /// Name of the environment variable holding the salt.
    #[arg(long, value_name = "VAR")]
    salt_env: Option<String>,
    /// Process everything but write nothing.
    #[arg(long)]
    dry_run: bool,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ScoreArgs {
    /// Directory of deidentified files.
    #[arg(long)]
    outputs: PathBuf,
    /// Answer key CSV.
    #[arg(long)]
    key: PathBuf,
    /// UID map written by the run, to find outputs by original UID.
    #[arg(long)]
    uid_map: Option<PathBuf>,
    /// Also write the report as TSV here.
    #[arg(long)]
    tsv: Option<PathBuf>,
}

fn cmd_run(a: RunArgs) -> ExitCode {
    let ov = Overrides {
        input: a.input,
        output: a.output,
        profile: a.profile,
        uid_map: a.uid_map,
        salt_env: a.salt_env,
        jobs: a.jobs,
        dry_run: a.dry_run,
    };
    let cfg = match &a.config {
        Some(p) => JobConfig::load(p, &ov),
        None => JobConfig::from_overrides(&ov),
    };
    let result = cfg.and_then(|c| run(&c));
    match result {
        Ok(report) => {
            println!("{}", report.summary.render());
            for (rel, outcome) in &report.files {
                if let deid_core::pipeline::FileOutcome::Failed(why) = outcome {
                    eprintln!("failed: {}: {why}", rel.display());
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("deid: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn describe(e: &DataElement, ds: &DataSet, width: usize) -> String {
    match &e.value {
        Value::Sequence(s) => format!("<{} items>", s.items.len()),
        Value::Fragments(f) => format!("<{} fragments>", f.len().saturating_sub(1)),
        _ if e.vr.is_string() => {
            let s = e.to_str(ds.charset()).unwrap_or_else(|| "<undecodable>".into());
            let s = s.trim_end();
            if s.chars().count() > width {
                format!("{:?}...", s.chars().take(width).collect::<String>())
            } else {
                format!("{s:?}")
            }
        }
        Value::Bytes(b) => format!("<{} bytes>", b.len()),
        Value::Strings(v) => format!("{v:?}"),
    }
}

fn print_level(ds: &DataSet, depth: usize, width: usize) {
    let indent = "  ".repeat(depth);
    for e in ds.iter() {
        println!("{indent}{} {} {} {}", e.tag, e.vr, dictionary::keyword(e.tag), describe(e, ds, width));
        if let Some(items) = e.items() {
            for (i, item) in items.iter().enumerate() {
                println!("{indent}  item {i}");
                print_level(&item.dataset, depth + 2, width);
            }
        }
    }
}

fn cmd_inspect(file: &Path, width: usize) -> ExitCode {
    let obj = match fs::read(file).map_err(|e| e.to_string()).and_then(|b| DicomObject::parse(&b).map_err(|e| e.to_string())) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("deid: {}: {e}", file.display());
            return ExitCode::from(EXIT_FAILURES);
        }
    };
    println!("transfer syntax: {}", obj.transfer_syntax);
    println!("# file meta");
    print_level(&obj.file_meta, 0, width);
    println!("# dataset");
    print_level(&obj.dataset, 0, width);
    ExitCode::SUCCESS
}

fn cmd_score(a: ScoreArgs) -> ExitCode {
    let config = |m: String| {
        eprintln!("deid: {m}");
        ExitCode::from(EXIT_CONFIG)
    };
    let key = match fs::File::open(&a.key).map_err(|e| e.to_string()).and_then(|f| load_answer_key(f).map_err(|e| e.to_string())) {
        Ok(k) => k,
        Err(e) => return config(format!("{}: {e}", a.key.display())),
    };
    let uids = match &a.uid_map {
        None => None,
        Some(p) => {
            let m = UidMap::new(deid_core::pipeline::DEFAULT_UID_ROOT, b"").expect("default root is valid");
            if let Err(e) = m.load(p) {
                return config(format!("{}: {e}", p.display()));
            }
            Some(m)
        }
    };
    if !a.outputs.is_dir() {
        return config(format!("{} is not a directory", a.outputs.display()));
    }
    let report = match score(&a.outputs, &key, uids.as_ref()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("deid: {e}");
            return ExitCode::from(EXIT_FAILURES);
        }
    };
    print!("{}", report.render_table());
    if let Some(p) = &a.tsv {
        if let Err(e) = fs::write(p, report.render_tsv()) {
            eprintln!("deid: {}: {e}", p.display());
            return ExitCode::from(EXIT_FAILURES);
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Inspect { file, width } => cmd_inspect(&file, width),
        Command::Score(a) => cmd_score(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use deid_core::pipeline::PipelineError;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn no_salt_value_flag() {
        let err = Cli::try_parse_from(["deid", "run", "--salt", "x"]).err().unwrap();
        assert_eq!(err.kind(), clap::error::ErrorKind::UnknownArgument);
    }

    #[test]
    fn config_error_code() {
        assert_eq!(PipelineError::Config(String::new()).exit_code(), EXIT_CONFIG as i32);
    }
}
