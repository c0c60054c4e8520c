use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use biharm_verify::io::report::{emit_report, Format, ReportOptions};
use biharm_verify::verify::run_all;
use biharm_verify::{Corpus, RunConfig, Status, StepResult};
use clap::{ArgGroup, Parser, ValueEnum};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INCOMPLETE: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

/// Re-run the registered derivation steps and compare them with the transcribed corpus.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
#[command(group(ArgGroup::new("select").args(["all", "step", "filter", "list"])))]
struct Args {
    /// Run every registered step.
    #[arg(long)]
    all: bool,
    /// Run a single step by id.
    #[arg(long, value_name = "ID")]
    step: Option<String>,
    /// Run the steps whose id matches a glob pattern.
    #[arg(long, value_name = "GLOB")]
    filter: Option<String>,
    /// Print the step ids with their anchors and exit.
    #[arg(long)]
    list: bool,
    /// Corpus directory (defaults to the built-in corpus).
    #[arg(long, value_name = "DIR")]
    corpus: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    report: ReportFormat,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Seconds allowed per algebra stage.
    #[arg(long, value_name = "S", default_value_t = 120, value_parser = clap::value_parser!(u64).range(1..))]
    time_limit: u64,
    /// Largest polynomial allowed, in terms.
    #[arg(long, value_name = "N", default_value_t = 2_000_000, value_parser = clap::value_parser!(u64).range(1000..))]
    term_cap: u64,
    /// Also run steps marked extended.
    #[arg(long)]
    include_extended: bool,
    #[arg(long, value_name = "N", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Include runtimes in the report.
    #[arg(long)]
    timings: bool,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("verify: {msg}");
    ExitCode::from(EXIT_INPUT)
}

fn exit_code(results: &[StepResult]) -> u8 {
    if results.iter().any(StepResult::is_failure) {
        EXIT_MISMATCH
    } else if results.iter().any(|r| r.status == Status::Incomplete && !r.extended) {
        EXIT_INCOMPLETE
    } else {
        0
    }
}

fn list(corpus: &Corpus) -> String {
    let w = corpus.steps.iter().map(|s| s.id.len()).max().unwrap_or(0);
    let mut out = String::new();
    for s in &corpus.steps {
        let anchor = if s.anchor.is_empty() { "-" } else { s.anchor.as_str() };
        out.push_str(&format!("{:<w$}  {:<27}  {}\n", s.id, s.kind.as_str(), anchor));
    }
    out
}

fn write_out(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| format!("cannot write report: {e}"))
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let corpus = match &args.corpus {
        Some(dir) => Corpus::load_dir(dir),
        None => Corpus::embedded(),
    };
    let corpus = match corpus {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    if args.list {
        return match write_out(&list(&corpus), args.out.as_ref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        };
    }
    if !(args.all || args.step.is_some() || args.filter.is_some()) {
        return fail("nothing selected; use --all, --step, --filter or --list");
    }
    if let Some(id) = &args.step {
        if corpus.step(id).is_none() {
            return fail(format!("no step with id {id}"));
        }
    }
    if let Some(f) = &args.filter {
        if let Err(e) = glob::Pattern::new(f) {
            return fail(format!("bad filter {f}: {e}"));
        }
    }
    let config = RunConfig {
        filter: args.filter.clone(),
        step: args.step.clone(),
        include_extended: args.include_extended,
        time_limit: args.time_limit,
        term_cap: args.term_cap as usize,
        jobs: args.jobs as usize,
    };
    let results = run_all(&corpus, &config);
    let format = match args.report {
        ReportFormat::Json => Format::Json,
        ReportFormat::Text => Format::Text,
    };
    let text = emit_report(&results, format, ReportOptions { timings: args.timings });
    if let Err(e) = write_out(&text, args.out.as_ref()) {
        return fail(e);
    }
    ExitCode::from(exit_code(&results))
}
