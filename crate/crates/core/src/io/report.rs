use std::fmt::Write;

use serde_json::{json, Map, Value};

use crate::verify::{scalar_text, StepResult, Summary};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "json" => Some(Format::Json),
            "text" => Some(Format::Text),
            _ => None,
        }
    }
}

/// Options that change what a report contains.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    /// Include wall-clock runtimes (makes reports nondeterministic).
    pub timings: bool,
}

fn step_json(r: &StepResult, opts: ReportOptions) -> Value {
    let diff: Vec<Value> = r
        .diff
        .iter()
        .map(|d| json!({"term": d.term, "computed": d.computed, "expected": d.expected}))
        .collect();
    let mut m = Map::new();
    m.insert("id".into(), json!(r.id));
    m.insert("kind".into(), json!(r.kind.as_str()));
    m.insert("status".into(), json!(r.status.as_str()));
    m.insert("scalar".into(), json!(r.scalar.as_ref().map(scalar_text)));
    m.insert("denominators".into(), json!(r.denominators));
    m.insert("multipliers".into(), json!(r.multipliers));
    m.insert("diff".into(), Value::Array(diff));
    m.insert("certificates".into(), json!(r.certificates));
    m.insert("certificates_ok".into(), json!(r.certificates_ok));
    m.insert("pipeline_status".into(), json!(r.pipeline_status.map(|s| s.as_str())));
    m.insert("notes".into(), json!(r.notes));
    m.insert("negative_control".into(), json!(r.negative_control));
    m.insert("extended".into(), json!(r.extended));
    m.insert("runtime_ms".into(), if opts.timings { json!(r.runtime_ms) } else { Value::Null });
    Value::Object(m)
}

fn summary_json(s: &Summary) -> Value {
    json!({
        "match": s.matched + s.matched_up_to_scalar,
        "match_exact": s.matched,
        "match_up_to_scalar": s.matched_up_to_scalar,
        "mismatch": s.mismatch,
        "degenerate": s.degenerate,
        "incomplete": s.incomplete,
        "skipped": s.skipped,
    })
}

fn sorted(results: &[StepResult]) -> Vec<&StepResult> {
    let mut v: Vec<&StepResult> = results.iter().collect();
    v.sort_by(|a, b| a.id.cmp(&b.id));
    v
}

pub fn report_json(results: &[StepResult], opts: ReportOptions) -> Value {
    let steps: Vec<Value> = sorted(results).into_iter().map(|r| step_json(r, opts)).collect();
    json!({"steps": steps, "summary": summary_json(&Summary::of(results))})
}

fn text_table(results: &[StepResult], opts: ReportOptions) -> String {
    let rows = sorted(results);
    let w = rows.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
    let mut out = String::new();
    let _ = writeln!(out, "{:<w$}  {:<18}  {:<12}  detail", "id", "status", "scalar");
    for r in rows {
        let scalar = r.scalar.as_ref().map(scalar_text).unwrap_or_else(|| "-".into());
        let mut detail: Vec<String> = Vec::new();
        if let Some(p) = r.pipeline_status {
            detail.push(format!("pipeline {}", p.as_str()));
        }
        if !r.denominators.is_empty() {
            detail.push(format!("nonzero: {}", r.denominators.join(", ")));
        }
        detail.extend(r.notes.iter().cloned());
        if opts.timings {
            detail.push(format!("{} ms", r.runtime_ms));
        }
        let _ = writeln!(out, "{:<w$}  {:<18}  {:<12}  {}", r.id, r.status.as_str(), scalar, detail.join("; "));
        for d in &r.diff {
            let _ = writeln!(out, "{:<w$}    {}: computed {} expected {}", "", d.term, d.computed, d.expected);
        }
    }
    let s = Summary::of(results);
    let _ = writeln!(
        out,
        "match {} (up to scalar {}), mismatch {}, degenerate {}, incomplete {}, skipped {}",
        s.matched + s.matched_up_to_scalar,
        s.matched_up_to_scalar,
        s.mismatch,
        s.degenerate,
        s.incomplete,
        s.skipped
    );
    out
}

pub fn emit_report(results: &[StepResult], format: Format, opts: ReportOptions) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report_json(results, opts)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => text_table(results, opts),
    }
}
