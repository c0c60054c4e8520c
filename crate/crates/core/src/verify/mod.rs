//! Step registry execution.

pub mod compare;
pub mod recipe;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rayon::prelude::*;

use crate::budget::{Budget, DEFAULT_STAGE_SECONDS, DEFAULT_TERM_CAP};
use crate::diff::RatFunc;
use crate::error::AlgebraError;
use crate::io::corpus::Corpus;
use crate::io::parser::{self, Expr};
use crate::poly::{BigRat, Poly};
use crate::realroots::{self, UniPoly};
use compare::{DiffTerm, Outcome};
use recipe::{Ctx, EvalError, Ledger, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    IdentityZero,
    DeriveCompare,
    EliminateCompare,
    SubstituteCompare,
    CollectCoeffsCompare,
    ProductCompare,
    ExpandCompare,
    RealRootCheck,
    SuccessiveEliminateCheck,
}

impl StepKind {
    pub fn parse(s: &str) -> Option<StepKind> {
        Some(match s {
            "identity_zero" => StepKind::IdentityZero,
            "derive_compare" => StepKind::DeriveCompare,
            "eliminate_compare" => StepKind::EliminateCompare,
            "substitute_compare" => StepKind::SubstituteCompare,
            "collect_coeffs_compare" => StepKind::CollectCoeffsCompare,
            "product_compare" => StepKind::ProductCompare,
            "expand_compare" => StepKind::ExpandCompare,
            "real_root_check" => StepKind::RealRootCheck,
            "successive_eliminate_check" => StepKind::SuccessiveEliminateCheck,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::IdentityZero => "identity_zero",
            StepKind::DeriveCompare => "derive_compare",
            StepKind::EliminateCompare => "eliminate_compare",
            StepKind::SubstituteCompare => "substitute_compare",
            StepKind::CollectCoeffsCompare => "collect_coeffs_compare",
            StepKind::ProductCompare => "product_compare",
            StepKind::ExpandCompare => "expand_compare",
            StepKind::RealRootCheck => "real_root_check",
            StepKind::SuccessiveEliminateCheck => "successive_eliminate_check",
        }
    }

    /// Kinds whose zero output means the elimination lost all information.
    fn eliminates(self) -> bool {
        matches!(
            self,
            StepKind::EliminateCompare | StepKind::SubstituteCompare | StepKind::SuccessiveEliminateCheck
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareMode {
    Exact,
    UpToScalar,
}

impl CompareMode {
    pub fn parse(s: &str) -> Option<CompareMode> {
        match s {
            "exact" => Some(CompareMode::Exact),
            "up_to_scalar" => Some(CompareMode::UpToScalar),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepOptions {
    /// Excluded from default runs.
    pub extended: bool,
    /// Expected to come out DEGENERATE.
    pub negative_control: bool,
    pub time_limit: Option<u64>,
    pub term_cap: Option<usize>,
    /// Expected number of distinct real roots for `real_root_check`.
    pub roots: usize,
}

#[derive(Debug, Clone)]
pub struct Step {
    pub id: String,
    pub kind: StepKind,
    pub inputs: Expr,
    pub inputs_text: String,
    pub expected: Option<Expr>,
    pub expected_text: String,
    pub mode: CompareMode,
    pub rules: Option<String>,
    pub options: StepOptions,
    pub anchor: String,
}

impl Step {
    pub(crate) fn check_shape(&self) -> Result<(), String> {
        match self.kind {
            StepKind::IdentityZero => match &self.expected {
                None => Ok(()),
                Some(e) if parser::is_zero_int(e) => Ok(()),
                Some(_) => Err("identity_zero steps take no expected value".into()),
            },
            StepKind::RealRootCheck | StepKind::SuccessiveEliminateCheck => Ok(()),
            _ if self.expected.is_none() && !self.options.negative_control => {
                Err(format!("{} needs an expected value", self.kind.as_str()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Match,
    MatchUpToScalar,
    Mismatch,
    Degenerate,
    Incomplete,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Match => "MATCH",
            Status::MatchUpToScalar => "MATCH_UP_TO_SCALAR",
            Status::Mismatch => "MISMATCH",
            Status::Degenerate => "DEGENERATE",
            Status::Incomplete => "INCOMPLETE",
            Status::Skipped => "SKIPPED",
        }
    }

    pub fn is_match(self) -> bool {
        matches!(self, Status::Match | Status::MatchUpToScalar)
    }
}

#[derive(Debug, Clone)]
pub struct StepResult {
    pub id: String,
    pub kind: StepKind,
    pub status: Status,
    pub scalar: Option<BigRat>,
    /// Rendered denominators and ratio factors relied on as nonzero.
    pub denominators: Vec<String>,
    /// Whether every ledgered denominator is a product of declared
    /// nonvanishing factors.
    pub ledger_ok: bool,
    pub multipliers: Vec<String>,
    pub diff: Vec<DiffTerm>,
    pub certificates: usize,
    pub certificates_ok: bool,
    /// Status when upstream recomputed values replace mismatching
    /// transcriptions; absent when no upstream step mismatched.
    pub pipeline_status: Option<Status>,
    pub notes: Vec<String>,
    pub negative_control: bool,
    pub extended: bool,
    pub runtime_ms: u64,
    /// Recomputed value, kept for downstream pipeline runs.
    pub value: Option<Value>,
}

impl StepResult {
    fn bare(step: &Step, status: Status) -> Self {
        StepResult {
            id: step.id.clone(),
            kind: step.kind,
            status,
            scalar: None,
            denominators: Vec::new(),
            ledger_ok: true,
            multipliers: Vec::new(),
            diff: Vec::new(),
            certificates: 0,
            certificates_ok: true,
            pipeline_status: None,
            notes: Vec::new(),
            negative_control: step.options.negative_control,
            extended: step.options.extended,
            runtime_ms: 0,
            value: None,
        }
    }

    /// True when this result should fail a CI run.
    pub fn is_failure(&self) -> bool {
        match self.status {
            Status::Mismatch => true,
            Status::Degenerate => !self.negative_control,
            _ => self.negative_control && self.status != Status::Degenerate && self.status != Status::Skipped,
        }
    }
}

/// Resource and selection settings of a run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub filter: Option<String>,
    pub step: Option<String>,
    pub include_extended: bool,
    pub time_limit: u64,
    pub term_cap: usize,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            filter: None,
            step: None,
            include_extended: false,
            time_limit: DEFAULT_STAGE_SECONDS,
            term_cap: DEFAULT_TERM_CAP,
            jobs: 1,
        }
    }
}

impl RunConfig {
    fn budget_for(&self, step: &Step) -> Budget {
        let secs = step.options.time_limit.unwrap_or(self.time_limit);
        let cap = step.options.term_cap.unwrap_or(self.term_cap);
        let budget = Budget::new(cap, Some(Duration::from_secs(secs)));
        // a per-step time option also bounds the step as a whole
        match step.options.time_limit {
            Some(total) => budget.with_total_limit(Duration::from_secs(total)),
            None => budget,
        }
    }

    fn selects(&self, step: &Step) -> bool {
        if let Some(id) = &self.step {
            return &step.id == id;
        }
        match &self.filter {
            Some(f) => glob::Pattern::new(f).map(|p| p.matches(&step.id)).unwrap_or(false),
            None => true,
        }
    }
}

fn render_factor(p: &Poly, k: i32, corpus: &Corpus) -> String {
    let base = p.render(&corpus.table);
    let base = if p.len() > 1 { format!("({base})") } else { base };
    match k {
        1 => base,
        -1 => format!("1/{base}"),
        k if k > 0 => format!("{base}^{k}"),
        k => format!("1/{base}^{}", -k),
    }
}

type Evaluated = (Result<(Value, Option<Value>), EvalError>, Ledger, Budget);

fn evaluate(
    step: &Step,
    corpus: &Corpus,
    overrides: &HashMap<String, RatFunc>,
    budget: Budget,
) -> Evaluated {
    let rules = step.rules.as_ref().and_then(|r| corpus.rules.get(r));
    let mut ctx = Ctx::new(corpus, overrides, rules, budget);
    let res = ctx.eval(&step.inputs).and_then(|v| {
        let e = match &step.expected {
            Some(e) => Some(ctx.eval(e)?),
            None => None,
        };
        Ok((v, e))
    });
    (res, ctx.ledger, ctx.budget)
}

/// Divides out every power of the declared factors that divides `p`.
fn strip_factors(p: &Poly, factors: &[Poly], budget: &Budget) -> (Poly, Vec<(Poly, u32)>) {
    let mut rest = p.clone();
    let mut removed = Vec::new();
    for f in factors.iter().filter(|f| !f.is_constant()) {
        let mut k = 0;
        while let Ok(q) = rest.div_exact_with(f, budget) {
            rest = q;
            k += 1;
        }
        if k > 0 {
            removed.push((f.clone(), k));
        }
    }
    (rest, removed)
}

/// Runs one step against the corpus, optionally with recomputed upstream
/// values substituted for some equations.
pub fn run_step_with(
    step: &Step,
    corpus: &Corpus,
    config: &RunConfig,
    overrides: &HashMap<String, RatFunc>,
) -> StepResult {
    let start = Instant::now();
    let mut out = StepResult::bare(step, Status::Match);
    let (res, ledger, budget) = evaluate(step, corpus, overrides, config.budget_for(step));
    let nonvanishing = corpus.nonvanishing_for(&step.id);
    out.notes.extend(ledger.notes.iter().cloned());
    let (computed, expected) = match res {
        Ok(v) => v,
        Err(EvalError::Algebra(e)) if e.is_resource() => {
            out.status = Status::Incomplete;
            out.notes.push(e.describe(&corpus.table));
            out.runtime_ms = start.elapsed().as_millis() as u64;
            return out;
        }
        Err(e) => {
            out.status = Status::Mismatch;
            out.notes.push(match e {
                EvalError::Algebra(a) => a.describe(&corpus.table),
                other => other.to_string(),
            });
            out.runtime_ms = start.elapsed().as_millis() as u64;
            return out;
        }
    };
    let outcome = judge(step, corpus, &computed, expected.as_ref(), &nonvanishing, &ledger, &budget);
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) if e.is_resource() => {
            out.status = Status::Incomplete;
            out.notes.push(e.describe(&corpus.table));
            out.runtime_ms = start.elapsed().as_millis() as u64;
            return out;
        }
        Err(e) => Outcome {
            status: Status::Mismatch,
            scalar: None,
            factors: Vec::new(),
            diff: Vec::new(),
            note: Some(e.describe(&corpus.table)),
        },
    };
    out.status = outcome.status;
    out.scalar = outcome.scalar;
    out.diff = outcome.diff;
    out.notes.extend(outcome.note);

    let mut licensed = true;
    let mut shown = Vec::new();
    for d in &ledger.denominators {
        match compare::split_over(d, &nonvanishing, &budget) {
            Some((_, used)) => {
                let parts: Vec<String> = used.iter().map(|(f, k)| render_factor(f, *k as i32, corpus)).collect();
                shown.push(parts.join("*"));
            }
            None => {
                licensed = false;
                shown.push(d.render(&corpus.table));
                out.notes.push(format!("denominator {} is not a product of declared nonvanishing factors", d.render(&corpus.table)));
            }
        }
    }
    shown.extend(outcome.factors.iter().map(|(f, k)| render_factor(f, *k, corpus)));
    for s in shown {
        if !out.denominators.contains(&s) {
            out.denominators.push(s);
        }
    }
    out.ledger_ok = licensed;
    out.multipliers = ledger.multipliers.iter().map(|m| m.render(&corpus.table)).collect();

    out.certificates = ledger.certificates.len();
    let replay = Budget::new(budget.max_terms, budget.stage_limit);
    for c in &ledger.certificates {
        match c.replay(&replay) {
            Ok(true) => {}
            Ok(false) => {
                out.certificates_ok = false;
                out.notes.push("certificate replay failed".into());
            }
            Err(e) => {
                out.certificates_ok = false;
                out.notes.push(format!("certificate replay aborted: {}", e.describe(&corpus.table)));
            }
        }
    }
    if (!licensed || !out.certificates_ok) && out.status.is_match() {
        out.status = Status::Mismatch;
    }
    out.value = Some(computed);
    out.runtime_ms = start.elapsed().as_millis() as u64;
    out
}

fn judge(
    step: &Step,
    corpus: &Corpus,
    computed: &Value,
    expected: Option<&Value>,
    nonvanishing: &[Poly],
    ledger: &Ledger,
    budget: &Budget,
) -> Result<Outcome, AlgebraError> {
    let table = &corpus.table;
    let plain = |status, note: Option<String>| Outcome {
        status,
        scalar: None,
        factors: Vec::new(),
        diff: Vec::new(),
        note,
    };
    match step.kind {
        StepKind::IdentityZero => {
            if computed.is_zero() {
                return Ok(plain(Status::Match, None));
            }
            let zero = match computed {
                Value::Rat(_) => Value::Rat(RatFunc::zero()),
                Value::List(v) => Value::List(vec![Value::Rat(RatFunc::zero()); v.len()]),
            };
            let mut o = compare::compare(computed, &zero, step.mode, nonvanishing, table, budget)?;
            o.status = Status::Mismatch;
            o.note = Some("expression does not vanish identically".into());
            Ok(o)
        }
        StepKind::RealRootCheck => {
            let full = match computed.as_rat() {
                Ok(r) => r.num().clone(),
                Err(e) => return Ok(plain(Status::Mismatch, Some(e.to_string()))),
            };
            if full.is_zero() {
                return Ok(plain(Status::Degenerate, Some("constraint vanishes identically".into())));
            }
            let (core, removed) = strip_factors(&full, nonvanishing, budget);
            let (p, q) = match (UniPoly::from_poly_auto(&full), UniPoly::from_poly_auto(&core)) {
                (Ok(p), Ok(q)) => (p, q),
                (Err(e), _) | (_, Err(e)) => return Ok(plain(Status::Mismatch, Some(e.to_string()))),
            };
            let count = realroots::count_real_roots(&q)?;
            let s = realroots::structural_checks(&p);
            let mut notes = vec![format!(
                "degree {}, all coefficients positive: {}, exponents {}, Descartes bound {}",
                p.degree(),
                s.all_coeffs_positive,
                s.exponent_parity.as_str(),
                realroots::descartes_bound(&p)
            )];
            if !removed.is_empty() {
                let shown: Vec<String> = removed
                    .iter()
                    .map(|(f, k)| render_factor(f, *k as i32, corpus))
                    .collect();
                notes.push(format!("nonvanishing factors removed: {}", shown.join(", ")));
            }
            notes.push(format!("{count} distinct real root(s)"));
            if count != step.options.roots {
                notes.push(format!("expected {} real root(s)", step.options.roots));
                return Ok(plain(Status::Mismatch, Some(notes.join("; "))));
            }
            let mut o = plain(Status::Match, None);
            if let Some(e) = expected {
                let c = compare::compare(computed, e, CompareMode::UpToScalar, nonvanishing, table, budget)?;
                if c.status.is_match() {
                    o.status = c.status;
                    o.scalar = c.scalar;
                    o.factors = c.factors;
                    notes.push("agrees with the printed constraint".into());
                } else {
                    notes.push("recomputed constraint differs from the printed one (informational)".into());
                    o.diff = c.diff;
                }
            }
            o.note = Some(notes.join("; "));
            Ok(o)
        }
        _ => {
            if step.kind.eliminates() && computed.is_zero() {
                let note = if ledger.degenerate {
                    "elimination annihilated its inputs"
                } else {
                    "result is identically zero"
                };
                return Ok(plain(Status::Degenerate, Some(note.into())));
            }
            let mut note = ledger.degenerate.then(|| "an input was annihilated during elimination".to_string());
            let o = match expected {
                Some(e) => compare::compare(computed, e, step.mode, nonvanishing, table, budget)?,
                None => {
                    // property check: the eliminated variables are gone
                    let r = match computed.as_rat() {
                        Ok(r) => r,
                        Err(e) => return Ok(plain(Status::Mismatch, Some(e.to_string()))),
                    };
                    let left: Vec<String> = ledger
                        .eliminated
                        .iter()
                        .filter(|v| r.num().contains_var(**v))
                        .map(|v| table.name(*v))
                        .collect();
                    if !left.is_empty() {
                        return Ok(plain(Status::Mismatch, Some(format!("still contains {}", left.join(", ")))));
                    }
                    let vars: Vec<String> = r.num().vars().into_iter().map(|v| table.name(v)).collect();
                    note = Some(format!(
                        "nonzero eliminant with {} terms in {}",
                        r.num().len(),
                        if vars.is_empty() { "no variables".to_string() } else { vars.join(", ") }
                    ));
                    plain(Status::Match, None)
                }
            };
            let mut o = o;
            if o.note.is_none() {
                o.note = note;
            }
            Ok(o)
        }
    }
}

pub fn run_step(step: &Step, corpus: &Corpus, config: &RunConfig) -> StepResult {
    run_step_with(step, corpus, config, &HashMap::new())
}

fn pipeline_value(r: &StepResult) -> Option<RatFunc> {
    match &r.value {
        Some(Value::Rat(v)) => Some(v.clone()),
        _ => None,
    }
}

/// Runs every selected step in dependency order. Results are sorted by id.
pub fn run_all(corpus: &Corpus, config: &RunConfig) -> Vec<StepResult> {
    let levels = match corpus.schedule() {
        Ok(l) => l,
        Err(_) => return Vec::new(),
    };
    let producers = corpus.producers();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .ok();
    let mut results: HashMap<usize, StepResult> = HashMap::new();
    // recomputed values that differ from a mismatching transcription
    let mut pipeline: HashMap<String, RatFunc> = HashMap::new();
    for level in levels {
        let chosen: Vec<usize> = level.into_iter().filter(|&i| config.selects(&corpus.steps[i])).collect();
        let run_one = |i: &usize| -> (usize, StepResult) {
            let step = &corpus.steps[*i];
            let explicit = config.step.as_deref() == Some(step.id.as_str());
            if step.options.extended && !config.include_extended && !explicit {
                let mut r = StepResult::bare(step, Status::Skipped);
                r.notes.push("extended step; enable with --include-extended".into());
                return (*i, r);
            }
            let mut r = run_step(step, corpus, config);
            let overrides: HashMap<String, RatFunc> = step
                .inputs
                .refs()
                .into_iter()
                .filter_map(|id| pipeline.get(&id).map(|v| (id, v.clone())))
                .collect();
            if !overrides.is_empty() {
                let p = run_step_with(step, corpus, config, &overrides);
                r.pipeline_status = Some(p.status);
                if let Some(v) = pipeline_value(&p) {
                    r.value = Some(Value::Rat(v));
                }
            }
            (*i, r)
        };
        let done: Vec<(usize, StepResult)> = match (&pool, config.jobs > 1) {
            (Some(pool), true) => pool.install(|| chosen.par_iter().map(run_one).collect()),
            _ => chosen.iter().map(run_one).collect(),
        };
        for (i, r) in done {
            let step = &corpus.steps[i];
            if let Some(Expr::Ref(id)) = &step.expected {
                let upstream_bad = r.status == Status::Mismatch || r.pipeline_status.is_some();
                if producers.get(id) == Some(&i) && upstream_bad {
                    if let Some(v) = pipeline_value(&r) {
                        pipeline.insert(id.clone(), v);
                    }
                }
            }
            results.insert(i, r);
        }
    }
    let mut out: Vec<StepResult> = results.into_values().collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

/// Counts of each status, used by reports.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summary {
    pub matched: usize,
    pub matched_up_to_scalar: usize,
    pub mismatch: usize,
    pub degenerate: usize,
    pub incomplete: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(results: &[StepResult]) -> Self {
        let mut s = Summary::default();
        for r in results {
            match r.status {
                Status::Match => s.matched += 1,
                Status::MatchUpToScalar => s.matched_up_to_scalar += 1,
                Status::Mismatch => s.mismatch += 1,
                Status::Degenerate => s.degenerate += 1,
                Status::Incomplete => s.incomplete += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }
}

pub(crate) fn scalar_text(s: &BigRat) -> String {
    if s.is_zero() {
        "0".into()
    } else {
        s.to_string()
    }
}
