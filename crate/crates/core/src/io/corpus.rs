//! Corpus layout:
//!
//! ```text
//! symbols.txt         name role [max_order]
//! eq/<ID>.poly        '#' comment lines, then `lhs = rhs` or an expression
//! rules/<NAME>.rules  `D(var) = expr` lines, or `include OTHER`
//! steps.registry      id, kind, inputs, expected, mode, rules, options[, anchor]
//! nonvanishing.txt    scope-glob TAB expression
//! ```

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::diff::{Derivation, RatFunc};
use crate::io::parser::{self, Expr, ParseError};
use crate::poly::Poly;
use crate::symbols::{Role, SymbolTable};
use crate::verify::recipe;
use crate::verify::{CompareMode, Step, StepKind, StepOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("missing corpus file {0}")]
    Missing(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{file}: {id}: {error}")]
    Parse { file: String, id: String, error: ParseError },
    #[error("{id}: {message}")]
    Invalid { id: String, message: String },
    #[error("duplicate id {0}")]
    Duplicate(String),
}

fn invalid(id: &str, message: impl Into<String>) -> CorpusError {
    CorpusError::Invalid {
        id: id.to_string(),
        message: message.into(),
    }
}

/// Read-only view of a corpus tree, on disk or compiled in.
pub trait Source {
    fn read(&self, rel: &str) -> Result<Option<String>, CorpusError>;
    /// Relative paths of the files directly inside `dir` ending in `ext`, sorted.
    fn list(&self, dir: &str, ext: &str) -> Result<Vec<String>, CorpusError>;
}

pub struct DirSource(pub PathBuf);

impl Source for DirSource {
    fn read(&self, rel: &str) -> Result<Option<String>, CorpusError> {
        let path = self.0.join(rel);
        if !path.is_file() {
            return Ok(None);
        }
        fs::read_to_string(&path).map(Some).map_err(|e| CorpusError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    fn list(&self, dir: &str, ext: &str) -> Result<Vec<String>, CorpusError> {
        let path = self.0.join(dir);
        if !path.is_dir() {
            return Ok(Vec::new());
        }
        let rd = fs::read_dir(&path).map_err(|e| CorpusError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut out = Vec::new();
        for entry in rd.flatten() {
            let name = entry.file_name().to_string_lossy().into_owned();
            if name.ends_with(ext) {
                out.push(format!("{dir}/{name}"));
            }
        }
        out.sort();
        Ok(out)
    }
}

/// In-memory corpus: `(relative path, contents)` pairs.
pub struct MemSource(pub Vec<(String, String)>);

impl Source for MemSource {
    fn read(&self, rel: &str) -> Result<Option<String>, CorpusError> {
        Ok(self.0.iter().find(|(p, _)| p == rel).map(|(_, c)| c.clone()))
    }

    fn list(&self, dir: &str, ext: &str) -> Result<Vec<String>, CorpusError> {
        let prefix = format!("{dir}/");
        let mut out: Vec<String> = self
            .0
            .iter()
            .map(|(p, _)| p)
            .filter(|p| p.starts_with(&prefix) && !p[prefix.len()..].contains('/') && p.ends_with(ext))
            .cloned()
            .collect();
        out.sort();
        Ok(out)
    }
}

mod embedded {
    include!(concat!(env!("OUT_DIR"), "/embedded_corpus.rs"));
}

/// One transcribed equation.
#[derive(Debug, Clone)]
pub struct EquationEntry {
    pub id: String,
    /// Free-form location tag carried from the data file.
    pub reference: String,
    /// Verbatim fragment of the typeset display.
    pub anchor: String,
    pub value: RatFunc,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub table: SymbolTable,
    pub equations: BTreeMap<String, EquationEntry>,
    pub rules: BTreeMap<String, Derivation>,
    pub steps: Vec<Step>,
    /// `(scope glob, factor)`: factors assumed nonzero inside matching steps.
    pub nonvanishing: Vec<(String, Poly)>,
}

fn required(src: &dyn Source, rel: &str) -> Result<String, CorpusError> {
    src.read(rel)?.ok_or_else(|| CorpusError::Missing(rel.to_string()))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

fn load_symbols(text: &str) -> Result<SymbolTable, CorpusError> {
    let mut table = SymbolTable::new();
    for (n, line) in content_lines(text) {
        let id = format!("symbols.txt line {n}");
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (name, role) = match fields.as_slice() {
            [name, role] | [name, role, _] => (*name, *role),
            _ => return Err(invalid(&id, "expected `name role [max_order]`")),
        };
        let role = Role::parse(role).ok_or_else(|| invalid(&id, format!("unknown role {role}")))?;
        let declared = match (role, fields.get(2)) {
            (Role::Jet, Some(k)) => {
                let k: u32 = k.parse().map_err(|_| invalid(&id, "bad max order"))?;
                table.declare_jet(name, k).map(|_| ())
            }
            (Role::Jet, None) => return Err(invalid(&id, "jet symbols need a max order")),
            (_, None) => table.declare(name, 0, role).map(|_| ()),
            (_, Some(_)) => return Err(invalid(&id, "only jet symbols take a max order")),
        };
        declared.map_err(|e| invalid(&id, e.to_string()))?;
    }
    if table.is_empty() {
        return Err(invalid("symbols.txt", "no symbols declared"));
    }
    Ok(table)
}

fn comment_field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| {
        let l = l.trim_start().strip_prefix('#')?.trim_start();
        l.strip_prefix(key)?.strip_prefix(':').map(str::trim)
    })
}

fn stem(rel: &str, ext: &str) -> String {
    let name = rel.rsplit('/').next().unwrap_or(rel);
    name.strip_suffix(ext).unwrap_or(name).to_string()
}

fn load_equation(rel: &str, text: &str, table: &SymbolTable) -> Result<EquationEntry, CorpusError> {
    let id = stem(rel, ".poly");
    // keep line numbers meaningful by blanking comment lines
    let body: String = text
        .lines()
        .map(|l| if l.trim_start().starts_with('#') { "" } else { l })
        .collect::<Vec<_>>()
        .join("\n");
    let perr = |error| CorpusError::Parse {
        file: rel.to_string(),
        id: id.clone(),
        error,
    };
    let expr = parser::parse_equation(&body, table).map_err(perr)?;
    let value = parser::eval_polynomial(&expr, table).map_err(perr)?;
    Ok(EquationEntry {
        reference: comment_field(text, "ref").unwrap_or("").to_string(),
        anchor: comment_field(text, "anchor").unwrap_or("").to_string(),
        id,
        value,
    })
}

fn load_rules(
    src: &dyn Source,
    table: &SymbolTable,
) -> Result<BTreeMap<String, Derivation>, CorpusError> {
    let mut raw: BTreeMap<String, (String, String)> = BTreeMap::new();
    for rel in src.list("rules", ".rules")? {
        let text = required(src, &rel)?;
        raw.insert(stem(&rel, ".rules"), (rel, text));
    }
    let mut out = BTreeMap::new();
    for name in raw.keys() {
        let mut d = Derivation::new(table);
        let mut seen = HashSet::new();
        apply_rules(name, &raw, table, &mut d, &mut seen)?;
        out.insert(name.clone(), d);
    }
    Ok(out)
}

fn apply_rules(
    name: &str,
    raw: &BTreeMap<String, (String, String)>,
    table: &SymbolTable,
    d: &mut Derivation,
    seen: &mut HashSet<String>,
) -> Result<(), CorpusError> {
    if !seen.insert(name.to_string()) {
        return Err(invalid(name, "rule sets include each other cyclically"));
    }
    let (rel, text) = raw
        .get(name)
        .ok_or_else(|| invalid(name, "included rule set does not exist"))?;
    for (n, line) in content_lines(text) {
        if let Some(other) = line.trim().strip_prefix("include ") {
            apply_rules(other.trim(), raw, table, d, seen)?;
            continue;
        }
        let id = format!("{name} line {n}");
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| invalid(&id, "expected `D(var) = expr`"))?;
        let var = lhs
            .trim()
            .strip_prefix("D(")
            .and_then(|s| s.strip_suffix(')'))
            .and_then(|s| table.lookup_name(s.trim()))
            .ok_or_else(|| invalid(&id, format!("bad rule target {}", lhs.trim())))?;
        let image = parser::parse_ratfunc(rhs, table).map_err(|mut error| {
            error.line = n;
            CorpusError::Parse {
                file: rel.clone(),
                id: id.clone(),
                error,
            }
        })?;
        d.set_rule(var, image);
    }
    Ok(())
}

fn parse_options(id: &str, text: &str) -> Result<StepOptions, CorpusError> {
    let mut o = StepOptions::default();
    if text == "-" {
        return Ok(o);
    }
    for tok in text.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let num = |v: &str| v.parse::<u64>().map_err(|_| invalid(id, format!("bad option {tok}")));
        match tok.split_once('=') {
            None if tok == "extended" => o.extended = true,
            None if tok == "negative-control" => o.negative_control = true,
            Some(("time", v)) => o.time_limit = Some(num(v)?),
            Some(("terms", v)) => o.term_cap = Some(num(v)? as usize),
            Some(("roots", v)) => o.roots = num(v)? as usize,
            _ => return Err(invalid(id, format!("unknown option {tok}"))),
        }
    }
    Ok(o)
}

fn load_registry(text: &str, table: &SymbolTable) -> Result<Vec<Step>, CorpusError> {
    let mut steps: Vec<Step> = Vec::new();
    let mut ids = HashSet::new();
    for (n, line) in content_lines(text) {
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() < 7 || fields.len() > 8 {
            return Err(invalid(
                &format!("steps.registry line {n}"),
                format!("expected 7 or 8 tab-separated fields, found {}", fields.len()),
            ));
        }
        let id = fields[0].to_string();
        if !ids.insert(id.clone()) {
            return Err(CorpusError::Duplicate(id));
        }
        let kind = StepKind::parse(fields[1]).ok_or_else(|| invalid(&id, format!("unknown kind {}", fields[1])))?;
        let perr = |error| CorpusError::Parse {
            file: "steps.registry".into(),
            id: id.clone(),
            error,
        };
        let inputs = parser::parse_expr(fields[2], table).map_err(perr)?;
        let expected = match fields[3] {
            "-" => None,
            e => Some(parser::parse_expr(e, table).map_err(perr)?),
        };
        let mode = CompareMode::parse(fields[4]).ok_or_else(|| invalid(&id, format!("unknown mode {}", fields[4])))?;
        let rules = match fields[5] {
            "-" => None,
            r => Some(r.to_string()),
        };
        let options = parse_options(&id, fields[6])?;
        steps.push(Step {
            id,
            kind,
            inputs_text: fields[2].to_string(),
            inputs,
            expected_text: fields[3].to_string(),
            expected,
            mode,
            rules,
            options,
            anchor: fields.get(7).map(|s| s.to_string()).unwrap_or_default(),
        });
    }
    Ok(steps)
}

fn load_nonvanishing(text: &str, table: &SymbolTable) -> Result<Vec<(String, Poly)>, CorpusError> {
    let mut out = Vec::new();
    for (n, line) in content_lines(text) {
        let id = format!("nonvanishing.txt line {n}");
        let (scope, expr) = line
            .split_once('\t')
            .ok_or_else(|| invalid(&id, "expected `scope<TAB>expression`"))?;
        glob::Pattern::new(scope.trim()).map_err(|e| invalid(&id, e.to_string()))?;
        let p = parser::parse_poly(expr, table).map_err(|error| CorpusError::Parse {
            file: "nonvanishing.txt".into(),
            id: id.clone(),
            error,
        })?;
        if p.is_constant() {
            return Err(invalid(&id, "constant factors need no declaration"));
        }
        out.push((scope.trim().to_string(), p.primitive()));
    }
    Ok(out)
}

impl Corpus {
    /// The corpus compiled into the library.
    pub fn embedded() -> Result<Corpus, CorpusError> {
        let files = embedded::FILES
            .iter()
            .map(|(p, c)| (p.to_string(), c.to_string()))
            .collect();
        Corpus::load(&MemSource(files))
    }

    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
        let dir = dir.as_ref();
        if !dir.is_dir() {
            return Err(CorpusError::Missing(dir.display().to_string()));
        }
        Corpus::load(&DirSource(dir.to_path_buf()))
    }

    pub fn load(src: &dyn Source) -> Result<Corpus, CorpusError> {
        let table = load_symbols(&required(src, "symbols.txt")?)?;
        let registry = required(src, "steps.registry")?;
        let nonvanishing = match src.read("nonvanishing.txt")? {
            Some(t) => load_nonvanishing(&t, &table)?,
            None => return Err(CorpusError::Missing("nonvanishing.txt".into())),
        };
        let eq_files = src.list("eq", ".poly")?;
        if eq_files.is_empty() {
            return Err(CorpusError::Missing("eq/*.poly".into()));
        }
        let mut equations = BTreeMap::new();
        for rel in eq_files {
            let entry = load_equation(&rel, &required(src, &rel)?, &table)?;
            if equations.contains_key(&entry.id) {
                return Err(CorpusError::Duplicate(entry.id));
            }
            equations.insert(entry.id.clone(), entry);
        }
        let rules = load_rules(src, &table)?;
        let steps = load_registry(&registry, &table)?;
        let corpus = Corpus {
            table,
            equations,
            rules,
            steps,
            nonvanishing,
        };
        corpus.validate()?;
        Ok(corpus)
    }

    fn validate(&self) -> Result<(), CorpusError> {
        for s in &self.steps {
            for e in std::iter::once(&s.inputs).chain(s.expected.iter()) {
                for r in e.refs() {
                    if !self.equations.contains_key(&r) {
                        return Err(invalid(&s.id, format!("unknown equation @{r}")));
                    }
                }
                recipe::validate(e).map_err(|m| invalid(&s.id, m))?;
            }
            if let Some(r) = &s.rules {
                if !self.rules.contains_key(r) {
                    return Err(invalid(&s.id, format!("unknown rule set {r}")));
                }
            }
            s.check_shape().map_err(|m| invalid(&s.id, m))?;
        }
        self.schedule().map(|_| ())
    }

    pub fn step(&self, id: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.id == id)
    }

    /// Equation id each step produces (its expected value when that is a
    /// plain reference). The first step in registry order wins.
    pub fn producers(&self) -> HashMap<String, usize> {
        let mut out = HashMap::new();
        for (i, s) in self.steps.iter().enumerate() {
            if let Some(Expr::Ref(r)) = &s.expected {
                out.entry(r.clone()).or_insert(i);
            }
        }
        out
    }

    /// Step indices grouped in dependency levels: every step depends only on
    /// steps of earlier levels.
    pub fn schedule(&self) -> Result<Vec<Vec<usize>>, CorpusError> {
        let producers = self.producers();
        let deps: Vec<Vec<usize>> = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut d: Vec<usize> = s
                    .inputs
                    .refs()
                    .iter()
                    .filter_map(|r| producers.get(r).copied())
                    .filter(|&j| j != i)
                    .collect();
                d.sort_unstable();
                d.dedup();
                d
            })
            .collect();
        let mut level = vec![usize::MAX; self.steps.len()];
        let mut levels: Vec<Vec<usize>> = Vec::new();
        let mut done = 0;
        while done < self.steps.len() {
            let ready: Vec<usize> = (0..self.steps.len())
                .filter(|&i| level[i] == usize::MAX && deps[i].iter().all(|&j| level[j] < levels.len()))
                .collect();
            if ready.is_empty() {
                let stuck = (0..self.steps.len()).find(|&i| level[i] == usize::MAX).expect("unfinished step");
                return Err(invalid(&self.steps[stuck].id, "cyclic step dependencies"));
            }
            for &i in &ready {
                level[i] = levels.len();
            }
            done += ready.len();
            levels.push(ready);
        }
        Ok(levels)
    }

    /// Declared nonvanishing factors applicable to step `id`.
    pub fn nonvanishing_for(&self, id: &str) -> Vec<Poly> {
        self.nonvanishing
            .iter()
            .filter(|(scope, _)| glob::Pattern::new(scope).map(|p| p.matches(id)).unwrap_or(false))
            .map(|(_, p)| p.clone())
            .collect()
    }
}
