//! Comparison of a recomputed value with its transcription.

use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::error::AlgebraError;
use crate::poly::{BigRat, Poly};
use crate::symbols::SymbolTable;
use crate::verify::recipe::Value;
use crate::verify::{CompareMode, Status};

/// One monomial whose coefficients differ (both sides primitive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffTerm {
    pub term: String,
    pub computed: String,
    pub expected: String,
}

pub const MAX_DIFF: usize = 20;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub scalar: Option<BigRat>,
    /// Nonconstant factors of the ratio computed/expected, with exponent
    /// (negative when the factor divides).
    pub factors: Vec<(Poly, i32)>,
    pub diff: Vec<DiffTerm>,
    pub note: Option<String>,
}

impl Outcome {
    fn mismatch(diff: Vec<DiffTerm>, note: Option<String>) -> Self {
        Outcome {
            status: Status::Mismatch,
            scalar: None,
            factors: Vec::new(),
            diff,
            note,
        }
    }
}

/// `computed / expected` as `num / den`.
struct Ratio {
    num: Poly,
    den: Poly,
}

fn pair_ratio(c: &Poly, e: &Poly, budget: &Budget) -> Result<Option<Ratio>, AlgebraError> {
    if let Some(s) = c.equal_up_to_scalar(e) {
        return Ok(Some(Ratio {
            num: Poly::constant(s),
            den: Poly::one(),
        }));
    }
    if let Ok(q) = c.div_exact_with(e, budget) {
        return Ok(Some(Ratio { num: q, den: Poly::one() }));
    }
    if let Ok(q) = e.div_exact_with(c, budget) {
        return Ok(Some(Ratio { num: Poly::one(), den: q }));
    }
    Ok(None)
}

/// Splits `p` into a constant times powers of `factors`; `None` if some
/// part is left over.
pub fn split_over(p: &Poly, factors: &[Poly], budget: &Budget) -> Option<(BigRat, Vec<(Poly, u32)>)> {
    let mut rest = p.clone();
    let mut used = Vec::new();
    for f in factors {
        let mut k = 0;
        while !rest.is_constant() {
            match rest.div_exact_with(f, budget) {
                Ok(q) => {
                    rest = q;
                    k += 1;
                }
                Err(_) => break,
            }
        }
        if k > 0 {
            used.push((f.clone(), k));
        }
    }
    rest.constant_value().filter(|c| !c.is_zero()).map(|c| (c, used))
}

fn cross(v: &Value) -> Vec<(Poly, Poly)> {
    match v {
        Value::Rat(r) => vec![(r.num().clone(), r.den().clone())],
        Value::List(items) => items.iter().flat_map(cross).collect(),
    }
}

fn diff_terms(c: &Poly, e: &Poly, table: &SymbolTable) -> Vec<DiffTerm> {
    let (c, e) = (c.primitive(), e.primitive());
    let mut out = Vec::new();
    let (ct, et) = (c.terms(), e.terms());
    let (mut i, mut j) = (0, 0);
    let zero = BigRat::zero();
    let show = |x: &BigRat| x.to_string();
    while (i < ct.len() || j < et.len()) && out.len() < MAX_DIFF {
        let ord = match (ct.get(i), et.get(j)) {
            (Some(a), Some(b)) => b.0.cmp(&a.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        let (m, a, b) = match ord {
            std::cmp::Ordering::Less => {
                i += 1;
                (&ct[i - 1].0, &ct[i - 1].1, &zero)
            }
            std::cmp::Ordering::Greater => {
                j += 1;
                (&et[j - 1].0, &zero, &et[j - 1].1)
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
                (&ct[i - 1].0, &ct[i - 1].1, &et[j - 1].1)
            }
        };
        if a != b {
            let term = if m.is_one() { "1".to_string() } else { m.render(table) };
            out.push(DiffTerm {
                term,
                computed: show(a),
                expected: show(b),
            });
        }
    }
    out
}

/// Compares element-wise with one common ratio across all elements.
pub fn compare(
    computed: &Value,
    expected: &Value,
    mode: CompareMode,
    nonvanishing: &[Poly],
    table: &SymbolTable,
    budget: &Budget,
) -> Result<Outcome, AlgebraError> {
    let (cs, es) = (cross(computed), cross(expected));
    if cs.len() != es.len() {
        return Ok(Outcome::mismatch(
            Vec::new(),
            Some(format!("{} computed values against {} expected", cs.len(), es.len())),
        ));
    }
    let mut pairs = Vec::with_capacity(cs.len());
    for ((cn, cd), (en, ed)) in cs.iter().zip(&es) {
        // c = cn/cd, e = en/ed: compare cn*ed with en*cd
        pairs.push((cn.mul_with(ed, budget)?, en.mul_with(cd, budget)?));
    }
    let mut ratio: Option<Ratio> = None;
    for (idx, (c, e)) in pairs.iter().enumerate() {
        match (c.is_zero(), e.is_zero()) {
            (true, true) => continue,
            (true, false) | (false, true) => {
                let note = format!("element {idx}: one side is identically zero");
                return Ok(Outcome::mismatch(diff_terms(c, e, table), Some(note)));
            }
            _ => {}
        }
        match &ratio {
            None => match pair_ratio(c, e, budget)? {
                Some(r) => ratio = Some(r),
                None => {
                    let note = (pairs.len() > 1).then(|| format!("element {idx} differs"));
                    return Ok(Outcome::mismatch(diff_terms(c, e, table), note));
                }
            },
            Some(r) => {
                if c.mul_with(&r.den, budget)? != e.mul_with(&r.num, budget)? {
                    let note = format!("element {idx} does not share the common ratio");
                    return Ok(Outcome::mismatch(diff_terms(c, e, table), Some(note)));
                }
            }
        }
    }
    let ratio = match ratio {
        Some(r) => r,
        None => {
            return Ok(Outcome {
                status: Status::Match,
                scalar: Some(BigRat::one()),
                factors: Vec::new(),
                diff: Vec::new(),
                note: None,
            })
        }
    };
    if ratio.num.is_constant() && ratio.den.is_constant() {
        let s = ratio.num.constant_value().expect("constant") / ratio.den.constant_value().expect("constant");
        let status = if s.is_one() {
            Status::Match
        } else if mode == CompareMode::UpToScalar {
            Status::MatchUpToScalar
        } else {
            Status::Mismatch
        };
        return Ok(Outcome {
            status,
            scalar: Some(s),
            factors: Vec::new(),
            diff: Vec::new(),
            note: (status == Status::Mismatch).then(|| "equal only up to a scalar in exact mode".to_string()),
        });
    }
    if mode == CompareMode::Exact {
        let (c, e) = &pairs[0];
        return Ok(Outcome::mismatch(
            diff_terms(c, e, table),
            Some("differs by a nonconstant factor in exact mode".into()),
        ));
    }
    let up = split_over(&ratio.num, nonvanishing, budget);
    let down = split_over(&ratio.den, nonvanishing, budget);
    match (up, down) {
        (Some((a, fu)), Some((b, fd))) => {
            let mut factors: Vec<(Poly, i32)> = fu.into_iter().map(|(p, k)| (p, k as i32)).collect();
            factors.extend(fd.into_iter().map(|(p, k)| (p, -(k as i32))));
            Ok(Outcome {
                status: Status::MatchUpToScalar,
                scalar: Some(a / b),
                factors,
                diff: Vec::new(),
                note: None,
            })
        }
        _ => {
            let (c, e) = &pairs[0];
            Ok(Outcome::mismatch(
                diff_terms(c, e, table),
                Some("ratio is not a product of declared nonvanishing factors".into()),
            ))
        }
    }
}
