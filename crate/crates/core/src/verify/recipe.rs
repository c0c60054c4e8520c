//! Evaluation of step recipes: arithmetic over `@ID` references plus the
//! operations of the engine.
//!
//! | call                 | meaning                                             |
//! |----------------------|-----------------------------------------------------|
//! | `D(x)`               | derivation of the step's rule set                   |
//! | `subst(x, v, y)`     | `x` with `v := y`; lists substitute in order         |
//! | `solve(x, v)`        | `-B/A` for `x = A v + B`                            |
//! | `elim(x, y, v)`      | linear cross-multiplication eliminating `v`         |
//! | `reduce(x, r, v)`    | pseudo-reduction of `x` by relation `r` in `v`      |
//! | `res(x, y, v)`       | Sylvester resultant in `v`                          |
//! | `succ([..], [..])`   | successive elimination of the listed variables      |
//! | `coeff(x, v, k)`     | coefficient of `v^k`                                |
//! | `num(x)`             | numerator, the denominator goes to the ledger       |
//! | `det([[..], ..])`    | determinant                                         |

use std::collections::HashMap;

use num_traits::{One, ToPrimitive};

use crate::budget::Budget;
use crate::diff::{Derivation, RatFunc};
use crate::elim::{self, Certificate, Eliminated};
use crate::error::AlgebraError;
use crate::io::corpus::Corpus;
use crate::io::parser::Expr;
use crate::poly::{BigRat, Poly};
use crate::symbols::VarId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Rat(RatFunc),
    List(Vec<Value>),
}

impl Value {
    pub fn as_rat(&self) -> Result<&RatFunc, EvalError> {
        match self {
            Value::Rat(r) => Ok(r),
            Value::List(_) => Err(EvalError::Shape("expected a single expression, found a list".into())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Rat(r) => r.is_zero(),
            Value::List(v) => v.iter().all(Value::is_zero),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0}")]
    Shape(String),
}

/// Side records of an evaluation.
#[derive(Debug, Clone, Default)]
pub struct Ledger {
    /// Denominators dropped or divided by; must be licensed as nonzero.
    pub denominators: Vec<Poly>,
    /// Multipliers introduced by cross-multiplication and pseudo-reduction.
    pub multipliers: Vec<Poly>,
    pub certificates: Vec<Certificate>,
    /// Variables removed by successive elimination.
    pub eliminated: Vec<VarId>,
    pub degenerate: bool,
    pub notes: Vec<String>,
}

impl Ledger {
    fn denominator(&mut self, p: &Poly) {
        let p = p.primitive();
        if !p.is_constant() && !self.denominators.contains(&p) {
            self.denominators.push(p);
        }
    }

    fn multiplier(&mut self, p: &Poly) {
        let p = p.primitive();
        if !p.is_constant() && !self.multipliers.contains(&p) {
            self.multipliers.push(p);
        }
    }
}

pub struct Ctx<'a> {
    pub corpus: &'a Corpus,
    pub overrides: &'a HashMap<String, RatFunc>,
    pub rules: Option<&'a Derivation>,
    pub budget: Budget,
    pub ledger: Ledger,
}

const FUNCTIONS: &[(&str, usize)] = &[
    ("D", 1),
    ("subst", 3),
    ("solve", 2),
    ("elim", 3),
    ("reduce", 3),
    ("res", 3),
    ("succ", 2),
    ("coeff", 3),
    ("num", 1),
    ("det", 1),
];

/// Static checks: known functions, arities, variable arguments.
pub fn validate(e: &Expr) -> Result<(), String> {
    match e {
        Expr::Call(name, args) => {
            let arity = FUNCTIONS
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, a)| *a)
                .ok_or_else(|| format!("unknown function {name}"))?;
            if args.len() != arity {
                return Err(format!("{name} takes {arity} arguments, found {}", args.len()));
            }
            let var_slot = match name.as_str() {
                "subst" | "solve" | "coeff" => Some(1),
                "elim" | "reduce" | "res" => Some(2),
                _ => None,
            };
            if name == "subst" {
                if let (Expr::List(vs), Expr::List(ys)) = (&args[1], &args[2]) {
                    if vs.len() != ys.len() || !vs.iter().all(|v| matches!(v, Expr::Var(_))) {
                        return Err("subst takes a list of variables and a list of values of the same length".into());
                    }
                    return args.iter().try_for_each(validate);
                }
            }
            if let Some(i) = var_slot {
                if !matches!(args[i], Expr::Var(_)) {
                    return Err(format!("argument {} of {name} must be a variable", i + 1));
                }
            }
            if name == "coeff" && !matches!(args[2], Expr::Int(_)) {
                return Err("the power in coeff must be an integer literal".into());
            }
            if name == "succ" {
                match (&args[0], &args[1]) {
                    (Expr::List(_), Expr::List(vs)) if vs.iter().all(|v| matches!(v, Expr::Var(_))) => {}
                    _ => return Err("succ takes a list of equations and a list of variables".into()),
                }
            }
            args.iter().try_for_each(validate)
        }
        Expr::Neg(a) | Expr::Pow(a, _) => validate(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            validate(a)?;
            validate(b)
        }
        Expr::List(items) => items.iter().try_for_each(validate),
        Expr::Int(_) | Expr::Var(_) | Expr::Ref(_) => Ok(()),
    }
}

fn var_arg(e: &Expr) -> Result<VarId, EvalError> {
    match e {
        Expr::Var(v) => Ok(*v),
        _ => Err(EvalError::Shape("expected a variable".into())),
    }
}

impl<'a> Ctx<'a> {
    pub fn new(corpus: &'a Corpus, overrides: &'a HashMap<String, RatFunc>, rules: Option<&'a Derivation>, budget: Budget) -> Self {
        Ctx {
            corpus,
            overrides,
            rules,
            budget,
            ledger: Ledger::default(),
        }
    }

    pub fn eval(&mut self, e: &Expr) -> Result<Value, EvalError> {
        match e {
            Expr::List(items) => Ok(Value::List(items.iter().map(|x| self.eval(x)).collect::<Result<_, _>>()?)),
            _ => Ok(Value::Rat(self.rat(e)?)),
        }
    }

    fn rat(&mut self, e: &Expr) -> Result<RatFunc, EvalError> {
        let table = self.corpus.table.id();
        Ok(match e {
            Expr::Int(n) => RatFunc::constant(BigRat::from_integer(n.clone())),
            Expr::Var(v) => RatFunc::from(Poly::monomial(table, crate::poly::Monomial::var(*v, 1), BigRat::one())),
            Expr::Ref(r) => match self.overrides.get(r) {
                Some(v) => v.clone(),
                None => self
                    .corpus
                    .equations
                    .get(r)
                    .map(|q| q.value.clone())
                    .ok_or_else(|| EvalError::Shape(format!("unknown equation @{r}")))?,
            },
            Expr::List(_) => return Err(EvalError::Shape("unexpected list".into())),
            Expr::Neg(a) => self.rat(a)?.neg(),
            Expr::Add(a, b) => {
                let (x, y) = (self.rat(a)?, self.rat(b)?);
                x.add_with(&y, &self.budget)?
            }
            Expr::Sub(a, b) => {
                let (x, y) = (self.rat(a)?, self.rat(b)?);
                x.sub_with(&y, &self.budget)?
            }
            Expr::Mul(a, b) => {
                let (x, y) = (self.rat(a)?, self.rat(b)?);
                x.mul_with(&y, &self.budget)?
            }
            Expr::Div(a, b) => {
                let (x, y) = (self.rat(a)?, self.rat(b)?);
                if y.is_zero() {
                    return Err(AlgebraError::DivisionByZero.into());
                }
                let r = x.div_with(&y, &self.budget)?;
                self.ledger.denominator(y.num());
                r
            }
            Expr::Pow(a, n) => self.rat(a)?.pow_with(*n, &self.budget)?,
            Expr::Call(name, args) => self.call(name, args)?,
        })
    }

    /// Numerator of `e`; a nonconstant denominator is ledgered.
    fn poly(&mut self, e: &Expr) -> Result<Poly, EvalError> {
        let r = self.rat(e)?;
        Ok(self.numerator(&r))
    }

    fn numerator(&mut self, r: &RatFunc) -> Poly {
        self.ledger.denominator(r.den());
        r.num().clone()
    }

    /// Keeps the certificate; the first `multipliers` cofactors are the
    /// factors the inputs were scaled by.
    fn record(&mut self, out: Eliminated, multipliers: usize) -> RatFunc {
        for c in out.certificate.cofactors.iter().take(multipliers) {
            self.ledger.multiplier(c);
        }
        let p = out.poly.clone();
        self.ledger.certificates.push(out.certificate);
        RatFunc::from(p)
    }

    fn call(&mut self, name: &str, args: &[Expr]) -> Result<RatFunc, EvalError> {
        match name {
            "D" => {
                let d = self
                    .rules
                    .ok_or_else(|| EvalError::Shape("D() needs a rule set".into()))?;
                let x = self.rat(&args[0])?;
                Ok(d.derive_ratfunc(&x, &self.budget)?)
            }
            "subst" => {
                let mut x = self.rat(&args[0])?;
                let pairs: Vec<(&Expr, &Expr)> = match (&args[1], &args[2]) {
                    (Expr::List(vs), Expr::List(ys)) => vs.iter().zip(ys).collect(),
                    (v, y) => vec![(v, y)],
                };
                for (v, y) in pairs {
                    let v = var_arg(v)?;
                    let y = self.rat(y)?;
                    self.ledger.denominator(y.den());
                    x = x.substitute(v, &y, &self.budget)?;
                }
                Ok(x)
            }
            "solve" => {
                let v = var_arg(&args[1])?;
                let p = self.poly(&args[0])?;
                match p.degree_in(v) {
                    0 => return Err(AlgebraError::VariableAbsent(v).into()),
                    1 => {}
                    _ => return Err(AlgebraError::NotLinear(v).into()),
                }
                let (a, b) = (p.coeff_in(v, 1), p.coeff_in(v, 0));
                self.ledger.denominator(&a.primitive());
                Ok(RatFunc::new_with(-b, a, &self.budget)?)
            }
            "elim" | "reduce" | "res" => {
                let v = var_arg(&args[2])?;
                let x = self.poly(&args[0])?.primitive();
                let y = self.poly(&args[1])?.primitive();
                if x.is_zero() || y.is_zero() {
                    self.ledger.degenerate = true;
                    self.ledger.notes.push(format!("{name}: an input is identically zero"));
                    return Ok(RatFunc::zero());
                }
                let (out, multipliers) = match name {
                    "elim" => (elim::eliminate_var_linear(&x, &y, v, &self.budget)?, 2),
                    "reduce" => (elim::substitute_linear_solution(&y, &x, v, &self.budget)?, 1),
                    _ => (elim::resultant_certified(&x, &y, v, &self.budget)?, 0),
                };
                Ok(self.record(out, multipliers))
            }
            "succ" => {
                let (eqs, vars) = match (&args[0], &args[1]) {
                    (Expr::List(e), Expr::List(v)) => (e, v),
                    _ => return Err(EvalError::Shape("succ takes two lists".into())),
                };
                let mut polys = Vec::with_capacity(eqs.len());
                for e in eqs {
                    polys.push(self.poly(e)?);
                }
                let order: Vec<VarId> = vars.iter().map(var_arg).collect::<Result<_, _>>()?;
                let s = elim::successive_eliminate(&polys, &order, &mut self.budget)?;
                self.ledger.eliminated.extend(order);
                self.ledger.degenerate |= s.degenerate;
                if s.remaining.len() > 1 {
                    self.ledger
                        .notes
                        .push(format!("{} equations survive elimination; kept the smallest", s.remaining.len()));
                }
                self.ledger.certificates.extend(s.certificates);
                Ok(RatFunc::from(s.output))
            }
            "coeff" => {
                let v = var_arg(&args[1])?;
                let k = match &args[2] {
                    Expr::Int(n) => n.to_u32().ok_or_else(|| EvalError::Shape("power out of range".into()))?,
                    _ => return Err(EvalError::Shape("power must be an integer".into())),
                };
                let x = self.rat(&args[0])?;
                if x.den().contains_var(v) {
                    return Err(EvalError::Shape("coeff of a quotient whose denominator involves the variable".into()));
                }
                Ok(RatFunc::new_with(x.num().coeff_in(v, k), x.den().clone(), &self.budget)?)
            }
            "num" => {
                let p = self.poly(&args[0])?;
                Ok(RatFunc::from(p))
            }
            "det" => {
                let rows = match &args[0] {
                    Expr::List(rows) => rows,
                    _ => return Err(EvalError::Shape("det takes a list of rows".into())),
                };
                let mut m = Vec::with_capacity(rows.len());
                for row in rows {
                    let cells = match row {
                        Expr::List(c) => c,
                        _ => return Err(EvalError::Shape("det rows must be lists".into())),
                    };
                    let mut r = Vec::with_capacity(cells.len());
                    for c in cells {
                        r.push(self.poly(c)?);
                    }
                    m.push(r);
                }
                if m.iter().any(|r| r.len() != m.len()) {
                    return Err(EvalError::Shape("det needs a square matrix".into()));
                }
                Ok(RatFunc::from(elim::determinant(&m, &self.budget)?))
            }
            other => Err(EvalError::Shape(format!("unknown function {other}"))),
        }
    }
}
