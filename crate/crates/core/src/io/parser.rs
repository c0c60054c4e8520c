//! Expression grammar shared by equation files, rule files and step recipes.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INTEGER)?
//! atom   := INTEGER | SYMBOL | NAME '(' args ')' | '@' ID | '(' expr ')' | '[' args ']'
//! ```
//!
//! A symbol is a declared base name followed by apostrophes (jet order).
//! Juxtaposition is rejected: `2x` and `x y` are syntax errors.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::budget::Budget;
use crate::diff::RatFunc;
use crate::poly::{BigRat, Monomial, Poly};
use crate::symbols::{SymbolTable, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    BadChar(char),
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("exponent {0} is too large")]
    ExponentOverflow(String),
    #[error("implicit multiplication is not allowed")]
    ImplicitMultiplication,
    #[error("division is only allowed by a nonzero constant here")]
    Division,
    #[error("{0} is not allowed in a plain polynomial")]
    NotAllowed(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(String, u32),
    Ref(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eq,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number {n}"),
            Tok::Name(s) => format!("name {s}"),
            Tok::Sym(s, k) => format!("symbol {}{}", s, "'".repeat(*k as usize)),
            Tok::Ref(s) => format!("reference @{s}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Eq => "'='".into(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self,
            Tok::Int(_) | Tok::Name(_) | Tok::Sym(..) | Tok::Ref(_) | Tok::LParen | Tok::LBracket
        )
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let err = |kind| ParseError { line: l0, col: c0, kind };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Int(s.parse().expect("digits parse"))
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let mut order = 0;
            while i < chars.len() && chars[i] == '\'' {
                order += 1;
                i += 1;
            }
            let mut j = i;
            while j < chars.len() && (chars[j] == ' ' || chars[j] == '\t') {
                j += 1;
            }
            if order == 0 && j < chars.len() && chars[j] == '(' {
                Tok::Name(name)
            } else {
                Tok::Sym(name, order)
            }
        } else if c == '@' {
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || "_.".contains(chars[i])) {
                i += 1;
            }
            if i == start + 1 {
                return Err(err(ParseErrorKind::BadChar('@')));
            }
            Tok::Ref(chars[start + 1..i].iter().collect())
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                '=' => Tok::Eq,
                other => return Err(err(ParseErrorKind::BadChar(other))),
            }
        };
        col += i - start;
        out.push(Spanned { tok, line: l0, col: c0 });
    }
    Ok(out)
}

/// Parsed expression. Symbols are resolved against the table at parse time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(VarId),
    Ref(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(String, Vec<Expr>),
    List(Vec<Expr>),
}

impl Expr {
    /// Every `@ID` mentioned, in order of appearance.
    pub fn refs(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut Vec<String>) {
        match self {
            Expr::Ref(r) => out.push(r.clone()),
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_refs(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_refs(out);
                b.collect_refs(out);
            }
            Expr::Call(_, args) | Expr::List(args) => args.iter().for_each(|a| a.collect_refs(out)),
            Expr::Int(_) | Expr::Var(_) => {}
        }
    }
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    table: &'a SymbolTable,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|s| (s.line, s.col)).unwrap_or(self.end)
    }

    fn fail<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError { line, col, kind })
    }

    fn unexpected<T>(&self) -> Result<T, ParseError> {
        match self.peek() {
            Some(t) => self.fail(ParseErrorKind::Unexpected(t.describe())),
            None => self.fail(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected()
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(t) if t.starts_atom() => return self.fail(ParseErrorKind::ImplicitMultiplication),
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                let e: u32 = match u32::try_from(&n) {
                    Ok(e) if e <= 1_000_000 => e,
                    _ => return self.fail(ParseErrorKind::ExponentOverflow(n.to_string())),
                };
                self.pos += 1;
                if self.peek() == Some(&Tok::Caret) {
                    return self.unexpected();
                }
                Ok(Expr::Pow(Box::new(base), e))
            }
            _ => self.unexpected(),
        }
    }

    fn args(&mut self, close: Tok) -> Result<Vec<Expr>, ParseError> {
        let mut args = Vec::new();
        if self.peek() == Some(&close) {
            self.pos += 1;
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            match self.peek() {
                Some(Tok::Comma) => self.pos += 1,
                Some(t) if *t == close => {
                    self.pos += 1;
                    return Ok(args);
                }
                _ => return self.unexpected(),
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.fail(ParseErrorKind::UnexpectedEnd),
        };
        match tok {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Tok::Sym(name, order) => match self.table.lookup(&name, order) {
                Some(v) => {
                    self.pos += 1;
                    Ok(Expr::Var(v))
                }
                None => {
                    let shown = format!("{}{}", name, "'".repeat(order as usize));
                    self.fail(ParseErrorKind::UnknownSymbol(shown))
                }
            },
            Tok::Name(name) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                Ok(Expr::Call(name, self.args(Tok::RParen)?))
            }
            Tok::Ref(r) => {
                self.pos += 1;
                Ok(Expr::Ref(r))
            }
            Tok::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBracket => {
                self.pos += 1;
                Ok(Expr::List(self.args(Tok::RBracket)?))
            }
            _ => self.unexpected(),
        }
    }
}

fn end_of(text: &str) -> (usize, usize) {
    let line = text.lines().count().max(1);
    let col = text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    (line, col)
}

/// Parses a full expression (recipes included).
pub fn parse_expr(text: &str, table: &SymbolTable) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        table,
        end: end_of(text),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.unexpected();
    }
    Ok(e)
}

/// Parses `lhs = rhs` (meaning `lhs - rhs`) or a bare expression.
pub fn parse_equation(text: &str, table: &SymbolTable) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        table,
        end: end_of(text),
    };
    let lhs = p.expr()?;
    let e = if p.peek() == Some(&Tok::Eq) {
        p.pos += 1;
        Expr::Sub(Box::new(lhs), Box::new(p.expr()?))
    } else {
        lhs
    };
    if p.pos < p.toks.len() {
        return p.unexpected();
    }
    Ok(e)
}

fn plain(e: &Expr, table: &SymbolTable, allow_div: bool) -> Result<RatFunc, ParseErrorKind> {
    let b = Budget::unlimited();
    let rec = |x: &Expr| plain(x, table, allow_div);
    let ok = |r: Result<RatFunc, crate::error::AlgebraError>| r.map_err(|_| ParseErrorKind::Division);
    Ok(match e {
        Expr::Int(n) => RatFunc::constant(BigRat::from_integer(n.clone())),
        Expr::Var(v) => RatFunc::from(Poly::monomial(table.id(), Monomial::var(*v, 1), BigRat::from_integer(1.into()))),
        Expr::Ref(_) => return Err(ParseErrorKind::NotAllowed("an equation reference")),
        Expr::Call(..) => return Err(ParseErrorKind::NotAllowed("a function call")),
        Expr::List(_) => return Err(ParseErrorKind::NotAllowed("a list")),
        Expr::Neg(a) => rec(a)?.neg(),
        Expr::Add(a, c) => ok(rec(a)?.add_with(&rec(c)?, &b))?,
        Expr::Sub(a, c) => ok(rec(a)?.sub_with(&rec(c)?, &b))?,
        Expr::Mul(a, c) => ok(rec(a)?.mul_with(&rec(c)?, &b))?,
        Expr::Pow(a, n) => ok(rec(a)?.pow_with(*n, &b))?,
        Expr::Div(a, c) => {
            let d = rec(c)?;
            let constant = d.is_polynomial() && d.num().is_constant();
            if d.is_zero() || (!allow_div && !constant) {
                return Err(ParseErrorKind::Division);
            }
            ok(rec(a)?.div_with(&d, &b))?
        }
    })
}

fn located(kind: ParseErrorKind) -> ParseError {
    ParseError { line: 1, col: 1, kind }
}

/// Parses a polynomial; `/` is accepted only with a nonzero constant divisor.
pub fn parse_poly(text: &str, table: &SymbolTable) -> Result<Poly, ParseError> {
    let e = parse_equation(text, table)?;
    let r = plain(&e, table, false).map_err(located)?;
    Ok(r.num().clone())
}

/// Parses a rational function; any nonzero divisor is accepted.
pub fn parse_ratfunc(text: &str, table: &SymbolTable) -> Result<RatFunc, ParseError> {
    let e = parse_equation(text, table)?;
    plain(&e, table, true).map_err(located)
}

/// Evaluates an already parsed expression without references or calls.
pub fn eval_plain(e: &Expr, table: &SymbolTable) -> Result<RatFunc, ParseError> {
    plain(e, table, true).map_err(located)
}

/// Like [`eval_plain`], but only constant divisors are accepted.
pub fn eval_polynomial(e: &Expr, table: &SymbolTable) -> Result<RatFunc, ParseError> {
    plain(e, table, false).map_err(located)
}

pub(crate) fn is_zero_int(e: &Expr) -> bool {
    matches!(e, Expr::Int(n) if n.is_zero())
}
