//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept sorted in descending graded-lexicographic order, with the
//! variable order fixed by the [`SymbolTable`] declaration order. The zero
//! polynomial is the empty term list.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::error::AlgebraError;
use crate::symbols::{SymbolTable, VarId};

pub type BigRat = BigRational;

pub fn rat(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector, sparse and sorted by variable. No zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    exps: Vec<(VarId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId, e: u32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            degree: e,
            exps: vec![(v, e)],
        }
    }

    /// Builds a monomial from arbitrary (variable, exponent) pairs.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Self {
        let mut exps: Vec<(VarId, u32)> = Vec::new();
        let mut raw: Vec<(VarId, u32)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        raw.sort_by_key(|p| p.0);
        for (v, e) in raw {
            match exps.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => exps.push((v, e)),
            }
        }
        let degree = exps.iter().map(|p| p.1).sum();
        Monomial { degree, exps }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[(VarId, u32)] {
        &self.exps
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        match self.exps.binary_search_by_key(&v, |p| p.0) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.exps, &other.exps);
        let mut exps = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    exps.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&a[i..]);
        exps.extend_from_slice(&b[j..]);
        Monomial {
            degree: self.degree + other.degree,
            exps,
        }
    }

    /// `self / other` when every exponent of `other` is covered.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(v, e) in &self.exps {
            if j < other.exps.len() && other.exps[j].0 < v {
                return None;
            }
            if j < other.exps.len() && other.exps[j].0 == v {
                let f = other.exps[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => exps.push((v, e - f)),
                }
            } else {
                exps.push((v, e));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial {
            degree: self.degree - other.degree,
            exps,
        })
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(
            self.exps
                .iter()
                .filter_map(|&(v, e)| {
                    let f = other.exponent(v);
                    (f > 0).then_some((v, e.min(f)))
                }),
        )
    }

    /// Removes variable `v` entirely, returning the rest.
    pub fn without(&self, v: VarId) -> Monomial {
        Monomial::from_pairs(self.exps.iter().copied().filter(|p| p.0 != v))
    }

    pub fn render(&self, table: &SymbolTable) -> String {
        self.exps
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    table.name(v)
                } else {
                    format!("{}^{}", table.name(v), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn lex_cmp(a: &[(VarId, u32)], b: &[(VarId, u32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| lex_cmp(&self.exps, &other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; terms sorted descending, no zero coefficients.
///
/// `table == 0` marks a polynomial with no variables, usable with any table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    table: u32,
    terms: Vec<(Monomial, BigRat)>,
}

impl Default for Poly {
    fn default() -> Self {
        Poly::zero()
    }
}

fn join_tables(a: u32, b: u32) -> Result<u32, AlgebraError> {
    match (a, b) {
        (0, t) | (t, 0) => Ok(t),
        (s, t) if s == t => Ok(s),
        _ => Err(AlgebraError::TableMismatch),
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            table: 0,
            terms: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Poly::constant(BigRat::one())
    }

    pub fn constant(c: BigRat) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            table: 0,
            terms: vec![(Monomial::one(), c)],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(rat(n))
    }

    pub fn var(table: &SymbolTable, v: VarId) -> Self {
        Poly::monomial(table.id(), Monomial::var(v, 1), BigRat::one())
    }

    pub fn monomial(table: u32, m: Monomial, c: BigRat) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let table = if m.is_one() { 0 } else { table };
        Poly {
            table,
            terms: vec![(m, c)],
        }
    }

    /// Builds a polynomial from unsorted, possibly repeated terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRat)>>(table: u32, terms: I) -> Self {
        let mut acc: HashMap<Monomial, BigRat> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(BigRat::zero) += c;
        }
        Poly::from_map(table, acc)
    }

    fn from_map(table: u32, acc: HashMap<Monomial, BigRat>) -> Self {
        let mut terms: Vec<(Monomial, BigRat)> = acc.into_iter().filter(|t| !t.1.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly::from_sorted(table, terms)
    }

    fn from_sorted(table: u32, terms: Vec<(Monomial, BigRat)>) -> Self {
        let has_vars = terms.iter().any(|t| !t.0.is_one());
        Poly {
            table: if has_vars { table } else { 0 },
            terms,
        }
    }

    pub fn table_id(&self) -> u32 {
        self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<BigRat> {
        match self.terms.as_slice() {
            [] => Some(BigRat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn terms(&self) -> &[(Monomial, BigRat)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, BigRat)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Option<&BigRat> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms
            .iter()
            .flat_map(|t| t.0.exponents().iter().map(|p| p.0))
            .collect()
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.terms.iter().any(|t| t.0.exponent(v) > 0)
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        let table = join_tables(self.table, other.table)?;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Poly::from_sorted(table, out))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Poly {
        Poly {
            table: self.table,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            table: self.table,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_sorted(
            self.table,
            self.terms.iter().map(|(n, k)| (n.mul(m), k * c)).collect(),
        )
    }

    /// Exact product under a resource budget.
    pub fn mul_with(&self, other: &Poly, budget: &Budget) -> Result<Poly, AlgebraError> {
        let table = join_tables(self.table, other.table)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero());
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            let mut p = self.mul_monomial(m, c);
            p.table = if p.is_constant() { 0 } else { table };
            return Ok(p);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            let mut p = other.mul_monomial(m, c);
            p.table = if p.is_constant() { 0 } else { table };
            return Ok(p);
        }
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc: HashMap<Monomial, BigRat> = HashMap::with_capacity(large.terms.len() * 2);
        let mut ops: usize = 0;
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
                ops += 1;
                if ops & 0x3fff == 0 {
                    budget.check_time()?;
                }
            }
            budget.check_terms(acc.len())?;
        }
        let p = Poly::from_map(table, acc);
        budget.check_terms(p.len())?;
        Ok(p)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.mul_with(other, &Budget::unlimited())
    }

    pub fn pow_with(&self, n: u32, budget: &Budget) -> Result<Poly, AlgebraError> {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_with(&base, budget)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_with(&base, budget)?;
            }
        }
        Ok(result)
    }

    pub fn pow(&self, n: u32) -> Poly {
        self.pow_with(n, &Budget::unlimited())
            .expect("unbounded power cannot hit a resource cap")
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.iter().map(|t| t.0.exponent(v)).max().unwrap_or(0)
    }

    /// Coefficient of `v^k` when `self` is viewed as univariate in `v`.
    pub fn coeff_in(&self, v: VarId, k: u32) -> Poly {
        let terms: Vec<(Monomial, BigRat)> = self
            .terms
            .iter()
            .filter(|t| t.0.exponent(v) == k)
            .map(|(m, c)| (m.without(v), c.clone()))
            .collect();
        // removing a variable from a sorted list can reorder it
        Poly::from_terms(self.table, terms)
    }

    /// All coefficients in `v`, index = power.
    pub fn univariate_coeffs(&self, v: VarId) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigRat)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            buckets[m.exponent(v) as usize].push((m.without(v), c.clone()));
        }
        buckets
            .into_iter()
            .map(|b| Poly::from_terms(self.table, b))
            .collect()
    }

    /// Inverse of [`Poly::univariate_coeffs`].
    pub fn from_univariate(coeffs: &[Poly], v: VarId, table: u32) -> Poly {
        let mut acc = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let vk = Monomial::var(v, k as u32);
            for (m, a) in &c.terms {
                acc.push((m.mul(&vk), a.clone()));
            }
        }
        Poly::from_terms(table, acc)
    }

    /// `(content, primitive)` with `self = content * primitive`, the primitive
    /// part having coprime integer coefficients and a positive leading one.
    pub fn content_and_primitive(&self) -> Result<(BigRat, Poly), AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroInput);
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = BigRat::new(num_gcd, den_lcm);
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        Ok((content, self.scale(&inv)))
    }

    /// Primitive part; zero stays zero.
    pub fn primitive(&self) -> Poly {
        match self.content_and_primitive() {
            Ok((_, p)) => p,
            Err(_) => Poly::zero(),
        }
    }

    /// Returns `c != 0` with `self = c * other`, if one exists.
    pub fn equal_up_to_scalar(&self, other: &Poly) -> Option<BigRat> {
        if self.is_zero() && other.is_zero() {
            return Some(BigRat::one());
        }
        if self.terms.len() != other.terms.len() || self.is_zero() {
            return None;
        }
        let c = &self.terms[0].1 / &other.terms[0].1;
        for ((ma, ca), (mb, cb)) in self.terms.iter().zip(&other.terms) {
            if ma != mb || *ca != &c * cb {
                return None;
            }
        }
        Some(c)
    }

    pub fn eval(&self, assignment: &HashMap<VarId, BigRat>) -> Result<BigRat, AlgebraError> {
        let mut total = BigRat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.exponents() {
                let x = assignment.get(&v).ok_or(AlgebraError::MissingVariable(v))?;
                t *= num_traits::pow(x.clone(), e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let first = match it.next() {
            Some(t) => t.0.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |g, t| if g.is_one() { g } else { g.gcd(&t.0) })
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let terms: Option<Vec<_>> = self
            .terms
            .iter()
            .map(|(n, c)| n.div(m).map(|q| (q, c.clone())))
            .collect();
        // dividing every term by the same monomial keeps the order
        terms.map(|t| Poly::from_sorted(self.table, t))
    }

    /// Exact quotient `self / divisor`; fails with `NotExact` if the
    /// division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly, AlgebraError> {
        self.div_exact_with(divisor, &Budget::unlimited())
    }

    pub fn div_exact_with(&self, divisor: &Poly, budget: &Budget) -> Result<Poly, AlgebraError> {
        let table = join_tables(self.table, divisor.table)?;
        let (lm, lc) = divisor.leading().ok_or(AlgebraError::DivisionByZero)?.clone();
        if let Some(c) = divisor.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        let mut steps = 0usize;
        while let Some((m, c)) = rem.leading().cloned() {
            let q = m.div(&lm).ok_or(AlgebraError::NotExact)?;
            let qc = &c / &lc;
            rem = rem.checked_sub(&divisor.mul_monomial(&q, &qc))?;
            quotient.push((q, qc));
            steps += 1;
            if steps & 0xff == 0 {
                budget.check_time()?;
                budget.check_terms(rem.len())?;
            }
        }
        Ok(Poly::from_terms(table, quotient))
    }

    /// Formal partial derivative with respect to `v`.
    pub fn derivative(&self, v: VarId) -> Poly {
        let terms: Vec<(Monomial, BigRat)> = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let e = m.exponent(v);
                (e > 0).then(|| {
                    let rest = Monomial::from_pairs(
                        m.exponents()
                            .iter()
                            .map(|&(w, f)| if w == v { (w, f - 1) } else { (w, f) }),
                    );
                    (rest, c * rat(e as i64))
                })
            })
            .collect();
        Poly::from_terms(self.table, terms)
    }

    /// Replaces `v` by `value` (Horner evaluation in `v`).
    pub fn substitute_with(&self, v: VarId, value: &Poly, budget: &Budget) -> Result<Poly, AlgebraError> {
        if !self.contains_var(v) {
            return Ok(self.clone());
        }
        let coeffs = self.univariate_coeffs(v);
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul_with(value, budget)?.checked_add(c)?;
            budget.check_terms(acc.len())?;
        }
        Ok(acc)
    }

    /// Renders with the given table in canonical printed form.
    pub fn render(&self, table: &SymbolTable) -> String {
        crate::io::printer::print_canonical(self, table)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_ref()
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_ref()
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            /// Panics if the operands come from different symbol tables.
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("polynomial operands from different symbol tables")
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::Role;

    fn setup() -> (SymbolTable, Poly, Poly) {
        let mut t = SymbolTable::new();
        let x = t.declare("x", 0, Role::Base).unwrap();
        let y = t.declare("y", 0, Role::Base).unwrap();
        let (px, py) = (Poly::var(&t, x), Poly::var(&t, y));
        (t, px, py)
    }

    #[test]
    fn like_terms_cancel() {
        let (_, x, _) = setup();
        let a = &x + &Poly::one();
        let b = &x - &Poly::one();
        assert_eq!(&a + &b, x.scale(&rat(2)));
        assert_eq!(&a + &Poly::zero(), a);
    }

    #[test]
    fn square_of_sum() {
        let (t, x, y) = setup();
        let s = &x + &y;
        let sq = &s * &s;
        assert_eq!(sq.render(&t), "x^2 + 2*x*y + y^2");
        assert_eq!(s.pow(2), sq);
        assert_eq!(s.pow(0), Poly::one());
        assert_eq!(s.pow(1), s);
        assert_eq!(&s * &Poly::one(), s);
    }

    #[test]
    fn grlex_order() {
        let (t, x, y) = setup();
        let p = &(&y.pow(2) + &x) + &(&x * &y);
        assert_eq!(p.render(&t), "x*y + y^2 + x");
    }

    #[test]
    fn coefficient_extraction() {
        let (t, x, y) = setup();
        let xv = t.lookup_name("x").unwrap();
        let p = &(&x.pow(2) * &y) + &(&x.pow(2) + &Poly::one());
        assert_eq!(p.coeff_in(xv, 2), &y + &Poly::one());
        assert!(p.coeff_in(xv, 5).is_zero());
        let coeffs = p.univariate_coeffs(xv);
        assert_eq!(Poly::from_univariate(&coeffs, xv, t.id()), p);
    }

    #[test]
    fn content_and_sign() {
        let (_, x, y) = setup();
        let p = &x.scale(&rat(6)) + &y.scale(&rat(4));
        let (c, q) = p.content_and_primitive().unwrap();
        assert_eq!(c, rat(2));
        assert_eq!(q, &x.scale(&rat(3)) + &y.scale(&rat(2)));
        let (c, q) = x.scale(&rat(-3)).content_and_primitive().unwrap();
        assert_eq!((c, q), (rat(-3), x.clone()));
        assert_eq!(Poly::zero().content_and_primitive(), Err(AlgebraError::ZeroInput));
        let half = x.scale(&ratio(1, 2)) + y.scale(&ratio(1, 3));
        let (c, q) = half.content_and_primitive().unwrap();
        assert_eq!(c, ratio(1, 6));
        assert_eq!(q, &x.scale(&rat(3)) + &y.scale(&rat(2)));
    }

    #[test]
    fn scalar_comparison() {
        let (_, x, y) = setup();
        let a = &x.scale(&rat(2)) + &Poly::from_int(2);
        let b = &x + &Poly::one();
        assert_eq!(a.equal_up_to_scalar(&b), Some(rat(2)));
        assert_eq!(b.equal_up_to_scalar(&a), Some(ratio(1, 2)));
        assert_eq!(x.equal_up_to_scalar(&y), None);
        assert_eq!(a.equal_up_to_scalar(&a), Some(rat(1)));
    }

    #[test]
    fn evaluation() {
        let (t, x, y) = setup();
        let p = &x.pow(2) + &y;
        let mut asg = HashMap::new();
        asg.insert(t.lookup_name("x").unwrap(), rat(2));
        asg.insert(t.lookup_name("y").unwrap(), rat(3));
        assert_eq!(p.eval(&asg).unwrap(), rat(7));
        asg.remove(&t.lookup_name("y").unwrap());
        assert!(matches!(p.eval(&asg), Err(AlgebraError::MissingVariable(_))));
    }

    #[test]
    fn exact_division() {
        let (_, x, y) = setup();
        let a = &x + &y;
        let b = &x - &y.scale(&rat(2));
        let p = &a * &b;
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert_eq!((&p + &Poly::one()).div_exact(&a), Err(AlgebraError::NotExact));
        assert_eq!(p.div_exact(&Poly::zero()), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn table_mismatch_detected() {
        let (_, x, _) = setup();
        let (_, x2, _) = setup();
        assert_eq!(x.checked_add(&x2), Err(AlgebraError::TableMismatch));
        // constants are table-agnostic
        assert!(x.checked_add(&Poly::one()).is_ok());
    }

    #[test]
    fn term_cap_trips() {
        let (_, x, y) = setup();
        let p = (&x + &y) + Poly::one();
        let budget = Budget::new(20, None);
        assert!(matches!(p.pow_with(10, &budget), Err(AlgebraError::TermCap { .. })));
    }

    #[test]
    fn substitution() {
        let (t, x, y) = setup();
        let xv = t.lookup_name("x").unwrap();
        let p = &x.pow(2) + &x;
        let q = p.substitute_with(xv, &(&y + &Poly::one()), &Budget::unlimited()).unwrap();
        assert_eq!(q, &(&y.pow(2) + &y.scale(&rat(3))) + &Poly::from_int(2));
    }
}
