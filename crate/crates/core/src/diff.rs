//! Rational functions and the formal derivation acting on them.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::error::AlgebraError;
use crate::poly::{BigRat, Monomial, Poly};
use crate::symbols::{Role, SymbolTable, VarId};

/// `num / den` with `den` primitive and positive-leading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc::from(Poly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from(Poly::one())
    }

    pub fn constant(c: BigRat) -> Self {
        RatFunc::from(Poly::constant(c))
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        RatFunc::new_with(num, den, &Budget::unlimited())
    }

    pub fn new_with(num: Poly, den: Poly, budget: &Budget) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let (c, mut den) = den.content_and_primitive()?;
        let mut num = num.scale(&c.recip());
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g).expect("monomial content divides");
            den = den.div_monomial(&g).expect("monomial content divides");
        }
        if !den.is_constant() {
            if let Ok(q) = num.div_exact_with(&den, budget) {
                return Ok(RatFunc::from(q));
            }
        }
        Ok(RatFunc { num, den })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Result<&Poly, AlgebraError> {
        if self.is_polynomial() {
            Ok(&self.num)
        } else {
            Err(AlgebraError::NotPolynomial)
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &BigRat) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add_with(&self, other: &RatFunc, budget: &Budget) -> Result<RatFunc, AlgebraError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.den == other.den {
            let num = self.num.checked_add(&other.num)?;
            return RatFunc::new_with(num, self.den.clone(), budget);
        }
        if let Ok(q) = other.den.div_exact_with(&self.den, budget) {
            let num = self.num.mul_with(&q, budget)?.checked_add(&other.num)?;
            return RatFunc::new_with(num, other.den.clone(), budget);
        }
        if let Ok(q) = self.den.div_exact_with(&other.den, budget) {
            let num = other.num.mul_with(&q, budget)?.checked_add(&self.num)?;
            return RatFunc::new_with(num, self.den.clone(), budget);
        }
        let num = self
            .num
            .mul_with(&other.den, budget)?
            .checked_add(&other.num.mul_with(&self.den, budget)?)?;
        let den = self.den.mul_with(&other.den, budget)?;
        RatFunc::new_with(num, den, budget)
    }

    pub fn sub_with(&self, other: &RatFunc, budget: &Budget) -> Result<RatFunc, AlgebraError> {
        self.add_with(&other.neg(), budget)
    }

    pub fn mul_with(&self, other: &RatFunc, budget: &Budget) -> Result<RatFunc, AlgebraError> {
        if self.is_zero() || other.is_zero() {
            return Ok(RatFunc::zero());
        }
        let (mut n1, mut d2) = (self.num.clone(), other.den.clone());
        let (mut n2, mut d1) = (other.num.clone(), self.den.clone());
        if !d2.is_one() {
            if let Ok(q) = n1.div_exact_with(&d2, budget) {
                n1 = q;
                d2 = Poly::one();
            }
        }
        if !d1.is_one() {
            if let Ok(q) = n2.div_exact_with(&d1, budget) {
                n2 = q;
                d1 = Poly::one();
            }
        }
        let num = n1.mul_with(&n2, budget)?;
        let den = d1.mul_with(&d2, budget)?;
        RatFunc::new_with(num, den, budget)
    }

    pub fn div_with(&self, other: &RatFunc, budget: &Budget) -> Result<RatFunc, AlgebraError> {
        self.mul_with(&other.recip()?, budget)
    }

    pub fn recip(&self) -> Result<RatFunc, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow_with(&self, n: u32, budget: &Budget) -> Result<RatFunc, AlgebraError> {
        Ok(RatFunc {
            num: self.num.pow_with(n, budget)?,
            den: self.den.pow_with(n, budget)?,
        })
    }

    /// Substitutes `v := value` in numerator and denominator.
    pub fn substitute(&self, v: VarId, value: &RatFunc, budget: &Budget) -> Result<RatFunc, AlgebraError> {
        let (n, dn) = substitute_poly(&self.num, v, value, budget)?;
        let (d, dd) = substitute_poly(&self.den, v, value, budget)?;
        // n / q^dn  divided by  d / q^dd
        let q = &value.den;
        let (num, den) = match dn.cmp(&dd) {
            std::cmp::Ordering::Equal => (n, d),
            std::cmp::Ordering::Greater => (n, d.mul_with(&q.pow_with(dn - dd, budget)?, budget)?),
            std::cmp::Ordering::Less => (n.mul_with(&q.pow_with(dd - dn, budget)?, budget)?, d),
        };
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        RatFunc::new_with(num, den, budget)
    }

    pub fn eval(&self, assignment: &HashMap<VarId, BigRat>) -> Result<BigRat, AlgebraError> {
        let d = self.den.eval(assignment)?;
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.num.eval(assignment)? / d)
    }

    pub fn render(&self, table: &SymbolTable) -> String {
        if self.is_polynomial() {
            self.num.render(table)
        } else {
            format!("({})/({})", self.num.render(table), self.den.render(table))
        }
    }
}

/// `p(v := value)` written as `(numerator, d)` meaning `numerator / value.den^d`.
pub fn substitute_poly(
    p: &Poly,
    v: VarId,
    value: &RatFunc,
    budget: &Budget,
) -> Result<(Poly, u32), AlgebraError> {
    let d = p.degree_in(v);
    if d == 0 {
        return Ok((p.clone(), 0));
    }
    if value.is_polynomial() {
        return Ok((p.substitute_with(v, &value.num, budget)?, 0));
    }
    let coeffs = p.univariate_coeffs(v);
    // Horner in homogenized form: acc = acc * n + c_k * q^(d-k)
    let (n, q) = (&value.num, &value.den);
    let mut acc = Poly::zero();
    let mut qpow = Poly::one();
    let mut powers = Vec::with_capacity(coeffs.len());
    for _ in 0..coeffs.len() {
        powers.push(qpow.clone());
        qpow = qpow.mul_with(q, budget)?;
    }
    for (k, c) in coeffs.iter().enumerate().rev() {
        acc = acc.mul_with(n, budget)?;
        if !c.is_zero() {
            acc = acc.checked_add(&c.mul_with(&powers[d as usize - k], budget)?)?;
        }
        budget.check_terms(acc.len())?;
    }
    Ok((acc, d))
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({} terms / {} terms)", self.num.len(), self.den.len())
    }
}

/// Result of clearing a denominator: `r = content * poly / den`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cleared {
    pub content: BigRat,
    pub poly: Poly,
    pub den: Poly,
}

/// Drops the denominator of `r` and splits off the rational content of the
/// numerator. The denominator is returned so callers can ledger it.
pub fn clear_denominators(r: &RatFunc) -> Cleared {
    match r.num.content_and_primitive() {
        Ok((content, poly)) => Cleared {
            content,
            poly,
            den: r.den.clone(),
        },
        Err(_) => Cleared {
            content: BigRat::one(),
            poly: Poly::zero(),
            den: r.den.clone(),
        },
    }
}

/// A derivation `D` on the polynomial ring: jets shift order by default,
/// other variables need an explicit rule.
#[derive(Debug, Clone)]
pub struct Derivation {
    table: u32,
    jets: HashMap<VarId, VarId>,
    rules: HashMap<VarId, RatFunc>,
}

impl Derivation {
    /// The jet-shift derivation of `table`, without explicit rules.
    pub fn new(table: &SymbolTable) -> Self {
        let jets = table
            .entries()
            .filter(|(_, e)| e.role == Role::Jet)
            .filter_map(|(v, _)| table.jet_successor(v).map(|w| (v, w)))
            .collect();
        Derivation {
            table: table.id(),
            jets,
            rules: HashMap::new(),
        }
    }

    pub fn set_rule(&mut self, v: VarId, image: RatFunc) {
        self.rules.insert(v, image);
    }

    pub fn with_rule(mut self, v: VarId, image: RatFunc) -> Self {
        self.set_rule(v, image);
        self
    }

    pub fn table_id(&self) -> u32 {
        self.table
    }

    pub fn rule(&self, v: VarId) -> Result<RatFunc, AlgebraError> {
        if let Some(r) = self.rules.get(&v) {
            return Ok(r.clone());
        }
        match self.jets.get(&v) {
            Some(&w) => Ok(RatFunc::from(Poly::monomial(
                self.table,
                Monomial::var(w, 1),
                BigRat::one(),
            ))),
            None => Err(AlgebraError::UnruledVariable(v)),
        }
    }

    pub fn explicit_rules(&self) -> impl Iterator<Item = (VarId, &RatFunc)> {
        self.rules.iter().map(|(v, r)| (*v, r))
    }

    pub fn derive(&self, p: &Poly) -> Result<RatFunc, AlgebraError> {
        self.derive_with(p, &Budget::unlimited())
    }

    /// `D(p) = sum over v of dp/dv * D(v)`. Terms sharing a rule
    /// denominator are accumulated before any cross-multiplication.
    pub fn derive_with(&self, p: &Poly, budget: &Budget) -> Result<RatFunc, AlgebraError> {
        let mut by_den: Vec<(Poly, Poly)> = Vec::new();
        for v in p.vars() {
            let rule = self.rule(v)?;
            if rule.is_zero() {
                continue;
            }
            let part = p.derivative(v).mul_with(rule.num(), budget)?;
            match by_den.iter_mut().find(|(d, _)| d == rule.den()) {
                Some((_, acc)) => *acc = acc.checked_add(&part)?,
                None => by_den.push((rule.den().clone(), part)),
            }
            budget.check_time()?;
        }
        let mut total = RatFunc::zero();
        for (den, num) in by_den {
            total = total.add_with(&RatFunc::new_with(num, den, budget)?, budget)?;
        }
        Ok(total)
    }

    /// Quotient rule: `D(n/d) = (D(n) d - n D(d)) / d^2`.
    pub fn derive_ratfunc(&self, r: &RatFunc, budget: &Budget) -> Result<RatFunc, AlgebraError> {
        let dn = self.derive_with(&r.num, budget)?;
        if r.is_polynomial() {
            return Ok(dn);
        }
        let dd = self.derive_with(&r.den, budget)?;
        let den = RatFunc::from(r.den.clone());
        let top = dn
            .mul_with(&den, budget)?
            .sub_with(&dd.mul_with(&RatFunc::from(r.num.clone()), budget)?, budget)?;
        top.div_with(&den.pow_with(2, budget)?, budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn table() -> (SymbolTable, Vec<VarId>, VarId, VarId) {
        let mut t = SymbolTable::new();
        let lam = t.declare_jet("lam", 3).unwrap();
        let x = t.declare("x", 0, Role::Base).unwrap();
        let y = t.declare("y", 0, Role::Base).unwrap();
        (t, lam, x, y)
    }

    #[test]
    fn product_rule_on_jets() {
        let (t, lam, _, _) = table();
        let d = Derivation::new(&t);
        let p = &Poly::var(&t, lam[0]) * &Poly::var(&t, lam[1]);
        let dp = d.derive(&p).unwrap();
        let expected = &Poly::var(&t, lam[1]).pow(2) + &(&Poly::var(&t, lam[0]) * &Poly::var(&t, lam[2]));
        assert_eq!(dp, RatFunc::from(expected));
    }

    #[test]
    fn unruled_variable_is_an_error() {
        let (t, _, x, _) = table();
        let d = Derivation::new(&t);
        assert_eq!(d.derive(&Poly::var(&t, x)), Err(AlgebraError::UnruledVariable(x)));
        assert!(d.derive(&Poly::from_int(5)).unwrap().is_zero());
    }

    #[test]
    fn quotient_rule() {
        let (t, _, x, y) = table();
        // D(x) = 1, D(y) = x ; D(1/y) = -x/y^2
        let d = Derivation::new(&t)
            .with_rule(x, RatFunc::one())
            .with_rule(y, RatFunc::from(Poly::var(&t, x)));
        let r = RatFunc::new(Poly::one(), Poly::var(&t, y)).unwrap();
        let dr = d.derive_ratfunc(&r, &Budget::unlimited()).unwrap();
        let expected = RatFunc::new(-Poly::var(&t, x), Poly::var(&t, y).pow(2)).unwrap();
        assert_eq!(dr, expected);
    }

    #[test]
    fn substitution_of_a_quotient() {
        let (t, _, x, y) = table();
        let z = Poly::var(&t, lam_of(&t));
        let p = Poly::var(&t, x).pow(2);
        let r = RatFunc::new(Poly::var(&t, y), z.clone()).unwrap();
        let s = RatFunc::from(p).substitute(x, &r, &Budget::unlimited()).unwrap();
        assert_eq!(s, RatFunc::new(Poly::var(&t, y).pow(2), z.pow(2)).unwrap());
    }

    fn lam_of(t: &SymbolTable) -> VarId {
        t.lookup_name("lam").unwrap()
    }

    #[test]
    fn normalization_cancels() {
        let (t, _, x, y) = table();
        let (px, py) = (Poly::var(&t, x), Poly::var(&t, y));
        let num = &(&px * &px) - &(&py * &py);
        let den = (&px + &py).scale(&rat(-2));
        let r = RatFunc::new(num, den).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.num(), &(&py - &px).scale(&crate::poly::ratio(1, 2)));
        let c = clear_denominators(&RatFunc::from(px.scale(&rat(2))));
        assert_eq!((c.content, c.poly), (rat(2), px));
    }
}
