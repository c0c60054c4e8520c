//! Real-root counting for univariate polynomials over the rationals.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;
use crate::poly::{BigRat, Poly};
use crate::symbols::VarId;

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigRat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    AllOdd,
    AllEven,
    Mixed,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::AllOdd => "all-odd",
            Parity::AllEven => "all-even",
            Parity::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Structure {
    pub all_coeffs_positive: bool,
    pub exponent_parity: Parity,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| crate::poly::rat(c)).collect())
    }

    /// Views `p` as a polynomial in `v`; any other variable is an error.
    pub fn from_poly(p: &Poly, v: VarId) -> Result<Self, AlgebraError> {
        let mut coeffs = vec![BigRat::zero(); p.degree_in(v) as usize + 1];
        for (m, c) in p.terms() {
            let e = m.exponent(v);
            if m.degree() != e {
                return Err(AlgebraError::NotUnivariate);
            }
            coeffs[e as usize] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Like [`UniPoly::from_poly`] but picks the single variable of `p`.
    pub fn from_poly_auto(p: &Poly) -> Result<Self, AlgebraError> {
        let vars = p.vars();
        match vars.len() {
            0 => Ok(UniPoly::new(vec![p.constant_value().unwrap_or_default()])),
            1 => UniPoly::from_poly(p, *vars.iter().next().expect("one variable")),
            _ => Err(AlgebraError::NotUnivariate),
        }
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRat {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * crate::poly::rat(k as i64))
                .collect(),
        )
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::new(Vec::new());
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), AlgebraError> {
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let mut r = self.coeffs.clone();
        let dl = d.leading();
        let dd = d.degree();
        if r.len() < d.coeffs.len() {
            return Ok((UniPoly::new(Vec::new()), self.clone()));
        }
        let mut q = vec![BigRat::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let f = &r[k] / &dl;
            for (j, c) in d.coeffs.iter().enumerate() {
                r[k - dd + j] -= &f * c;
            }
            q[k - dd] = f;
        }
        r.truncate(dd);
        Ok((UniPoly::new(q), UniPoly::new(r)))
    }

    /// Scales by a positive rational so the coefficients are coprime integers.
    pub fn primitive_positive(&self) -> UniPoly {
        let mut g = num_bigint::BigInt::zero();
        let mut l = num_bigint::BigInt::one();
        for c in &self.coeffs {
            g = num_integer::Integer::gcd(&g, c.numer());
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        if g.is_zero() {
            return self.clone();
        }
        let s = BigRat::new(l, g);
        UniPoly::new(self.coeffs.iter().map(|c| c * &s).collect())
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r.primitive_positive();
        }
        a.primitive_positive()
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn squarefree_part(&self) -> UniPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        self.div_rem(&g).expect("gcd is nonzero").0
    }

    fn sign_at_pos_inf(&self) -> Ordering {
        self.leading().cmp(&BigRat::zero())
    }

    fn sign_at_neg_inf(&self) -> Ordering {
        let s = self.sign_at_pos_inf();
        if self.degree() % 2 == 1 {
            s.reverse()
        } else {
            s
        }
    }
}

fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// `p, p', -rem(p_{i-1}, p_i), ...`, each scaled positively to a primitive
/// integer polynomial.
pub fn sturm_sequence(p: &UniPoly) -> Result<Vec<UniPoly>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroInput);
    }
    let mut seq = vec![p.primitive_positive()];
    let d = p.derivative();
    if d.is_zero() {
        return Ok(seq);
    }
    seq.push(d.primitive_positive());
    loop {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1])?.1;
        if r.is_zero() {
            break;
        }
        let neg = UniPoly::new(r.coeffs.iter().map(|c| -c).collect());
        seq.push(neg.primitive_positive());
    }
    Ok(seq)
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &UniPoly) -> Result<usize, AlgebraError> {
    let seq = sturm_sequence(&p.squarefree_part())?;
    let neg = variations(seq.iter().map(|q| q.sign_at_neg_inf()));
    let pos = variations(seq.iter().map(|q| q.sign_at_pos_inf()));
    Ok(neg - pos)
}

/// Number of distinct real roots in the closed interval `[a, b]`.
pub fn count_roots_between(p: &UniPoly, a: &BigRat, b: &BigRat) -> Result<usize, AlgebraError> {
    if a > b {
        return Ok(0);
    }
    let sf = p.squarefree_part();
    let seq = sturm_sequence(&sf)?;
    let at = |x: &BigRat| variations(seq.iter().map(|q| q.eval(x).cmp(&BigRat::zero())));
    let on_left = usize::from(sf.eval(a).is_zero());
    Ok(at(a) - at(b) + on_left)
}

pub fn structural_checks(p: &UniPoly) -> Structure {
    let nonzero: Vec<(usize, &BigRat)> = p.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    let all_coeffs_positive = nonzero.iter().all(|(_, c)| c.is_positive());
    let odd = nonzero.iter().all(|(k, _)| k % 2 == 1);
    let even = nonzero.iter().all(|(k, _)| k % 2 == 0);
    let exponent_parity = match (odd, even) {
        (true, false) => Parity::AllOdd,
        (false, true) => Parity::AllEven,
        (true, true) => Parity::AllEven,
        (false, false) => Parity::Mixed,
    };
    Structure {
        all_coeffs_positive,
        exponent_parity,
    }
}

/// Sign changes in the coefficient sequence: an upper bound on the number
/// of positive roots.
pub fn descartes_bound(p: &UniPoly) -> usize {
    variations(p.coeffs.iter().map(|c| c.cmp(&BigRat::zero())))
}
