//! Elimination toolkit: cross-multiplication, pseudo-reduction by a
//! relation, Sylvester resultants and successive elimination. Every output
//! carries a cofactor certificate that can be replayed as a ring identity.

use num_traits::One;

use crate::budget::Budget;
use crate::error::AlgebraError;
use crate::poly::{BigRat, Monomial, Poly};
use crate::symbols::VarId;

/// A polynomial asserted to vanish, kept in canonical (primitive,
/// positive-leading) form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub id: String,
    pub poly: Poly,
    pub anchor: String,
    pub nonvanishing: Vec<Poly>,
}

impl Equation {
    pub fn new(id: impl Into<String>, poly: &Poly) -> Self {
        Equation {
            id: id.into(),
            poly: poly.primitive(),
            anchor: String::new(),
            nonvanishing: Vec::new(),
        }
    }

    pub fn with_anchor(mut self, anchor: impl Into<String>) -> Self {
        self.anchor = anchor.into();
        self
    }
}

/// `sum(cofactors[i] * inputs[i]) == divisor * output`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub inputs: Vec<Poly>,
    pub cofactors: Vec<Poly>,
    pub divisor: BigRat,
    pub output: Poly,
}

impl Certificate {
    pub fn replay(&self, budget: &Budget) -> Result<bool, AlgebraError> {
        let mut lhs = Poly::zero();
        for (c, p) in self.cofactors.iter().zip(&self.inputs) {
            lhs = lhs.checked_add(&c.mul_with(p, budget)?)?;
        }
        Ok(lhs == self.output.scale(&self.divisor))
    }
}

/// Output of one elimination together with its certificate.
#[derive(Debug, Clone)]
pub struct Eliminated {
    pub poly: Poly,
    pub certificate: Certificate,
}

fn primitive_with_content(p: &Poly) -> (BigRat, Poly) {
    p.content_and_primitive()
        .unwrap_or_else(|_| (BigRat::one(), Poly::zero()))
}

fn certify(inputs: Vec<Poly>, cofactors: Vec<Poly>, raw: &Poly) -> Eliminated {
    let (divisor, poly) = primitive_with_content(raw);
    Eliminated {
        poly: poly.clone(),
        certificate: Certificate {
            inputs,
            cofactors,
            divisor,
            output: poly,
        },
    }
}

/// `coeff(b, v) * a - coeff(a, v) * b`, primitive. Both inputs must be of
/// degree exactly one in `v`.
pub fn eliminate_var_linear(a: &Poly, b: &Poly, v: VarId, budget: &Budget) -> Result<Eliminated, AlgebraError> {
    for p in [a, b] {
        match p.degree_in(v) {
            0 => return Err(AlgebraError::VariableAbsent(v)),
            1 => {}
            _ => return Err(AlgebraError::NotLinear(v)),
        }
    }
    let (ca, cb) = (a.coeff_in(v, 1), b.coeff_in(v, 1));
    let raw = cb.mul_with(a, budget)?.checked_sub(&ca.mul_with(b, budget)?)?;
    budget.check_terms(raw.len())?;
    Ok(certify(vec![a.clone(), b.clone()], vec![cb, -ca], &raw))
}

/// Sparse pseudo-reduction of `target` by `relation` in `v`: while the
/// degree of the remainder is at least `e = deg_v(relation)`, replace it by
/// `lc * r - lc(r) * v^(deg r - e) * relation`. For a linear relation
/// `A v + B` this rewrites every `A v` as `-B`.
///
/// Returns the primitive remainder; the certificate multiplier of `target`
/// is `lc^k` for the number `k` of steps actually taken.
pub fn substitute_linear_solution(
    relation: &Poly,
    target: &Poly,
    v: VarId,
    budget: &Budget,
) -> Result<Eliminated, AlgebraError> {
    let e = relation.degree_in(v);
    if e == 0 {
        return Err(AlgebraError::VariableAbsent(v));
    }
    let lc = relation.coeff_in(v, e);
    let mut r = target.clone();
    let mut mult = Poly::one();
    let mut quot = Poly::zero();
    loop {
        let d = r.degree_in(v);
        if d < e || r.is_zero() {
            break;
        }
        let lr = r.coeff_in(v, d);
        let shift = Monomial::var(v, d - e);
        let step = lr.mul_monomial(&shift, &BigRat::one());
        r = lc.mul_with(&r, budget)?.checked_sub(&step.mul_with(relation, budget)?)?;
        budget.check_terms(r.len())?;
        budget.check_time()?;
        quot = lc.mul_with(&quot, budget)?.checked_add(&step)?;
        mult = mult.mul_with(&lc, budget)?;
    }
    Ok(certify(vec![target.clone(), relation.clone()], vec![mult, -quot], &r))
}

/// Plain determinant by fraction-free Gaussian elimination (Bareiss).
pub fn determinant(matrix: &[Vec<Poly>], budget: &Budget) -> Result<Poly, AlgebraError> {
    let n = matrix.len();
    if n == 0 {
        return Ok(Poly::one());
    }
    if matrix.iter().any(|row| row.len() != n) {
        return Err(AlgebraError::NotExact);
    }
    let mut m: Vec<Vec<Poly>> = matrix.to_vec();
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return Ok(Poly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j]
                    .mul_with(&m[k][k], budget)?
                    .checked_sub(&m[i][k].mul_with(&m[k][j], budget)?)?;
                m[i][j] = t.div_exact_with(&prev, budget)?;
                budget.check_terms(m[i][j].len())?;
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
        budget.check_time()?;
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if sign { -d } else { d })
}

/// Sylvester matrix of `p` (degree m) and `q` (degree n) in `v`, size m+n.
pub fn sylvester_matrix(p: &Poly, q: &Poly, v: VarId) -> Result<Vec<Vec<Poly>>, AlgebraError> {
    let (m, n) = (p.degree_in(v) as usize, q.degree_in(v) as usize);
    if m == 0 || n == 0 {
        return Err(AlgebraError::VariableAbsent(v));
    }
    let (pc, qc) = (p.univariate_coeffs(v), q.univariate_coeffs(v));
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Poly::zero(); size];
        for (k, c) in pc.iter().enumerate() {
            row[i + m - k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Poly::zero(); size];
        for (k, c) in qc.iter().enumerate() {
            row[i + n - k] = c.clone();
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn sylvester_resultant(p: &Poly, q: &Poly, v: VarId, budget: &Budget) -> Result<Poly, AlgebraError> {
    determinant(&sylvester_matrix(p, q, v)?, budget)
}

/// Resultant with cofactors `s p + t q = Res`, obtained by expanding the
/// Sylvester determinant along its last column after replacing that column
/// by `(v^(n-1) p, ..., p, v^(m-1) q, ..., q)`.
pub fn resultant_certified(p: &Poly, q: &Poly, v: VarId, budget: &Budget) -> Result<Eliminated, AlgebraError> {
    let syl = sylvester_matrix(p, q, v)?;
    let (m, n) = (p.degree_in(v) as usize, q.degree_in(v) as usize);
    let size = m + n;
    let mut s = Poly::zero();
    let mut t = Poly::zero();
    for i in 0..size {
        let minor: Vec<Vec<Poly>> = syl
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != i)
            .map(|(_, row)| row[..size - 1].to_vec())
            .collect();
        let mut c = determinant(&minor, budget)?;
        if (i + size - 1) % 2 == 1 {
            c = -c;
        }
        if i < n {
            let shift = Monomial::var(v, (n - 1 - i) as u32);
            s = s.checked_add(&c.mul_monomial(&shift, &BigRat::one()))?;
        } else {
            let shift = Monomial::var(v, (m - 1 - (i - n)) as u32);
            t = t.checked_add(&c.mul_monomial(&shift, &BigRat::one()))?;
        }
    }
    let raw = determinant(&syl, budget)?;
    Ok(certify(vec![p.clone(), q.clone()], vec![s, t], &raw))
}

/// Outcome of [`successive_eliminate`].
#[derive(Debug, Clone)]
pub struct Succession {
    /// The retained equation: fewest terms among the survivors.
    pub output: Poly,
    /// Every surviving equation, free of the eliminated variables.
    pub remaining: Vec<Poly>,
    pub certificates: Vec<Certificate>,
    /// Set when an input was annihilated or nothing survived.
    pub degenerate: bool,
}

/// Eliminates the variables of `order` one after another. For each variable
/// the equation of least positive degree (then fewest terms, then earliest)
/// is the pivot; the other holders are reduced by it (cross-multiplication
/// when both are linear, pseudo-reduction otherwise) until the pivot is the
/// only holder, which is then dropped. Primitive parts are taken at every
/// stage, and the stage clock of `budget` restarts per variable.
pub fn successive_eliminate(eqs: &[Poly], order: &[VarId], budget: &mut Budget) -> Result<Succession, AlgebraError> {
    if eqs.is_empty() {
        return Err(AlgebraError::EmptySystem);
    }
    let mut degenerate = false;
    let mut system: Vec<Poly> = Vec::new();
    for p in eqs {
        if p.is_zero() {
            degenerate = true;
        } else {
            system.push(p.primitive());
        }
    }
    let mut certificates = Vec::new();
    for &v in order {
        budget.start_stage();
        loop {
            let holders: Vec<usize> = (0..system.len()).filter(|&i| system[i].contains_var(v)).collect();
            if holders.len() <= 1 {
                if let Some(&i) = holders.first() {
                    system.remove(i);
                }
                break;
            }
            let pivot = *holders
                .iter()
                .min_by_key(|&&i| (system[i].degree_in(v), system[i].len(), i))
                .expect("at least two holders");
            let piv = system[pivot].clone();
            let mut next = Vec::with_capacity(system.len());
            for (i, p) in system.iter().enumerate() {
                if i == pivot || !holders.contains(&i) {
                    next.push(p.clone());
                    continue;
                }
                let red = if piv.degree_in(v) == 1 && p.degree_in(v) == 1 {
                    eliminate_var_linear(p, &piv, v, budget)?
                } else {
                    substitute_linear_solution(&piv, p, v, budget)?
                };
                if red.poly.is_zero() {
                    degenerate = true;
                } else {
                    next.push(red.poly.clone());
                }
                certificates.push(red.certificate);
                budget.check_time()?;
            }
            system = next;
        }
    }
    if system.is_empty() {
        return Ok(Succession {
            output: Poly::zero(),
            remaining: system,
            certificates,
            degenerate: true,
        });
    }
    let best = (0..system.len())
        .min_by_key(|&i| (system[i].len(), i))
        .expect("nonempty system");
    Ok(Succession {
        output: system[best].clone(),
        remaining: system,
        certificates,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::symbols::{Role, SymbolTable};

    fn vars() -> (SymbolTable, Poly, Poly, Poly) {
        let mut t = SymbolTable::new();
        let v = t.declare("v", 0, Role::Base).unwrap();
        let x = t.declare("x", 0, Role::Base).unwrap();
        let y = t.declare("y", 0, Role::Base).unwrap();
        let p = (Poly::var(&t, v), Poly::var(&t, x), Poly::var(&t, y));
        (t, p.0, p.1, p.2)
    }

    #[test]
    fn linear_cross_multiplication() {
        let (t, v, x, y) = vars();
        let vid = t.lookup_name("v").unwrap();
        let b = Budget::unlimited();
        let r = eliminate_var_linear(&(&v + &x), &(&v + &y), vid, &b).unwrap();
        assert_eq!(r.poly, &x - &y);
        assert!(r.certificate.replay(&b).unwrap());
        assert_eq!(
            eliminate_var_linear(&(&v * &v), &v, vid, &b).unwrap_err(),
            AlgebraError::NotLinear(vid)
        );
        assert_eq!(
            eliminate_var_linear(&x, &v, vid, &b).unwrap_err(),
            AlgebraError::VariableAbsent(vid)
        );
    }

    #[test]
    fn linear_solution_substitution() {
        let (t, v, x, _) = vars();
        let vid = t.lookup_name("v").unwrap();
        let b = Budget::unlimited();
        let rel = &v.scale(&rat(2)) - &x;
        let r = substitute_linear_solution(&rel, &v.pow(2), vid, &b).unwrap();
        assert_eq!(r.poly, x.pow(2));
        assert_eq!(r.certificate.cofactors[0], Poly::from_int(4));
        assert!(r.certificate.replay(&b).unwrap());
    }

    #[test]
    fn small_resultants() {
        let (t, v, x, y) = vars();
        let vid = t.lookup_name("v").unwrap();
        let b = Budget::unlimited();
        // Res_v(a v + b, c v + d) = a d - b c with a=x, b=1, c=y, d=2
        let p = &(&x * &v) + &Poly::one();
        let q = &(&y * &v) + &Poly::from_int(2);
        let r = sylvester_resultant(&p, &q, vid, &b).unwrap();
        assert_eq!(r, &x.scale(&rat(2)) - &y);
        let sq = &v.pow(2) - &Poly::one();
        assert!(sylvester_resultant(&sq, &(&v - &Poly::one()), vid, &b).unwrap().is_zero());
        let two = &v.pow(2) - &Poly::from_int(2);
        assert_eq!(
            sylvester_resultant(&two, &(&v - &Poly::one()), vid, &b).unwrap(),
            Poly::from_int(-1)
        );
        let cert = resultant_certified(&two, &(&v - &x), vid, &b).unwrap();
        assert!(cert.certificate.replay(&b).unwrap());
    }

    #[test]
    fn successive_small_system() {
        let (t, v, x, y) = vars();
        let _ = v;
        let xid = t.lookup_name("x").unwrap();
        let mut b = Budget::unlimited();
        let s = successive_eliminate(&[&x + &y, &(&x - &y) + &Poly::one()], &[xid], &mut b).unwrap();
        assert_eq!(s.output, &y.scale(&rat(2)) - &Poly::one());
        assert!(!s.degenerate);
        assert!(s.certificates.iter().all(|c| c.replay(&b).unwrap()));
    }

    #[test]
    fn dependent_system_is_degenerate() {
        let (t, _, x, y) = vars();
        let xid = t.lookup_name("x").unwrap();
        let mut b = Budget::unlimited();
        let s = successive_eliminate(&[&x + &y, (&x + &y).scale(&rat(3))], &[xid], &mut b).unwrap();
        assert!(s.degenerate);
        assert!(s.output.is_zero());
    }

    #[test]
    fn determinant_of_vandermonde() {
        let (_, v, x, y) = vars();
        let b = Budget::unlimited();
        let row = |z: &Poly| vec![Poly::one(), z.clone(), z.pow(2)];
        let d = determinant(&[row(&v), row(&x), row(&y)], &b).unwrap();
        let expected = &(&(&y - &x) * &(&y - &v)) * &(&x - &v);
        assert_eq!(d, expected);
    }
}
