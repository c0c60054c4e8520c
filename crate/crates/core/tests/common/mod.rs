//! Property suites shared by the `properties` and `acceptance` targets.

#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::OnceLock;

use biharm_verify::elim::{resultant_certified, sylvester_resultant};
use biharm_verify::poly::{rat, ratio, BigRat, Monomial};
use biharm_verify::realroots::{count_real_roots, count_roots_between, UniPoly};
use biharm_verify::symbols::Role;
use biharm_verify::{Budget, Derivation, Poly, RatFunc, SymbolTable, VarId};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

pub const RING_CASES: u32 = 1000;
pub const LEIBNIZ_CASES: u32 = 500;
pub const RESULTANT_CASES: u32 = 200;
pub const STURM_CASES: u32 = 200;

struct Ring {
    table: SymbolTable,
    x: VarId,
    y: VarId,
    z: VarId,
    lam: Vec<VarId>,
}

fn ring() -> &'static Ring {
    static RING: OnceLock<Ring> = OnceLock::new();
    RING.get_or_init(|| {
        let mut table = SymbolTable::new();
        let lam = table.declare_jet("lam", 4).unwrap();
        let x = table.declare("x", 0, Role::Base).unwrap();
        let y = table.declare("y", 0, Role::Base).unwrap();
        let z = table.declare("z", 0, Role::Base).unwrap();
        Ring { table, x, y, z, lam }
    })
}

type Term = ([u32; 3], i64, i64);

fn terms(max_terms: usize, max_exp: u32) -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec(([0..=max_exp, 0..=max_exp, 0..=max_exp], -30i64..=30, 1i64..=4), 0..=max_terms)
}

fn build(vars: [VarId; 3], t: &[Term]) -> Poly {
    Poly::from_terms(
        ring().table.id(),
        t.iter()
            .map(|(e, n, d)| (Monomial::from_pairs(vars.iter().copied().zip(e.iter().copied())), ratio(*n, *d))),
    )
}

fn xyz(t: &[Term]) -> Poly {
    let r = ring();
    build([r.x, r.y, r.z], t)
}

/// Polynomial in `lam, lam', lam''` and `x`.
fn jet_poly(t: &[Term], tx: &[Term]) -> Poly {
    let r = ring();
    let a = build([r.lam[0], r.lam[1], r.lam[2]], t);
    let b = build([r.x, r.lam[0], r.lam[1]], tx);
    &a + &b
}

/// `D(x) = x*lam'/lam`, jets shift.
fn derivation() -> Derivation {
    let r = ring();
    let num = &Poly::var(&r.table, r.x) * &Poly::var(&r.table, r.lam[1]);
    let rule = RatFunc::new(num, Poly::var(&r.table, r.lam[0])).unwrap();
    Derivation::new(&r.table).with_rule(r.x, rule)
}

/// `x - (c + d*y)`
fn linear(r: &Ring, c: i64, d: i64) -> Poly {
    &(&Poly::var(&r.table, r.x) - &Poly::from_int(c)) - &Poly::var(&r.table, r.y).scale(&rat(d))
}

fn product(ps: &[Poly]) -> Poly {
    ps.iter().fold(Poly::one(), |acc, p| &acc * p)
}

fn from_roots(roots: &[BigRat]) -> UniPoly {
    roots.iter().fold(UniPoly::from_ints(&[1]), |acc, r| acc.mul(&UniPoly::new(vec![-r.clone(), rat(1)])))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

pub fn ring_axioms(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(terms(5, 3), terms(5, 3), terms(5, 3)), |(a, b, c)| {
            let (a, b, c) = (xyz(&a), xyz(&b), xyz(&c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &Poly::zero(), a.clone());
            prop_assert_eq!(&a * &Poly::one(), a.clone());
            prop_assert!((&a + &(-&a)).is_zero());
            prop_assert!((&a * &Poly::zero()).is_zero());
            prop_assert_eq!(-(-a.clone()), a.clone());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn evaluation_homomorphism(cases: u32) -> Result<(), String> {
    let pt = [-5i64..=5, -5i64..=5, -5i64..=5];
    runner(cases)
        .run(&(terms(5, 3), terms(5, 3), pt), |(a, b, pt)| {
            let r = ring();
            let (a, b) = (xyz(&a), xyz(&b));
            let asg: HashMap<VarId, BigRat> = [(r.x, rat(pt[0])), (r.y, rat(pt[1])), (r.z, rat(pt[2]))].into();
            let (va, vb) = (a.eval(&asg).unwrap(), b.eval(&asg).unwrap());
            prop_assert_eq!((&a * &b).eval(&asg).unwrap(), &va * &vb);
            prop_assert_eq!((&a + &b).eval(&asg).unwrap(), &va + &vb);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn leibniz(cases: u32) -> Result<(), String> {
    let d = derivation();
    let budget = Budget::unlimited();
    runner(cases)
        .run(&(terms(4, 2), terms(3, 2), terms(4, 2), terms(3, 2)), |(a, ax, b, bx)| {
            let (p, q) = (jet_poly(&a, &ax), jet_poly(&b, &bx));
            let lhs = d.derive(&(&p * &q)).unwrap();
            let rhs = d
                .derive(&p)
                .unwrap()
                .mul_with(&RatFunc::from(q.clone()), &budget)
                .unwrap()
                .add_with(&RatFunc::from(p.clone()).mul_with(&d.derive(&q).unwrap(), &budget).unwrap(), &budget)
                .unwrap();
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn derivation_linear(cases: u32) -> Result<(), String> {
    let d = derivation();
    let budget = Budget::unlimited();
    runner(cases)
        .run(&(terms(4, 2), terms(4, 2), -9i64..=9), |(a, b, k)| {
            let (p, q) = (jet_poly(&a, &[]), jet_poly(&b, &[]));
            let lhs = d.derive(&(&p.scale(&rat(k)) + &q)).unwrap();
            let rhs = d.derive(&p).unwrap().scale(&rat(k)).add_with(&d.derive(&q).unwrap(), &budget).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert!(d.derive(&Poly::from_int(k)).unwrap().is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn quotient_rule(cases: u32) -> Result<(), String> {
    let d = derivation();
    let budget = Budget::unlimited();
    runner(cases)
        .run(&(terms(3, 2), terms(3, 2)), |(a, b)| {
            let p = jet_poly(&a, &[]);
            let q = &jet_poly(&b, &[]) + &Poly::var(&ring().table, ring().lam[0]);
            prop_assume!(!q.is_zero());
            let f = RatFunc::new(p.clone(), q.clone()).unwrap();
            // D(f) * q + f * D(q) == D(p)
            let dq = d.derive(&q).unwrap();
            let back = d
                .derive_ratfunc(&f, &budget)
                .unwrap()
                .mul_with(&RatFunc::from(q), &budget)
                .unwrap()
                .add_with(&f.mul_with(&dq, &budget).unwrap(), &budget)
                .unwrap();
            prop_assert_eq!(back, d.derive(&p).unwrap());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `Res(prod (x - a_i), prod (x - b_j)) = prod (a_i - b_j)` with roots
/// linear in `y`, plus certificate replay.
pub fn resultant_split(cases: u32) -> Result<(), String> {
    let roots = || prop::collection::vec((-6i64..=6, -3i64..=3), 1..=3);
    let budget = Budget::unlimited();
    runner(cases)
        .run(&(roots(), roots()), |(a, b)| {
            let r = ring();
            let p = product(&a.iter().map(|&(c, d)| linear(r, c, d)).collect::<Vec<_>>());
            let q = product(&b.iter().map(|&(c, d)| linear(r, c, d)).collect::<Vec<_>>());
            let root = |c: i64, d: i64| &Poly::from_int(c) + &Poly::var(&r.table, r.y).scale(&rat(d));
            let mut expected = Poly::one();
            for &(ca, da) in &a {
                for &(cb, db) in &b {
                    expected = &expected * &(&root(ca, da) - &root(cb, db));
                }
            }
            let res = sylvester_resultant(&p, &q, r.x, &budget).unwrap();
            prop_assert_eq!(&res, &expected);
            let shared = a.iter().any(|x| b.contains(x));
            prop_assert_eq!(res.is_zero(), shared);

            let cert = resultant_certified(&p, &q, r.x, &budget).unwrap();
            prop_assert!(cert.certificate.replay(&budget).unwrap());
            if !shared {
                prop_assert!(cert.poly.equal_up_to_scalar(&res).is_some());
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn resultant_common_factor(cases: u32) -> Result<(), String> {
    let budget = Budget::unlimited();
    runner(cases)
        .run(&(terms(3, 2), terms(3, 2), -5i64..=5, -3i64..=3), |(f, g, c, d)| {
            let r = ring();
            let common = linear(r, c, d);
            let f = &xyz(&f) + &Poly::var(&r.table, r.x);
            let g = &xyz(&g) + &Poly::var(&r.table, r.x).pow(2);
            let p = &common * &f;
            let q = &common * &g;
            prop_assert!(sylvester_resultant(&p, &q, r.x, &budget).unwrap().is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Roots at `k/2` with multiplicities, times a positive quadratic; Sturm
/// counts are checked against sign changes on a grid of quarter points.
pub fn sturm_sampling(cases: u32) -> Result<(), String> {
    let strategy = (
        prop::collection::btree_set(-20i64..=20, 0..=6),
        prop::collection::vec(1u32..=3, 6),
        1i64..=9,
        1i64..=3,
    );
    runner(cases)
        .run(&strategy, |(roots, mult, shift, scale)| {
            let rs: Vec<BigRat> = roots.iter().map(|&k| ratio(k, 2)).collect();
            let mut with_mult = Vec::new();
            for (r, m) in rs.iter().zip(&mult) {
                for _ in 0..*m {
                    with_mult.push(r.clone());
                }
            }
            let quad = UniPoly::from_ints(&[shift, 0, scale]);
            let p = from_roots(&with_mult).mul(&quad);
            prop_assert_eq!(count_real_roots(&p).unwrap(), rs.len());

            let simple = from_roots(&rs).mul(&quad);
            let zero = rat(0);
            let mut changes = 0;
            let mut last = None;
            for i in -50i64..=50 {
                let s = simple.eval(&ratio(2 * i + 1, 4)).cmp(&zero);
                if last.is_some_and(|prev| prev != s) {
                    changes += 1;
                }
                last = Some(s);
            }
            prop_assert_eq!(count_real_roots(&simple).unwrap(), changes);

            let (lo, hi) = (rat(-3), rat(4));
            let inside = rs.iter().filter(|r| **r >= lo && **r <= hi).count();
            prop_assert_eq!(count_roots_between(&p, &lo, &hi).unwrap(), inside);
            Ok(())
        })
        .map_err(|e| e.to_string())
}
