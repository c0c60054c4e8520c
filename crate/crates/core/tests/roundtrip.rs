use std::sync::OnceLock;

use biharm_verify::io::parser::{parse_poly, parse_ratfunc};
use biharm_verify::io::printer::print_canonical;
use biharm_verify::poly::{ratio, Monomial};
use biharm_verify::symbols::Role;
use biharm_verify::{Corpus, Poly, SymbolTable, VarId};
use proptest::prelude::*;

fn table() -> &'static (SymbolTable, Vec<VarId>) {
    static T: OnceLock<(SymbolTable, Vec<VarId>)> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = SymbolTable::new();
        let mut vars = t.declare_jet("lam", 4).unwrap();
        vars.extend(t.declare_jet("T", 2).unwrap());
        vars.push(t.declare("alpha", 0, Role::Base).unwrap());
        vars.push(t.declare("w22", 0, Role::Base).unwrap());
        (t, vars)
    })
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    let n = table().1.len();
    let term = (prop::collection::vec(0u32..=4, n), -1_000_000i64..=1_000_000, 1i64..=12);
    prop::collection::vec(term, 0..=8).prop_map(|terms| {
        let (t, vars) = table();
        Poly::from_terms(
            t.id(),
            terms.into_iter().map(|(exps, num, den)| {
                (Monomial::from_pairs(vars.iter().copied().zip(exps)), ratio(num, den))
            }),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse(p in poly_strategy()) {
        let t = &table().0;
        let text = print_canonical(&p, t);
        let back = parse_poly(&text, t).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(print_canonical(&back, t), text);
    }
}

#[test]
fn corpus_equations_round_trip() {
    let corpus = Corpus::embedded().unwrap();
    assert!(corpus.equations.len() >= 70);
    for (id, eq) in &corpus.equations {
        assert!(eq.value.is_polynomial(), "{id} is not polynomial");
        let text = print_canonical(eq.value.num(), &corpus.table);
        let back = parse_poly(&text, &corpus.table).unwrap_or_else(|e| panic!("{id}: {e}"));
        assert_eq!(&back, eq.value.num(), "{id}");
    }
}

#[test]
fn rational_functions_print_and_parse() {
    let t = &table().0;
    let r = parse_ratfunc("(lam'^2 - 3*lam*T)/(2*lam^3)", t).unwrap();
    let back = parse_ratfunc(&r.render(t), t).unwrap();
    assert_eq!(back, r);
}
