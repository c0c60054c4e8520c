use num_traits::{One, Signed};

use crate::poly::{BigRat, Poly};
use crate::symbols::SymbolTable;

fn magnitude(c: &BigRat) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// Terms in descending graded-lex order, e.g. `x^2 + 2*x*y + y^2`.
/// The zero polynomial prints as `0`.
pub fn print_canonical(p: &Poly, table: &SymbolTable) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mag = magnitude(c);
        if m.is_one() {
            out.push_str(&mag);
        } else if c.abs().is_one() {
            out.push_str(&m.render(table));
        } else {
            out.push_str(&mag);
            out.push('*');
            out.push_str(&m.render(table));
        }
    }
    out
}
