//! Exact symbolic verification of a polynomial elimination argument.
//!
//! Polynomials are sparse with rational coefficients over a declared
//! symbol table; see [`poly::Poly`], [`diff::Derivation`] and
//! [`elim::successive_eliminate`]. Corpus steps are run with
//! [`verify::run_all`].

pub mod budget;
pub mod diff;
pub mod elim;
pub mod error;
pub mod io;
pub mod poly;
pub mod realroots;
pub mod symbols;
pub mod verify;

pub use budget::Budget;
pub use diff::{Derivation, RatFunc};
pub use error::AlgebraError;
pub use io::corpus::Corpus;
pub use poly::{BigRat, Poly};
pub use symbols::{SymbolTable, VarId};
pub use verify::{RunConfig, Status, StepResult};
