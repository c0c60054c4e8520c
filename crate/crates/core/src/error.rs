use thiserror::Error;

use crate::symbols::{SymbolTable, VarId};

/// Failures of the algebra layer. Resource errors (`TermCap`, `TimeLimit`)
/// are not faults: the verifier turns them into an INCOMPLETE status.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("polynomials were built against different symbol tables")]
    TableMismatch,
    #[error("term cap exceeded: {terms} terms > {cap}")]
    TermCap { cap: usize, terms: usize },
    #[error("time limit exceeded")]
    TimeLimit,
    #[error("zero polynomial where a nonzero one is required")]
    ZeroInput,
    #[error("division by zero")]
    DivisionByZero,
    #[error("no value assigned to variable {0}")]
    MissingVariable(VarId),
    #[error("variable {0} has no derivation rule")]
    UnruledVariable(VarId),
    #[error("variable {0} does not occur linearly")]
    NotLinear(VarId),
    #[error("variable {0} does not occur")]
    VariableAbsent(VarId),
    #[error("polynomial division is not exact")]
    NotExact,
    #[error("expression is not a polynomial (nonconstant denominator)")]
    NotPolynomial,
    #[error("expression is not univariate")]
    NotUnivariate,
    #[error("invalid symbol name {0:?}")]
    InvalidSymbol(String),
    #[error("duplicate symbol {0}")]
    DuplicateSymbol(String),
    #[error("empty system")]
    EmptySystem,
}

impl AlgebraError {
    pub fn is_resource(&self) -> bool {
        matches!(self, AlgebraError::TermCap { .. } | AlgebraError::TimeLimit)
    }

    /// Renders the error with variable names taken from `table`.
    pub fn describe(&self, table: &SymbolTable) -> String {
        let name = |v: &VarId| {
            if v.index() < table.len() {
                table.name(*v)
            } else {
                v.to_string()
            }
        };
        match self {
            AlgebraError::MissingVariable(v) => format!("no value assigned to variable {}", name(v)),
            AlgebraError::UnruledVariable(v) => format!("variable {} has no derivation rule", name(v)),
            AlgebraError::NotLinear(v) => format!("variable {} does not occur linearly", name(v)),
            AlgebraError::VariableAbsent(v) => format!("variable {} does not occur", name(v)),
            other => other.to_string(),
        }
    }
}
