//! Polynomial local-unitary invariants written as index contractions.

mod builtin;
mod checks;
mod eval;
mod expr;
mod parser;

pub use builtin::{
    builtin_invariants, builtin_invariants_of_state, tangle, tangle_squared_expanded,
    tangle_squared_terms, BuiltinInvariants, BuiltinName, TANGLE_PATTERN,
};
pub use checks::{
    local_unitary_invariance_check, multiplicativity_check, InvarianceReport, InvariantTarget,
    MultiplicativityReport, CHECK_TOL,
};
pub use eval::{eval_contraction, InvariantValue, IMAG_TOL};
pub use expr::{ContractionExpr, Factor, FactorKind, SimpleFormReport};
pub use parser::{parse_contraction, parse_contraction_for, parse_definitions};
