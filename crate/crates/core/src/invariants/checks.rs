//! Consistency checks: multiplicativity under `⊙` and invariance under
//! random local unitaries.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::tensor::{haar_local_unitaries, StateTensor};

use super::builtin::{builtin_invariants_of_state, tangle, BuiltinName};
use super::eval::eval_contraction;
use super::expr::ContractionExpr;

/// Pass threshold for both checks.
pub const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicativityReport {
    pub value_a: Complex64,
    pub value_b: Complex64,
    pub value_odot: Complex64,
    /// `|I(a⊙b) − I(a) I(b)|`.
    pub deviation: f64,
    pub relative_deviation: f64,
    pub pass: bool,
}

/// Evaluates a simple-form expression on `a`, `b` and `a⊙b`.
pub fn multiplicativity_check(
    expr: &ContractionExpr,
    a: &StateTensor,
    b: &StateTensor,
) -> Result<MultiplicativityReport> {
    let sf = expr.simple_form();
    if !sf.simple {
        return Err(Error::NotSimpleForm(sf.diagnostic.unwrap_or_default()));
    }
    let joint = a.odot(b)?;
    let value_a = eval_contraction(expr, a)?.value;
    let value_b = eval_contraction(expr, b)?.value;
    let value_odot = eval_contraction(expr, &joint)?.value;
    let product = value_a * value_b;
    let deviation = (value_odot - product).norm();
    let scale = product.norm().max(value_odot.norm());
    let relative_deviation = if scale > 0.0 { deviation / scale } else { 0.0 };
    Ok(MultiplicativityReport {
        value_a,
        value_b,
        value_odot,
        deviation,
        relative_deviation,
        pass: relative_deviation <= CHECK_TOL,
    })
}

/// What to test for local-unitary invariance.
#[derive(Debug, Clone, PartialEq)]
pub enum InvariantTarget {
    Expr(ContractionExpr),
    Builtin(BuiltinName),
    Tangle,
}

impl InvariantTarget {
    pub fn evaluate(&self, state: &StateTensor) -> Result<Complex64> {
        match self {
            InvariantTarget::Expr(e) => Ok(eval_contraction(e, state)?.value),
            InvariantTarget::Builtin(b) => {
                Ok(Complex64::new(builtin_invariants_of_state(state)?.get(*b), 0.0))
            }
            InvariantTarget::Tangle => Ok(Complex64::new(tangle(state)?, 0.0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub baseline: Complex64,
    pub trials: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compares the target on `state` with its value after `trials` random local
/// unitaries; trial `t` draws from stream `t` of `seed`.
pub fn local_unitary_invariance_check(
    target: &InvariantTarget,
    state: &StateTensor,
    trials: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    let baseline = target.evaluate(state)?;
    let mut max_deviation: f64 = 0.0;
    for t in 0..trials {
        let us = haar_local_unitaries(state.dims(), &mut rng::stream(seed, t as u64));
        let moved = state.apply_local_unitaries(&us)?;
        max_deviation = max_deviation.max((target.evaluate(&moved)? - baseline).norm());
    }
    Ok(InvarianceReport {
        baseline,
        trials,
        max_deviation,
        pass: max_deviation <= CHECK_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::invariants::{parse_contraction, TANGLE_PATTERN};
    use crate::tensor::haar_random_state;

    #[test]
    fn kempe_i4_is_multiplicative() {
        let k = catalog::kempe1();
        let r = multiplicativity_check(&BuiltinName::I4_1.expr(), &k, &k).unwrap();
        assert!(r.pass);
        assert!((r.value_odot.re - (769.0f64 / 1369.0).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn i6_on_random_qubit_triples() {
        for seed in 0..3 {
            let a = haar_random_state(&[2, 2, 2], seed).unwrap();
            let b = haar_random_state(&[2, 2, 2], 100 + seed).unwrap();
            let r = multiplicativity_check(&BuiltinName::I6.expr(), &a, &b).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn tangle_is_gated_out() {
        let e = parse_contraction(TANGLE_PATTERN).unwrap();
        let g = catalog::ghz();
        assert!(matches!(
            multiplicativity_check(&e, &g, &g),
            Err(Error::NotSimpleForm(_))
        ));
    }

    #[test]
    fn invariance_examples() {
        let r = local_unitary_invariance_check(
            &InvariantTarget::Builtin(BuiltinName::I6),
            &catalog::ghz(),
            20,
            1,
        )
        .unwrap();
        assert!(r.pass);
        let r = local_unitary_invariance_check(&InvariantTarget::Tangle, &catalog::w(), 20, 2).unwrap();
        assert!(r.pass && r.baseline.norm() < 1e-12);
        let e = parse_contraction("psi[i,j,k]*psi*[m,j,k]*delta[i,m]").unwrap();
        let r = local_unitary_invariance_check(&InvariantTarget::Expr(e), &catalog::kempe2(), 20, 3)
            .unwrap();
        assert!(r.pass && (r.baseline.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbalanced_expression_is_not_invariant() {
        let e = parse_contraction("psi[i,j] * psi[i,j]").unwrap();
        let s = haar_random_state(&[2, 2], 4).unwrap();
        let r = local_unitary_invariance_check(&InvariantTarget::Expr(e), &s, 5, 0).unwrap();
        assert!(!r.pass);
    }
}
