//! Einstein summation of a [`ContractionExpr`] against a state.
//!
//! Factors are contracted pairwise, connected ones first. Each intermediate is a
//! row-major tensor whose axes carry index labels; labels shared by the two
//! operands are summed, everything else stays open.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{ONE, ZERO};
use crate::tensor::{permute_axes, StateTensor};

use super::expr::{ContractionExpr, FactorKind};

/// Imaginary parts above this are flagged on expressions expected to be real.
pub const IMAG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantValue {
    pub value: Complex64,
    /// `|Im value| > 1e-9` on a degree-balanced expression.
    pub imag_warning: bool,
}

impl InvariantValue {
    pub(crate) fn new(value: Complex64, expect_real: bool) -> Self {
        InvariantValue {
            value,
            imag_warning: expect_real && value.im.abs() > IMAG_TOL,
        }
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }
}

#[derive(Debug, Clone)]
struct Labeled {
    labels: Vec<String>,
    dims: Vec<usize>,
    data: Vec<Complex64>,
}

impl Labeled {
    /// Sums over axes that carry the same label twice.
    fn self_trace(mut self) -> Labeled {
        loop {
            let dup = (0..self.labels.len()).find_map(|a| {
                (a + 1..self.labels.len())
                    .find(|&b| self.labels[a] == self.labels[b])
                    .map(|b| (a, b))
            });
            let Some((a, b)) = dup else { return self };
            let rest: Vec<usize> = (0..self.labels.len()).filter(|&x| x != a && x != b).collect();
            let mut perm = rest.clone();
            perm.extend([a, b]);
            let d = self.dims[a];
            let moved = permute_axes(&self.data, &self.dims, &perm);
            let out_len = moved.len() / (d * d);
            let data = (0..out_len)
                .map(|o| (0..d).map(|i| moved[o * d * d + i * d + i]).sum())
                .collect();
            self = Labeled {
                labels: rest.iter().map(|&x| self.labels[x].clone()).collect(),
                dims: rest.iter().map(|&x| self.dims[x]).collect(),
                data,
            };
        }
    }

    fn contract(&self, other: &Labeled) -> Labeled {
        let shared: Vec<(usize, usize)> = self
            .labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| other.labels.iter().position(|m| m == l).map(|j| (i, j)))
            .collect();
        let free_a: Vec<usize> = (0..self.labels.len())
            .filter(|i| !shared.iter().any(|s| s.0 == *i))
            .collect();
        let free_b: Vec<usize> = (0..other.labels.len())
            .filter(|j| !shared.iter().any(|s| s.1 == *j))
            .collect();

        let perm_a: Vec<usize> = free_a.iter().copied().chain(shared.iter().map(|s| s.0)).collect();
        let perm_b: Vec<usize> = shared.iter().map(|s| s.1).chain(free_b.iter().copied()).collect();
        let a = permute_axes(&self.data, &self.dims, &perm_a);
        let b = permute_axes(&other.data, &other.dims, &perm_b);

        let m: usize = free_a.iter().map(|&i| self.dims[i]).product();
        let k: usize = shared.iter().map(|s| self.dims[s.0]).product();
        let n: usize = free_b.iter().map(|&j| other.dims[j]).product();
        let mut data = vec![ZERO; m * n];
        for r in 0..m {
            let row = &mut data[r * n..(r + 1) * n];
            for s in 0..k {
                let x = a[r * k + s];
                if x == ZERO {
                    continue;
                }
                for (o, &y) in row.iter_mut().zip(&b[s * n..(s + 1) * n]) {
                    *o += x * y;
                }
            }
        }

        Labeled {
            labels: free_a
                .iter()
                .map(|&i| self.labels[i].clone())
                .chain(free_b.iter().map(|&j| other.labels[j].clone()))
                .collect(),
            dims: free_a
                .iter()
                .map(|&i| self.dims[i])
                .chain(free_b.iter().map(|&j| other.dims[j]))
                .collect(),
            data,
        }
    }
}

fn factor_tensor(
    kind: FactorKind,
    indices: &[String],
    state: &StateTensor,
    conj: &[Complex64],
    index_dims: &HashMap<String, usize>,
) -> Labeled {
    let dims: Vec<usize> = indices.iter().map(|i| index_dims[i]).collect();
    let data = match kind {
        FactorKind::Psi => state.amps().to_vec(),
        FactorKind::PsiConj => conj.to_vec(),
        FactorKind::Delta => {
            let d = dims[0];
            (0..d * d)
                .map(|x| if x / d == x % d { ONE } else { ZERO })
                .collect()
        }
        FactorKind::Epsilon => vec![ZERO, ONE, -ONE, ZERO],
    };
    Labeled {
        labels: indices.to_vec(),
        dims,
        data,
    }
    .self_trace()
}

/// Absorbs every `δ[a,b]` with `a ≠ b` by renaming `b` to `a` elsewhere.
fn absorb_deltas(mut factors: Vec<(FactorKind, Vec<String>)>) -> Vec<(FactorKind, Vec<String>)> {
    while let Some(pos) = factors
        .iter()
        .position(|(k, ix)| *k == FactorKind::Delta && ix[0] != ix[1])
    {
        let (_, ix) = factors.remove(pos);
        for (_, other) in factors.iter_mut() {
            for name in other.iter_mut() {
                if *name == ix[1] {
                    *name = ix[0].clone();
                }
            }
        }
    }
    factors
}

/// Evaluates the full contraction of `expr` on `state`.
///
/// Factors are taken left to right, except that the next factor is the
/// leftmost one sharing an index with the running product when there is
/// one. This avoids building outer products of unconnected factors.
pub fn eval_contraction(expr: &ContractionExpr, state: &StateTensor) -> Result<InvariantValue> {
    let index_dims = expr.index_dims(state.dims())?;
    let conj: Vec<Complex64> = state.amps().iter().map(|z| z.conj()).collect();
    let mut pending = absorb_deltas(
        expr.factors()
            .iter()
            .map(|f| (f.kind, f.indices.clone()))
            .collect(),
    );
    let (kind, ix) = pending.remove(0);
    let mut acc = factor_tensor(kind, &ix, state, &conj, &index_dims);
    while !pending.is_empty() {
        let next = pending
            .iter()
            .position(|(_, ix)| ix.iter().any(|n| acc.labels.contains(n)))
            .unwrap_or(0);
        let (kind, ix) = pending.remove(next);
        acc = acc.contract(&factor_tensor(kind, &ix, state, &conj, &index_dims));
    }
    debug_assert!(acc.labels.is_empty());
    Ok(InvariantValue::new(acc.data[0], expr.is_degree_balanced()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::error::Error;
    use crate::invariants::parse_contraction;
    use crate::tensor::haar_random_state;

    fn eval(text: &str, s: &StateTensor) -> Complex64 {
        eval_contraction(&parse_contraction(text).unwrap(), s).unwrap().value
    }

    const I4_1: &str = "psi[i,j,k] * psi*[i,m,n] * psi[p,m,n] * psi*[p,j,k]";
    const I6: &str =
        "psi[i,j,k] * psi*[i,m,n] * psi[p,q,n] * psi*[p,j,s] * psi[r,m,s] * psi*[r,q,k]";

    #[test]
    fn normalization_pattern() {
        let s = haar_random_state(&[2, 3, 2], 11).unwrap();
        let v = eval("psi[i,j,k] * psi*[i,j,k]", &s);
        assert!((v - ONE).norm() < 1e-12);
    }

    #[test]
    fn ghz_purity_of_one_party() {
        assert!((eval(I4_1, &catalog::ghz()).re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn product_basis_state_gives_one() {
        let s = StateTensor::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        assert!((eval(I6, &s) - ONE).norm() < 1e-14);
    }

    #[test]
    fn delta_and_self_traces() {
        let s = haar_random_state(&[3, 2], 2).unwrap();
        let direct = eval("psi[i,j] * psi*[i,j]", &s);
        let via_delta = eval("psi[i,j] * psi*[m,j] * delta[i,m]", &s);
        assert!((direct - via_delta).norm() < 1e-14);
        let chained = eval("psi[i,j] * psi*[m,n] * delta[i,a] * delta[a,m] * delta[j,n]", &s);
        assert!((direct - chained).norm() < 1e-14);
        // both indices of one factor summed against each other
        let t = StateTensor::from_real(vec![2, 2], &[0.5, 0.1, 0.2, 0.7]).unwrap();
        let traced = eval("psi[i,i] * psi*[j,j]", &t);
        assert!((traced.re - 1.44).abs() < 1e-14);
    }

    #[test]
    fn unbound_delta_loop_is_rejected() {
        let s = haar_random_state(&[2, 2], 1).unwrap();
        let e = parse_contraction("psi[i,j] * psi*[i,j] * delta[a,b] * delta[a,b]").unwrap();
        assert!(matches!(eval_contraction(&e, &s), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn eps_gives_the_two_qubit_concurrence_amplitude() {
        // Σ ψ_ij ψ_kl ε_ik ε_jl = 2 det ψ
        let s = StateTensor::from_real(vec![2, 2], &[0.1, 0.2, 0.3, 0.4]).unwrap();
        let v = eval("psi[i,j] * psi[k,l] * eps[i,k] * eps[j,l]", &s);
        assert!((v.re - 2.0 * (0.1 * 0.4 - 0.2 * 0.3)).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn slot_count_must_match_state() {
        let e = parse_contraction("psi[i,j] * psi*[i,j]").unwrap();
        assert!(matches!(
            eval_contraction(&e, &catalog::ghz()),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
