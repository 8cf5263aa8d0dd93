//! Bipartite spectral monotones: trace powers, elementary symmetric
//! polynomials, majorization and Nielsen's partial sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{DensityOp, PartyGrouping, StateTensor};

const SUM_TOL: f64 = 1e-9;
const PARTIAL_SUM_TOL: f64 = 1e-12;
const ZERO_SYMMETRIC: f64 = 1e-12;

/// `X_k = Σ λ^k` for `k = 1..=dmax`.
pub fn trace_powers(spectrum: &[f64], dmax: usize) -> Vec<f64> {
    (1..=dmax)
        .map(|k| spectrum.iter().map(|l| l.powi(k as i32)).sum())
        .collect()
}

/// `X_k = tr ρ^k` for `k = 1..=dmax`, from the eigenvalues of `rho`.
pub fn trace_power_invariants(rho: &DensityOp, dmax: usize) -> Vec<f64> {
    trace_powers(&rho.eigenvalues(), dmax)
}

/// `S_1..S_dmax` of the given values.
pub fn elementary_symmetric(spectrum: &[f64], dmax: usize) -> Vec<f64> {
    let mut e = vec![0.0; dmax + 1];
    e[0] = 1.0;
    for &x in spectrum {
        for k in (1..=dmax).rev() {
            e[k] += x * e[k - 1];
        }
    }
    e.remove(0);
    e
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricMonotones {
    /// `S_1..S_dmax`.
    pub s: Vec<f64>,
    /// `S_k / S_{k-1}` for `k = 2..=dmax`; `None` where `S_{k-1}` vanishes.
    pub ratios: Vec<Option<f64>>,
}

pub fn symmetric_monotones(rho: &DensityOp, dmax: usize) -> SymmetricMonotones {
    let s = elementary_symmetric(&rho.eigenvalues(), dmax);
    let ratios = s
        .windows(2)
        .map(|w| (w[0].abs() > ZERO_SYMMETRIC).then(|| w[1] / w[0]))
        .collect();
    SymmetricMonotones { s, ratios }
}

/// True iff every decreasing partial sum of `a` is at least the matching one
/// of `b` (up to 1e-12). Shorter vectors are zero-padded; the totals must
/// agree within 1e-9.
pub fn majorizes(a: &[f64], b: &[f64]) -> Result<bool> {
    let n = a.len().max(b.len());
    let prep = |v: &[f64]| {
        let mut v = v.to_vec();
        v.resize(n, 0.0);
        v.sort_by(|x, y| y.total_cmp(x));
        v
    };
    let (a, b) = (prep(a), prep(b));
    let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
    if (sa - sb).abs() > SUM_TOL {
        return Err(Error::SumMismatch(sa, sb));
    }
    let (mut pa, mut pb) = (0.0, 0.0);
    for (x, y) in a.iter().zip(&b) {
        pa += x;
        pb += y;
        if pa < pb - PARTIAL_SUM_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `E_k = Σ_{i ≤ k} λ_i↓` over the squared Schmidt coefficients of a
/// two-block cut.
pub fn nielsen_e(state: &StateTensor, grouping: &PartyGrouping) -> Result<Vec<f64>> {
    let vals = state.schmidt_values(grouping)?;
    Ok(vals
        .iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect())
}
