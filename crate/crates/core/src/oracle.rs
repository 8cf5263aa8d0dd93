//! Independent estimators used to cross-check the solvers: Monte-Carlo lower
//! bounds on `E_k` and the trace-product maximization identity.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::monotones::{objective, ProjectorFrame, RankVector};
use crate::rng;
use crate::tensor::{PartyGrouping, StateTensor};

/// Best objective over `samples` Haar-random projector frames. Sample `i`
/// draws from stream `i` of `seed`, so the result does not depend on the
/// thread count.
pub fn sample_e(state: &StateTensor, ks: &RankVector, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidConfig("at least one sample is required".into()));
    }
    ks.validate(state.dims())?;
    (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let frame = ProjectorFrame::random(state.dims(), ks, &mut rng::stream(seed, i));
            objective(state, &frame)
        })
        .try_reduce(|| f64::NEG_INFINITY, |a, b| Ok(a.max(b)))
}

/// `max |tr A U B V .. G Z|` over unitaries, i.e. `Σ_j Π_ops σ_j(op)` with
/// each operator's singular values sorted decreasingly.
pub fn trace_product_max(ops: &[CMatrix]) -> Result<f64> {
    let first = ops
        .first()
        .ok_or_else(|| Error::ShapeMismatch("no operators given".into()))?;
    let side = first.nrows();
    for (i, op) in ops.iter().enumerate() {
        if op.nrows() != op.ncols() || op.nrows() != side {
            return Err(Error::ShapeMismatch(format!(
                "operator {i} is {}x{}, expected {side}x{side}",
                op.nrows(),
                op.ncols()
            )));
        }
    }
    let mut prod = vec![1.0; side];
    for op in ops {
        for (p, s) in prod.iter_mut().zip(linalg::singular_values_desc(op)) {
            *p *= s;
        }
    }
    Ok(prod.iter().sum())
}

/// Two-block `E_{k1,k2}` through the trace-product identity with operators
/// `ρ^{1/2}, P, ρ^{1/2}, Q`, where `ρ` is the first block's reduced density
/// operator and `P`, `Q` are coordinate projectors of ranks `k2` and `k1`
/// (capped at the first block's dimension).
pub fn bipartite_e_via_trace_product(
    state: &StateTensor,
    grouping: &PartyGrouping,
    k1: usize,
    k2: usize,
) -> Result<f64> {
    grouping.check_for(state.n_parties())?;
    if grouping.n_blocks() != 2 {
        return Err(Error::BadGrouping(format!(
            "need two blocks, got {}",
            grouping.n_blocks()
        )));
    }
    let coarse = state.coarse_grain(grouping)?;
    RankVector::new(vec![k1, k2]).validate(coarse.dims())?;
    let d1 = coarse.dims()[0];
    let rho = coarse.reduced_density(&[0])?;
    let root = linalg::psd_sqrt(rho.matrix());
    let p = linalg::coordinate_projector(d1, k2.min(d1));
    let q = linalg::coordinate_projector(d1, k1.min(d1));
    trace_product_max(&[root.clone(), p, root, q])
}

/// True iff `a` is weakly majorized by `b`: every decreasing partial sum of
/// `a` is at most the matching one of `b` plus `tol`. Vectors are
/// zero-padded to equal length.
pub fn weakly_majorized(a: &[f64], b: &[f64], tol: f64) -> bool {
    let n = a.len().max(b.len());
    let prep = |v: &[f64]| {
        let mut v = v.to_vec();
        v.resize(n, 0.0);
        v.sort_by(|x, y| y.total_cmp(x));
        v
    };
    let (a, b) = (prep(a), prep(b));
    let (mut pa, mut pb) = (0.0, 0.0);
    a.iter().zip(&b).all(|(x, y)| {
        pa += x;
        pb += y;
        pa <= pb + tol
    })
}

/// Checks `σ(AB) ≼_w σ(A)·σ(B)` for square matrices of equal side.
pub fn product_singular_values_weakly_majorized(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<bool> {
    trace_product_max(&[a.clone(), b.clone()])?;
    let lhs = linalg::singular_values_desc(&(a * b));
    let rhs: Vec<f64> = linalg::singular_values_desc(a)
        .iter()
        .zip(linalg::singular_values_desc(b))
        .map(|(x, y)| x * y)
        .collect();
    Ok(weakly_majorized(&lhs, &rhs, tol))
}
