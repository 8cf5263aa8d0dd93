//! Dense complex linear-algebra helpers built on `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::rng::{complex_gaussian, Stream};

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `(M + M†) / 2`.
pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entrywise deviation of `m` from its adjoint.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entrywise deviation of `V†V` from the identity.
pub fn isometry_deviation(v: &CMatrix) -> f64 {
    let g = v.adjoint() * v;
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((g[(i, j)] - target).norm());
        }
    }
    worst
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in decreasing
/// order; column `j` of the returned matrix belongs to eigenvalue `j`.
/// The input is symmetrized first.
pub fn eigh_desc(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let eig = symmetrize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, decreasing.
pub fn eigvalsh_desc(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = symmetrize(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Singular values, decreasing.
pub fn singular_values_desc(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Principal square root of a positive semidefinite matrix. Negative
/// eigenvalues from round-off are clamped to zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = eigh_desc(m);
    let roots = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0)),
    ));
    &vecs * roots * vecs.adjoint()
}

/// `d × k` matrix with orthonormal columns drawn from the Haar measure
/// (QR of a complex Gaussian matrix with the phases of `R` removed).
pub fn haar_isometry(d: usize, k: usize, rng: &mut Stream) -> CMatrix {
    assert!(k <= d && k >= 1);
    let g = CMatrix::from_fn(d, k, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..k {
        let rjj = r[(j, j)];
        let norm = rjj.norm();
        if norm > 0.0 {
            let phase = rjj / norm;
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// The first `k` columns of the identity, `d × k`.
pub fn identity_frame(d: usize, k: usize) -> CMatrix {
    CMatrix::from_fn(d, k, |i, j| if i == j { ONE } else { ZERO })
}

/// Rank-`k` coordinate projector `diag(1,..,1,0,..,0)` of side `d`.
pub fn coordinate_projector(d: usize, k: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| if i == j && i < k { ONE } else { ZERO })
}
