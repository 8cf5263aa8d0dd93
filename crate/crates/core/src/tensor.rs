//! Party-structured pure states, density operators and the operations on
//! them: partial traces, Schmidt spectra, the collective `⊙` product, local
//! unitaries and single-party instruments.
//!
//! Amplitudes are stored row-major, last party fastest: for dims
//! `[d_0, .., d_{N-1}]` the basis state `|i_0 .. i_{N-1}⟩` lives at offset
//! `Σ_p i_p · Π_{q>p} d_q`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::rng;

/// Tolerance on Hermiticity and on the least eigenvalue of density operators.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Tolerance on `U†U = I` for local unitaries.
pub const UNITARY_TOL: f64 = 1e-10;
/// Tolerance on `Σ A†A ≤ I` for instruments and on ensemble weights.
pub const WEIGHT_TOL: f64 = 1e-9;

pub(crate) fn row_major_strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for p in (0..dims.len().saturating_sub(1)).rev() {
        strides[p] = strides[p + 1] * dims[p + 1];
    }
    strides
}

/// Reorders the axes of a row-major tensor. Output axis `j` is input axis
/// `perm[j]`.
pub(crate) fn permute_axes<T: Copy>(data: &[T], dims: &[usize], perm: &[usize]) -> Vec<T> {
    debug_assert_eq!(dims.len(), perm.len());
    let n = dims.len();
    let len = data.len();
    if n == 0 {
        return data.to_vec();
    }
    let in_strides = row_major_strides(dims);
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let steps: Vec<usize> = perm.iter().map(|&p| in_strides[p]).collect();
    let mut out = Vec::with_capacity(len);
    let mut idx = vec![0usize; n];
    let mut src = 0usize;
    for _ in 0..len {
        out.push(data[src]);
        for j in (0..n).rev() {
            idx[j] += 1;
            src += steps[j];
            if idx[j] < out_dims[j] {
                break;
            }
            src -= steps[j] * out_dims[j];
            idx[j] = 0;
        }
    }
    out
}

/// Applies `m` (shape `r × dims[axis]`) to one axis of a row-major tensor.
/// The result has `dims[axis]` replaced by `r`.
pub(crate) fn apply_on_axis(
    data: &[Complex64],
    dims: &[usize],
    axis: usize,
    m: &CMatrix,
) -> Vec<Complex64> {
    let d = dims[axis];
    debug_assert_eq!(m.ncols(), d);
    let rows = m.nrows();
    let left: usize = dims[..axis].iter().product();
    let right: usize = dims[axis + 1..].iter().product();
    let mut out = vec![ZERO; left * rows * right];
    for l in 0..left {
        let src = &data[l * d * right..(l + 1) * d * right];
        let dst = &mut out[l * rows * right..(l + 1) * rows * right];
        for r in 0..rows {
            let row = &mut dst[r * right..(r + 1) * right];
            for c in 0..d {
                let coef = m[(r, c)];
                if coef == ZERO {
                    continue;
                }
                let col = &src[c * right..(c + 1) * right];
                for (o, &x) in row.iter_mut().zip(col) {
                    *o += coef * x;
                }
            }
        }
    }
    out
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.iter().any(|&d| d < 1) {
        return Err(Error::BadDimension(dims.to_vec()));
    }
    Ok(())
}

/// Sorted, deduplicated copy of a party set; rejects repeats and out-of-range
/// entries.
fn normalize_parties(set: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut v = set.to_vec();
    v.sort_unstable();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::BadPartySet(format!("repeated party in {set:?}")));
    }
    if let Some(&p) = v.iter().find(|&&p| p >= n) {
        return Err(Error::BadPartySet(format!(
            "party {p} out of range for {n} parties"
        )));
    }
    Ok(v)
}

fn complement(set: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|p| !set.contains(p)).collect()
}

/// For every basis index of the full space, its offsets inside the kept and
/// the traced subsystems.
fn split_offsets(dims: &[usize], kept: &[usize]) -> Vec<(usize, usize)> {
    let n = dims.len();
    let traced = complement(kept, n);
    let kept_dims: Vec<usize> = kept.iter().map(|&p| dims[p]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&p| dims[p]).collect();
    let ks = row_major_strides(&kept_dims);
    let ts = row_major_strides(&traced_dims);
    let mut kept_stride = vec![0; n];
    let mut traced_stride = vec![0; n];
    for (j, &p) in kept.iter().enumerate() {
        kept_stride[p] = ks[j];
    }
    for (j, &p) in traced.iter().enumerate() {
        traced_stride[p] = ts[j];
    }
    let total: usize = dims.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; n];
    for _ in 0..total {
        let k = (0..n).map(|p| digits[p] * kept_stride[p]).sum();
        let t = (0..n).map(|p| digits[p] * traced_stride[p]).sum();
        out.push((k, t));
        for p in (0..n).rev() {
            digits[p] += 1;
            if digits[p] < dims[p] {
                break;
            }
            digits[p] = 0;
        }
    }
    out
}

/// Pure state of `N` parties. Normalization is not required.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTensor {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
    label: Option<String>,
}

impl StateTensor {
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        check_dims(&dims)?;
        let expected: usize = dims.iter().product();
        if amps.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: amps.len(),
            });
        }
        Ok(StateTensor {
            dims,
            amps,
            label: None,
        })
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(dims: Vec<usize>, amps: &[f64]) -> Result<Self> {
        Self::new(dims, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|digits⟩`.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        check_dims(&dims)?;
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(&i, &d)| i >= d) {
            return Err(Error::DimensionMismatch(format!(
                "basis digits {digits:?} do not fit dims {dims:?}"
            )));
        }
        let strides = row_major_strides(&dims);
        let mut amps = vec![ZERO; dims.iter().product()];
        amps[digits.iter().zip(&strides).map(|(i, s)| i * s).sum::<usize>()] = ONE;
        Self::new(dims, amps)
    }

    /// Product state `v_0 ⊗ v_1 ⊗ ..` of single-party vectors.
    pub fn product(vectors: &[Vec<Complex64>]) -> Result<Self> {
        let dims: Vec<usize> = vectors.iter().map(Vec::len).collect();
        check_dims(&dims)?;
        let mut amps = vec![ONE];
        for v in vectors {
            amps = amps
                .iter()
                .flat_map(|&a| v.iter().map(move |&x| a * x))
                .collect();
        }
        Self::new(dims, amps)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    /// `Σ |ψ_i|²`.
    pub fn squared_norm(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        StateTensor {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|&a| a * factor).collect(),
            label: self.label.clone(),
        }
    }

    /// Unit-norm copy. The zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.squared_norm().sqrt();
        if n == 0.0 {
            return self.clone();
        }
        self.scaled(Complex64::new(1.0 / n, 0.0))
    }

    /// Amplitudes as a matrix whose rows run over the parties in `first`
    /// (in the given order) and whose columns run over the rest.
    pub fn bipartite_matrix(&self, first: &[usize]) -> Result<CMatrix> {
        let n = self.n_parties();
        let mut seen = first.to_vec();
        seen.sort_unstable();
        normalize_parties(&seen, n)?;
        let rest = complement(&seen, n);
        let perm: Vec<usize> = first.iter().chain(&rest).copied().collect();
        let rows: usize = first.iter().map(|&p| self.dims[p]).product();
        let cols = self.total_dim() / rows;
        let data = permute_axes(&self.amps, &self.dims, &perm);
        Ok(CMatrix::from_row_slice(rows, cols, &data))
    }

    /// Reduced density operator on the parties in `keep` (taken in increasing
    /// order). Its trace equals the squared norm of the state.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityOp> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let keep = normalize_parties(keep, self.n_parties())?;
        let m = self.bipartite_matrix(&keep)?;
        let rho = linalg::symmetrize(&(&m * m.adjoint()));
        Ok(DensityOp {
            dims: keep.iter().map(|&p| self.dims[p]).collect(),
            matrix: rho,
        })
    }

    /// Collective product: party `i` of the result is the pair
    /// (party `i` of `self`, party `i` of `other`), with `self` as the slow
    /// index. Dims become `d_i · e_i`.
    pub fn odot(&self, other: &StateTensor) -> Result<StateTensor> {
        let n = self.n_parties();
        if other.n_parties() != n {
            return Err(Error::PartyCountMismatch {
                left: n,
                right: other.n_parties(),
            });
        }
        // outer product as a 2N-index tensor (a_0..a_{N-1}, b_0..b_{N-1})
        let outer: Vec<Complex64> = self
            .amps
            .iter()
            .flat_map(|&a| other.amps.iter().map(move |&b| a * b))
            .collect();
        let joint_dims: Vec<usize> = self.dims.iter().chain(&other.dims).copied().collect();
        // interleave to (a_0, b_0, a_1, b_1, ..)
        let perm: Vec<usize> = (0..n).flat_map(|i| [i, n + i]).collect();
        let amps = permute_axes(&outer, &joint_dims, &perm);
        let dims = self.dims.iter().zip(&other.dims).map(|(d, e)| d * e).collect();
        let label = match (self.label(), other.label()) {
            (Some(a), Some(b)) => Some(format!("{a}⊙{b}")),
            _ => None,
        };
        Ok(StateTensor { dims, amps, label })
    }

    /// Merges the parties of each block into one party. Blocks are laid out in
    /// the order given, and parties inside a block in their listed order.
    pub fn coarse_grain(&self, grouping: &PartyGrouping) -> Result<StateTensor> {
        grouping.check_for(self.n_parties())?;
        let perm: Vec<usize> = grouping.blocks.iter().flatten().copied().collect();
        let amps = permute_axes(&self.amps, &self.dims, &perm);
        Ok(StateTensor {
            dims: grouping.block_dims(&self.dims),
            amps,
            label: self.label.clone(),
        })
    }

    /// Decreasing eigenvalues of the reduced density operator of the first
    /// block of a two-block grouping (the squared Schmidt coefficients, padded
    /// with zeros up to the first block's dimension).
    pub fn schmidt_values(&self, grouping: &PartyGrouping) -> Result<Vec<f64>> {
        grouping.check_for(self.n_parties())?;
        if grouping.n_blocks() != 2 {
            return Err(Error::BadGrouping(format!(
                "Schmidt values need exactly two blocks, got {}",
                grouping.n_blocks()
            )));
        }
        let m = self.bipartite_matrix(&grouping.blocks[0])?;
        let rows = m.nrows();
        let mut vals: Vec<f64> = linalg::singular_values_desc(&m)
            .into_iter()
            .map(|s| s * s)
            .collect();
        vals.resize(rows, 0.0);
        Ok(vals)
    }

    /// Applies an arbitrary matrix to one party (no unitarity requirement).
    /// The party dimension becomes the matrix row count.
    pub fn apply_local(&self, party: usize, m: &CMatrix) -> Result<StateTensor> {
        if party >= self.n_parties() {
            return Err(Error::BadPartySet(format!("no party {party}")));
        }
        if m.ncols() != self.dims[party] {
            return Err(Error::DimensionMismatch(format!(
                "operator has {} columns, party {party} has dimension {}",
                m.ncols(),
                self.dims[party]
            )));
        }
        let amps = apply_on_axis(&self.amps, &self.dims, party, m);
        let mut dims = self.dims.clone();
        dims[party] = m.nrows();
        Ok(StateTensor {
            dims,
            amps,
            label: self.label.clone(),
        })
    }

    /// `(U_0 ⊗ .. ⊗ U_{N-1}) |ψ⟩`.
    pub fn apply_local_unitaries(&self, units: &[CMatrix]) -> Result<StateTensor> {
        if units.len() != self.n_parties() {
            return Err(Error::DimensionMismatch(format!(
                "{} unitaries for {} parties",
                units.len(),
                self.n_parties()
            )));
        }
        for (p, u) in units.iter().enumerate() {
            if u.nrows() != self.dims[p] || u.ncols() != self.dims[p] {
                return Err(Error::DimensionMismatch(format!(
                    "unitary {p} is {}x{}, party dimension {}",
                    u.nrows(),
                    u.ncols(),
                    self.dims[p]
                )));
            }
            let dev = linalg::isometry_deviation(u);
            if dev > UNITARY_TOL {
                return Err(Error::NonUnitary {
                    party: p,
                    deviation: dev,
                });
            }
        }
        let mut amps = self.amps.clone();
        for (p, u) in units.iter().enumerate() {
            amps = apply_on_axis(&amps, &self.dims, p, u);
        }
        Ok(StateTensor {
            dims: self.dims.clone(),
            amps,
            label: self.label.clone(),
        })
    }

    /// Outcomes `(I ⊗ .. ⊗ A_j ⊗ .. ⊗ I)|ψ⟩` of a single-party instrument,
    /// one unnormalized state per Kraus operator.
    pub fn apply_unilocal_kraus(&self, party: usize, kraus: &[CMatrix]) -> Result<Ensemble> {
        if party >= self.n_parties() {
            return Err(Error::BadPartySet(format!("no party {party}")));
        }
        let d = self.dims[party];
        let mut sum = CMatrix::zeros(d, d);
        for a in kraus {
            if a.nrows() != d || a.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator is {}x{}, party {party} has dimension {d}",
                    a.nrows(),
                    a.ncols()
                )));
            }
            sum += a.adjoint() * a;
        }
        let slack = CMatrix::identity(d, d) - sum;
        let least = linalg::eigvalsh_desc(&slack).last().copied().unwrap_or(0.0);
        if least < -WEIGHT_TOL {
            return Err(Error::NotTraceNonincreasing(least));
        }
        let members = kraus
            .iter()
            .map(|a| self.apply_local(party, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble::Pure(members))
    }

    pub fn to_json(&self) -> String {
        let file = StateFile {
            label: self.label.clone().unwrap_or_default(),
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        };
        serde_json::to_string_pretty(&file).expect("state serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<StateTensor> {
        let file: StateFile = serde_json::from_str(text)?;
        let amps = file
            .amps
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        if file.amps.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Json("non-finite amplitude".into()));
        }
        let state = StateTensor::new(file.dims, amps)?;
        Ok(if file.label.is_empty() {
            state
        } else {
            state.with_label(file.label)
        })
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<StateTensor> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// On-disk state format: `{"label", "dims", "amps": [[re, im], ..]}`.
#[derive(Debug, Serialize, Deserialize)]
struct StateFile {
    #[serde(default)]
    label: String,
    dims: Vec<usize>,
    amps: Vec<[f64; 2]>,
}

/// Haar-random unit vector on the full space of the given dims.
pub fn haar_random_state(dims: &[usize], seed: u64) -> Result<StateTensor> {
    haar_random_state_from(dims, &mut rng::stream(seed, 0))
}

pub fn haar_random_state_from(dims: &[usize], rng: &mut rng::Stream) -> Result<StateTensor> {
    check_dims(dims)?;
    let len = dims.iter().product();
    let amps = rng::complex_gaussian_vec(rng, len);
    Ok(StateTensor::new(dims.to_vec(), amps)?.normalized())
}

/// Haar-random `d × k` isometry.
pub fn haar_random_frame(d: usize, k: usize, seed: u64) -> Result<CMatrix> {
    haar_random_frame_from(d, k, &mut rng::stream(seed, 0))
}

pub fn haar_random_frame_from(d: usize, k: usize, rng: &mut rng::Stream) -> Result<CMatrix> {
    if k < 1 || k > d {
        return Err(Error::BadRank(format!("frame rank {k} for dimension {d}")));
    }
    Ok(linalg::haar_isometry(d, k, rng))
}

/// One Haar-random unitary per party.
pub fn haar_local_unitaries(dims: &[usize], rng: &mut rng::Stream) -> Vec<CMatrix> {
    dims.iter().map(|&d| linalg::haar_isometry(d, d, rng)).collect()
}

/// Hermitian positive semidefinite operator on a party-structured space.
/// The trace may be below one.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOp {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl DensityOp {
    pub fn new(dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        check_dims(&dims)?;
        let side: usize = dims.iter().product();
        if matrix.nrows() != side || matrix.ncols() != side {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, dims {dims:?} need side {side}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let dev = linalg::hermitian_deviation(&matrix);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let least = linalg::eigvalsh_desc(&matrix).last().copied().unwrap_or(0.0);
        if least < -HERMITIAN_TOL {
            return Err(Error::NotPositive(least));
        }
        Ok(DensityOp {
            dims,
            matrix: linalg::symmetrize(&matrix),
        })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_state(state: &StateTensor) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amps());
        DensityOp {
            dims: state.dims().to_vec(),
            matrix: &v * v.adjoint(),
        }
    }

    /// Single-party diagonal operator with the given spectrum.
    pub fn from_spectrum(spectrum: &[f64]) -> Result<Self> {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            spectrum.len(),
            spectrum.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        Self::new(vec![spectrum.len()], m)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Decreasing eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh_desc(&self.matrix)
    }

    /// Traces out the parties in `traced`, which must leave at least one party.
    pub fn partial_trace(&self, traced: &[usize]) -> Result<DensityOp> {
        let n = self.n_parties();
        let traced = normalize_parties(traced, n)?;
        if traced.len() == n {
            return Err(Error::BadPartySet(
                "cannot trace out every party; use the full trace".into(),
            ));
        }
        let kept = complement(&traced, n);
        let kept_dims: Vec<usize> = kept.iter().map(|&p| self.dims[p]).collect();
        let side: usize = kept_dims.iter().product();
        let groups = group_by_traced(&self.dims, &kept);
        let mut out = CMatrix::zeros(side, side);
        for group in &groups {
            for &(i, ki) in group {
                for &(j, kj) in group {
                    out[(ki, kj)] += self.matrix[(i, j)];
                }
            }
        }
        Ok(DensityOp {
            dims: kept_dims,
            matrix: linalg::symmetrize(&out),
        })
    }
}

/// Full-space basis indices grouped by their traced-subsystem offset; each
/// entry carries `(full index, kept offset)`.
fn group_by_traced(dims: &[usize], kept: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let offsets = split_offsets(dims, kept);
    let traced_side: usize = complement(kept, dims.len())
        .iter()
        .map(|&p| dims[p])
        .product();
    let mut groups = vec![Vec::new(); traced_side];
    for (i, &(k, t)) in offsets.iter().enumerate() {
        groups[t].push((i, k));
    }
    groups
}

/// Lifts an operator acting on the parties `kept` (in increasing order) to the
/// full space by tensoring with the identity on the remaining parties.
pub fn embed_with_identity(op: &CMatrix, full_dims: &[usize], kept: &[usize]) -> Result<CMatrix> {
    let kept = normalize_parties(kept, full_dims.len())?;
    let side: usize = kept.iter().map(|&p| full_dims[p]).product();
    if op.nrows() != side || op.ncols() != side {
        return Err(Error::DimensionMismatch(format!(
            "operator side {} does not match kept parties (side {side})",
            op.nrows()
        )));
    }
    let total: usize = full_dims.iter().product();
    let mut out = CMatrix::zeros(total, total);
    for group in group_by_traced(full_dims, &kept) {
        for &(i, ki) in &group {
            for &(j, kj) in &group {
                out[(i, j)] = op[(ki, kj)];
            }
        }
    }
    Ok(out)
}

/// Ensemble represented by unnormalized members; the weight of a member is
/// its squared norm (pure) or trace (mixed).
#[derive(Debug, Clone, PartialEq)]
pub enum Ensemble {
    Pure(Vec<StateTensor>),
    Mixed(Vec<DensityOp>),
}

impl Ensemble {
    pub fn len(&self) -> usize {
        match self {
            Ensemble::Pure(v) => v.len(),
            Ensemble::Mixed(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn weights(&self) -> Vec<f64> {
        match self {
            Ensemble::Pure(v) => v.iter().map(StateTensor::squared_norm).collect(),
            Ensemble::Mixed(v) => v.iter().map(DensityOp::trace).collect(),
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.weights().iter().sum()
    }

    /// Checks that a normalized ensemble does not carry more than unit weight.
    pub fn check_normalized(&self) -> Result<()> {
        let w = self.total_weight();
        if w > 1.0 + WEIGHT_TOL {
            return Err(Error::Overweight(w));
        }
        Ok(())
    }

    pub fn pure_members(&self) -> Result<&[StateTensor]> {
        match self {
            Ensemble::Pure(v) => Ok(v),
            Ensemble::Mixed(_) => Err(Error::NotPure),
        }
    }
}

/// Ordered partition of the parties into nonempty blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartyGrouping {
    blocks: Vec<Vec<usize>>,
}

impl PartyGrouping {
    pub fn new(blocks: Vec<Vec<usize>>, n_parties: usize) -> Result<Self> {
        let g = PartyGrouping { blocks };
        g.check_for(n_parties)?;
        Ok(g)
    }

    /// Every party in its own block.
    pub fn trivial(n_parties: usize) -> Self {
        PartyGrouping {
            blocks: (0..n_parties).map(|p| vec![p]).collect(),
        }
    }

    /// Two blocks: `first` and the remaining parties in increasing order.
    pub fn split(first: &[usize], n_parties: usize) -> Result<Self> {
        let rest = complement(first, n_parties);
        Self::new(vec![first.to_vec(), rest], n_parties)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_dims(&self, dims: &[usize]) -> Vec<usize> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&p| dims[p]).product())
            .collect()
    }

    pub fn check_for(&self, n_parties: usize) -> Result<()> {
        if self.blocks.iter().any(Vec::is_empty) {
            return Err(Error::BadGrouping("empty block".into()));
        }
        let mut all: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        if all != (0..n_parties).collect::<Vec<_>>() {
            return Err(Error::BadGrouping(format!(
                "blocks {:?} do not partition {n_parties} parties",
                self.blocks
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn ghz() -> StateTensor {
        let h = 0.5f64.sqrt();
        StateTensor::from_real(vec![2, 2, 2], &[h, 0., 0., 0., 0., 0., 0., h]).unwrap()
    }

    fn w() -> StateTensor {
        let t = (1.0f64 / 3.0).sqrt();
        StateTensor::from_real(vec![2, 2, 2], &[0., t, t, 0., t, 0., 0., 0.]).unwrap()
    }

    fn assert_matrix_close(a: &CMatrix, b: &CMatrix, tol: f64) {
        assert_eq!(a.shape(), b.shape());
        let diff = (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff <= tol, "max abs diff {diff:e} > {tol:e}");
    }

    fn diag(v: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            v.len(),
            v.iter().map(|&x| c(x)),
        ))
    }

    #[test]
    fn new_state_checks_length_and_dims() {
        assert_eq!(
            StateTensor::new(vec![2, 2], vec![ONE; 3]),
            Err(Error::LengthMismatch {
                expected: 4,
                got: 3
            })
        );
        assert!(matches!(
            StateTensor::new(vec![2, 0], vec![]),
            Err(Error::BadDimension(_))
        ));
        let q = StateTensor::from_real(vec![2], &[1.0, 0.0]).unwrap();
        assert_eq!(q.squared_norm(), 1.0);
        assert!((ghz().squared_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn squared_norm_is_homogeneous() {
        let s = ghz();
        assert!((s.scaled(c(0.5)).squared_norm() - 0.25 * s.squared_norm()).abs() < 1e-15);
        let zero = StateTensor::new(vec![2, 2], vec![ZERO; 4]).unwrap();
        assert_eq!(zero.squared_norm(), 0.0);
    }

    #[test]
    fn reduced_density_examples() {
        let r = ghz().reduced_density(&[0]).unwrap();
        assert_matrix_close(r.matrix(), &diag(&[0.5, 0.5]), 1e-15);

        let prod = StateTensor::basis(vec![2, 2], &[0, 0]).unwrap();
        assert_matrix_close(
            prod.reduced_density(&[0]).unwrap().matrix(),
            &diag(&[1.0, 0.0]),
            0.0,
        );

        // W on party 3: |0⟩ weight from |010⟩,|100⟩, |1⟩ weight from |001⟩
        let r3 = w().reduced_density(&[2]).unwrap();
        assert_matrix_close(r3.matrix(), &diag(&[2.0 / 3.0, 1.0 / 3.0]), 1e-15);

        assert_eq!(ghz().reduced_density(&[]), Err(Error::EmptyKeepSet));
    }

    #[test]
    fn partial_trace_examples() {
        let a = DensityOp::new(vec![2], diag(&[0.7, 0.3])).unwrap();
        let b = DensityOp::new(vec![3], diag(&[0.2, 0.3, 0.1])).unwrap();
        let ab = DensityOp::new(vec![2, 3], a.matrix().kronecker(b.matrix())).unwrap();
        let out = ab.partial_trace(&[1]).unwrap();
        assert_matrix_close(out.matrix(), &a.matrix().scale(0.6), 1e-15);

        let g = DensityOp::from_state(&ghz());
        assert_matrix_close(
            g.partial_trace(&[1, 2]).unwrap().matrix(),
            &diag(&[0.5, 0.5]),
            1e-15,
        );
        assert!(matches!(
            g.partial_trace(&[0, 1, 2]),
            Err(Error::BadPartySet(_))
        ));
    }

    #[test]
    fn partial_trace_matches_reduced_density() {
        let s = haar_random_state(&[2, 3, 2], 11).unwrap();
        let rho = DensityOp::from_state(&s);
        let a = rho.partial_trace(&[1]).unwrap();
        let b = s.reduced_density(&[0, 2]).unwrap();
        assert_matrix_close(a.matrix(), b.matrix(), 1e-13);
    }

    #[test]
    fn odot_interleaves_parties() {
        let a = StateTensor::basis(vec![2, 2, 2], &[1, 0, 1]).unwrap();
        let b = StateTensor::basis(vec![2, 2, 2], &[0, 1, 1]).unwrap();
        let ab = a.odot(&b).unwrap();
        assert_eq!(ab.dims(), &[4, 4, 4]);
        // merged digits (1*2+0, 0*2+1, 1*2+1) = (2, 1, 3)
        assert_eq!(ab, StateTensor::basis(vec![4, 4, 4], &[2, 1, 3]).unwrap());

        let two = StateTensor::new(vec![2, 2], vec![ONE; 4]).unwrap();
        assert!(matches!(
            a.odot(&two),
            Err(Error::PartyCountMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn odot_with_product_zero_state_keeps_norm() {
        let a = haar_random_state(&[2, 3, 2], 4).unwrap().scaled(c(0.7));
        let zeros = StateTensor::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        let ab = a.odot(&zeros).unwrap();
        assert!((ab.squared_norm() - a.squared_norm()).abs() < 1e-14);
    }

    #[test]
    fn schmidt_value_examples() {
        let g = PartyGrouping::split(&[0], 3).unwrap();
        let s = ghz().schmidt_values(&g).unwrap();
        assert!((s[0] - 0.5).abs() < 1e-15 && (s[1] - 0.5).abs() < 1e-15);

        let s = w().schmidt_values(&g).unwrap();
        assert!((s[0] - 2.0 / 3.0).abs() < 1e-14 && (s[1] - 1.0 / 3.0).abs() < 1e-14);

        let prod = StateTensor::basis(vec![2, 3], &[1, 2]).unwrap();
        let s = prod
            .schmidt_values(&PartyGrouping::split(&[1], 2).unwrap())
            .unwrap();
        assert_eq!(s.len(), 3);
        assert!((s[0] - 1.0).abs() < 1e-15 && s[1].abs() < 1e-15);

        assert!(matches!(
            ghz().schmidt_values(&PartyGrouping::trivial(3)),
            Err(Error::BadGrouping(_))
        ));
    }

    #[test]
    fn local_unitaries_validate_and_preserve() {
        let s = haar_random_state(&[2, 3], 5).unwrap();
        let ids = vec![CMatrix::identity(2, 2), CMatrix::identity(3, 3)];
        assert_eq!(s.apply_local_unitaries(&ids).unwrap(), s);

        let mut bad = ids.clone();
        bad[1][(0, 0)] = c(2.0);
        assert!(matches!(
            s.apply_local_unitaries(&bad),
            Err(Error::NonUnitary { party: 1, .. })
        ));
        let wrong = vec![CMatrix::identity(2, 2), CMatrix::identity(2, 2)];
        assert!(matches!(
            s.apply_local_unitaries(&wrong),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn kraus_examples() {
        let s = ghz();
        let ens = s.apply_unilocal_kraus(0, &[CMatrix::identity(2, 2)]).unwrap();
        assert_eq!(ens, Ensemble::Pure(vec![s.clone()]));

        let p0 = diag(&[1.0, 0.0]);
        let p1 = diag(&[0.0, 1.0]);
        let ens = s.apply_unilocal_kraus(0, &[p0, p1]).unwrap();
        let w = ens.weights();
        assert!((w[0] - 0.5).abs() < 1e-15 && (w[1] - 0.5).abs() < 1e-15);

        let too_big = vec![CMatrix::identity(2, 2), diag(&[0.5, 0.0])];
        assert!(matches!(
            s.apply_unilocal_kraus(1, &too_big),
            Err(Error::NotTraceNonincreasing(_))
        ));
    }

    #[test]
    fn kraus_from_isometry_preserves_weight() {
        // split a 4x2 isometry into two 2x2 Kraus operators
        let v = haar_random_frame(4, 2, 8).unwrap();
        let a0 = v.rows(0, 2).into_owned();
        let a1 = v.rows(2, 2).into_owned();
        let s = haar_random_state(&[2, 2, 2], 9).unwrap();
        let ens = s.apply_unilocal_kraus(1, &[a0, a1]).unwrap();
        assert!((ens.total_weight() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn haar_frames() {
        let u = haar_random_frame(2, 2, 1).unwrap();
        assert!(linalg::isometry_deviation(&u) < 1e-12);
        assert_eq!(u.shape(), (2, 2));
        let v = haar_random_frame(4, 2, 1).unwrap();
        assert!(linalg::isometry_deviation(&v) < 1e-12);
        assert_eq!(haar_random_frame(4, 2, 1).unwrap(), v);
        assert!(matches!(haar_random_frame(2, 3, 1), Err(Error::BadRank(_))));
        assert_eq!(
            haar_random_state(&[2, 3], 77).unwrap(),
            haar_random_state(&[2, 3], 77).unwrap()
        );
    }

    #[test]
    fn coarse_grain_merges_blocks() {
        let s = haar_random_state(&[2, 3, 2], 3).unwrap();
        assert_eq!(s.coarse_grain(&PartyGrouping::trivial(3)).unwrap(), s);
        let g = PartyGrouping::new(vec![vec![0, 1], vec![2]], 3).unwrap();
        let cg = s.coarse_grain(&g).unwrap();
        assert_eq!(cg.dims(), &[6, 2]);
        assert_eq!(cg.amps(), s.amps());
        assert!(PartyGrouping::new(vec![vec![0], vec![0, 1, 2]], 3).is_err());
        assert!(PartyGrouping::new(vec![vec![0], vec![]], 1).is_err());
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let s = haar_random_state(&[2, 3], 2).unwrap().with_label("r");
        let back = StateTensor::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"label": "x", "dims": [2, 2], "amps": [[1, 0], [0, 0], [0, 0]]}"#;
        assert!(matches!(
            StateTensor::from_json(bad),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(StateTensor::from_json("{"), Err(Error::Json(_))));
    }

    #[test]
    fn density_op_validation() {
        let mut m = diag(&[0.5, 0.5]);
        m[(0, 1)] = c(0.1);
        assert!(matches!(
            DensityOp::new(vec![2], m),
            Err(Error::NotHermitian(_))
        ));
        assert!(matches!(
            DensityOp::new(vec![2], diag(&[1.0, -0.1])),
            Err(Error::NotPositive(_))
        ));
        let sub = DensityOp::new(vec![2], diag(&[0.2, 0.1])).unwrap();
        assert!((sub.trace() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn ensemble_weight_check() {
        let s = ghz();
        let ok = Ensemble::Pure(vec![s.scaled(c(0.5)), s.scaled(c(0.5))]);
        assert!(ok.check_normalized().is_ok());
        let heavy = Ensemble::Pure(vec![s.clone(), s.clone()]);
        assert!(matches!(heavy.check_normalized(), Err(Error::Overweight(_))));
        let mixed = Ensemble::Mixed(vec![DensityOp::from_state(&s)]);
        assert_eq!(mixed.pure_members(), Err(Error::NotPure));
    }

    #[test]
    fn embed_with_identity_matches_kronecker() {
        let mut rng = rng::stream(1, 1);
        let op = CMatrix::from_fn(2, 2, |_, _| rng::complex_gaussian(&mut rng));
        // identity on party 0, op on party 1 of dims [3, 2]
        let full = embed_with_identity(&op, &[3, 2], &[1]).unwrap();
        assert_matrix_close(&full, &CMatrix::identity(3, 3).kronecker(&op), 0.0);
    }
}
