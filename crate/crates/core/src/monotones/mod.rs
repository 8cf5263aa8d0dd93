//! Projector monotones `E_k`: the largest squared norm of the projection of
//! a state onto a product of local subspaces of dimensions `k_1, .., k_N`.
//!
//! When at most one party is restricted the problem is bipartite and the
//! value is the sum of the largest eigenvalues of a reduced density operator.
//! Otherwise [`solve_e`] runs cyclic coordinate ascent: with every other
//! frame fixed, the best frame for party `i` spans the top-`k_i` eigenvectors
//! of the party-`i` reduced density operator of the partially projected
//! state. Each step is optimal for its subproblem, so the objective never
//! decreases. Several starts are run and the best is kept; the result is a
//! lower bound on `E_k` certified by the returned frames.

mod spectral;

pub use spectral::{
    elementary_symmetric, majorizes, nielsen_e, symmetric_monotones, trace_power_invariants,
    trace_powers, SymmetricMonotones,
};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::rng;
use crate::tensor::{apply_on_axis, permute_axes, Ensemble, PartyGrouping, StateTensor};

/// Restarts whose value lies within this distance of the best count as agreeing.
pub const AGREEMENT_TOL: f64 = 1e-8;
const DEGENERACY_TOL: f64 = 1e-10;
const FRAME_TOL: f64 = 1e-10;

/// Multi-index `(k_1, .., k_N)` of local projector ranks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RankVector(Vec<usize>);

impl RankVector {
    pub fn new(ks: Vec<usize>) -> Self {
        RankVector(ks)
    }

    pub fn ks(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks `1 ≤ k_i ≤ d_i` for every party.
    pub fn validate(&self, dims: &[usize]) -> Result<()> {
        if self.0.len() != dims.len() {
            return Err(Error::BadRank(format!(
                "{} ranks for {} parties",
                self.0.len(),
                dims.len()
            )));
        }
        for (i, (&k, &d)) in self.0.iter().zip(dims).enumerate() {
            if k < 1 || k > d {
                return Err(Error::BadRank(format!(
                    "rank {k} for party {} of dimension {d}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Componentwise product `(k_i · l_i)`, the ranks of `⊙`-product projectors.
    pub fn product(&self, other: &RankVector) -> RankVector {
        RankVector(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    /// Every rank vector for the given dims, in lexicographic order.
    pub fn all(dims: &[usize]) -> Vec<RankVector> {
        let mut out = vec![Vec::new()];
        for &d in dims {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    (1..=d).map(move |k| {
                        let mut v = prefix.clone();
                        v.push(k);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(RankVector).collect()
    }
}

impl fmt::Display for RankVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for RankVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::BadRank(format!("cannot parse rank `{t}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(RankVector)
    }
}

/// Per-party orthonormal column frames `V_i` (`d_i × k_i`); the projectors
/// are `Γ_i = V_i V_i†`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorFrame {
    frames: Vec<CMatrix>,
}

impl ProjectorFrame {
    pub fn new(frames: Vec<CMatrix>) -> Result<Self> {
        for (i, v) in frames.iter().enumerate() {
            if v.ncols() == 0 || v.ncols() > v.nrows() {
                return Err(Error::BadRank(format!(
                    "frame {i} has shape {}x{}",
                    v.nrows(),
                    v.ncols()
                )));
            }
            let dev = linalg::isometry_deviation(v);
            if dev > FRAME_TOL {
                return Err(Error::DimensionMismatch(format!(
                    "frame {i} columns are not orthonormal (deviation {dev:.3e})"
                )));
            }
        }
        Ok(ProjectorFrame { frames })
    }

    /// Full-rank frames (every `Γ_i = I`).
    pub fn identity(dims: &[usize]) -> Self {
        ProjectorFrame {
            frames: dims.iter().map(|&d| CMatrix::identity(d, d)).collect(),
        }
    }

    /// Haar-random frames of the given ranks.
    pub fn random(dims: &[usize], ks: &RankVector, rng: &mut rng::Stream) -> Self {
        ProjectorFrame {
            frames: dims
                .iter()
                .zip(ks.ks())
                .map(|(&d, &k)| linalg::haar_isometry(d, k, rng))
                .collect(),
        }
    }

    pub fn frames(&self) -> &[CMatrix] {
        &self.frames
    }

    pub fn ranks(&self) -> RankVector {
        RankVector(self.frames.iter().map(|v| v.ncols()).collect())
    }

    /// The projectors `Γ_i = V_i V_i†`.
    pub fn projectors(&self) -> Vec<CMatrix> {
        self.frames.iter().map(|v| v * v.adjoint()).collect()
    }

    fn check_for(&self, dims: &[usize]) -> Result<()> {
        if self.frames.len() != dims.len()
            || self.frames.iter().zip(dims).any(|(v, &d)| v.nrows() != d)
        {
            return Err(Error::DimensionMismatch(format!(
                "frame shapes {:?} do not match dims {dims:?}",
                self.frames.iter().map(|v| v.shape()).collect::<Vec<_>>()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            restarts: 32,
            max_iters: 500,
            tol: 1e-10,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.max_iters < 1 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        Ok(())
    }

    pub fn with_restarts(&self, restarts: usize) -> Self {
        SolverConfig {
            restarts,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneResult {
    pub value: f64,
    pub ranks: RankVector,
    pub certificate: ProjectorFrame,
    /// False when some start hit `max_iters` before the sweep change fell below `tol`.
    pub converged: bool,
    /// Number of starts (the spectral start included) within
    /// [`AGREEMENT_TOL`] of the best value.
    pub restarts_agreeing: usize,
    /// The winning start ended with a tie at the rank cut of some party.
    pub degenerate: bool,
    /// Value came from the bipartite closed form rather than the iterative solver.
    pub exact: bool,
}

/// JSON form of a monotone evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneSummary {
    pub value: f64,
    pub ranks: RankVector,
    pub converged: bool,
    pub restarts_agreeing: usize,
}

impl MonotoneResult {
    pub fn summary(&self) -> MonotoneSummary {
        MonotoneSummary {
            value: self.value,
            ranks: self.ranks.clone(),
            converged: self.converged,
            restarts_agreeing: self.restarts_agreeing,
        }
    }
}

/// `‖Γ_1 ⊗ .. ⊗ Γ_N |ψ⟩‖²`, computed as `‖(V_1† ⊗ .. ⊗ V_N†)|ψ⟩‖²`.
pub fn objective(state: &StateTensor, frame: &ProjectorFrame) -> Result<f64> {
    frame.check_for(state.dims())?;
    let mut dims = state.dims().to_vec();
    let mut amps = state.amps().to_vec();
    for (i, v) in frame.frames.iter().enumerate() {
        amps = apply_on_axis(&amps, &dims, i, &v.adjoint());
        dims[i] = v.ncols();
    }
    Ok(amps.iter().map(Complex64::norm_sqr).sum())
}

/// Closed form on a two-block cut: the sum of the largest `min(k1, k2)`
/// squared Schmidt coefficients.
pub fn bipartite_e(
    state: &StateTensor,
    grouping: &PartyGrouping,
    k1: usize,
    k2: usize,
) -> Result<f64> {
    grouping.check_for(state.n_parties())?;
    if grouping.n_blocks() != 2 {
        return Err(Error::BadGrouping(format!(
            "bipartite closed form needs two blocks, got {}",
            grouping.n_blocks()
        )));
    }
    let bd = grouping.block_dims(state.dims());
    RankVector(vec![k1, k2]).validate(&bd)?;
    let vals = state.schmidt_values(grouping)?;
    Ok(vals.iter().take(k1.min(k2)).sum())
}

pub fn coarse_grain(state: &StateTensor, grouping: &PartyGrouping) -> Result<StateTensor> {
    state.coarse_grain(grouping)
}

/// Outcome of one run of coordinate ascent.
#[derive(Debug, Clone)]
pub struct Ascent {
    pub frame: ProjectorFrame,
    pub value: f64,
    /// Objective at the start followed by its value after every sweep.
    pub history: Vec<f64>,
    pub converged: bool,
    pub degenerate: bool,
}

/// Party-`i` conditional operator: the reduced density operator on party `i`
/// of the state with every other party projected by its frame.
fn conditional_operator(state: &StateTensor, frames: &[CMatrix], party: usize) -> CMatrix {
    let mut dims = state.dims().to_vec();
    let mut amps = state.amps().to_vec();
    for (j, v) in frames.iter().enumerate() {
        if j == party {
            continue;
        }
        amps = apply_on_axis(&amps, &dims, j, &v.adjoint());
        dims[j] = v.ncols();
    }
    let n = dims.len();
    let perm: Vec<usize> = std::iter::once(party)
        .chain((0..n).filter(|&j| j != party))
        .collect();
    let rows = dims[party];
    let cols = amps.len() / rows;
    let x = CMatrix::from_row_slice(rows, cols, &permute_axes(&amps, &dims, &perm));
    &x * x.adjoint()
}

/// Runs cyclic coordinate ascent from `start` until the objective changes by
/// less than `tol` over a full sweep, or `max_iters` sweeps have run.
pub fn ascend(
    state: &StateTensor,
    start: ProjectorFrame,
    max_iters: usize,
    tol: f64,
) -> Result<Ascent> {
    let initial = objective(state, &start)?;
    let mut frames = start.frames;
    let mut history = vec![initial];
    let mut converged = false;
    let mut degenerate = false;
    let mut current = initial;
    for _ in 0..max_iters {
        degenerate = false;
        for i in 0..frames.len() {
            let k = frames[i].ncols();
            let d = frames[i].nrows();
            if k == d {
                continue;
            }
            let m = conditional_operator(state, &frames, i);
            let (vals, vecs) = linalg::eigh_desc(&m);
            if vals[k - 1] - vals[k] < DEGENERACY_TOL {
                degenerate = true;
            }
            frames[i] = vecs.columns(0, k).into_owned();
            current = vals[..k].iter().sum();
        }
        let prev = *history.last().unwrap();
        history.push(current);
        if (current - prev).abs() < tol {
            converged = true;
            break;
        }
    }
    let frame = ProjectorFrame { frames };
    let value = objective(state, &frame)?;
    Ok(Ascent {
        frame,
        value,
        history,
        converged,
        degenerate,
    })
}

/// Deterministic start: each frame spans the top eigenvectors of the
/// party's own reduced density operator.
pub fn spectral_start(state: &StateTensor, ks: &RankVector) -> Result<ProjectorFrame> {
    let frames = ks
        .ks()
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let rho = state.reduced_density(&[i])?;
            let (_, vecs) = linalg::eigh_desc(rho.matrix());
            Ok(vecs.columns(0, k).into_owned())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProjectorFrame { frames })
}

/// Evaluates `E_k(state)`.
///
/// If every party but at most one has full rank the bipartite closed form is
/// returned exactly. Otherwise the spectral start and `cfg.restarts`
/// Haar-random starts (stream `r` of `cfg.seed` for start `r`) are ascended
/// in parallel and the best certificate is kept, lowest start index winning
/// ties. The value is a lower bound on `E_k`.
pub fn solve_e(state: &StateTensor, ks: &RankVector, cfg: &SolverConfig) -> Result<MonotoneResult> {
    cfg.validate()?;
    ks.validate(state.dims())?;
    let dims = state.dims();
    let restricted: Vec<usize> = (0..dims.len()).filter(|&i| ks.ks()[i] < dims[i]).collect();

    if restricted.len() <= 1 {
        return Ok(exact_single_cut(state, ks, &restricted, cfg));
    }

    let starts: Vec<usize> = (0..=cfg.restarts).collect();
    let runs = starts
        .par_iter()
        .map(|&r| {
            let start = if r == 0 {
                spectral_start(state, ks)?
            } else {
                ProjectorFrame::random(dims, ks, &mut rng::stream(cfg.seed, r as u64))
            };
            ascend(state, start, cfg.max_iters, cfg.tol)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = i;
        }
    }
    let best_value = runs[best].value;
    let restarts_agreeing = runs
        .iter()
        .filter(|r| (r.value - best_value).abs() <= AGREEMENT_TOL)
        .count();
    let converged = runs.iter().all(|r| r.converged);
    let winner = runs.into_iter().nth(best).unwrap();
    Ok(MonotoneResult {
        value: winner.value,
        ranks: ks.clone(),
        certificate: winner.frame,
        converged,
        restarts_agreeing,
        degenerate: winner.degenerate,
        exact: false,
    })
}

fn exact_single_cut(
    state: &StateTensor,
    ks: &RankVector,
    restricted: &[usize],
    cfg: &SolverConfig,
) -> MonotoneResult {
    let dims = state.dims();
    let mut frames: Vec<CMatrix> = dims.iter().map(|&d| CMatrix::identity(d, d)).collect();
    let mut degenerate = false;
    let value = match restricted.first() {
        None => state.squared_norm(),
        Some(&j) => {
            let k = ks.ks()[j];
            let rho = state
                .reduced_density(&[j])
                .expect("party index is in range");
            let (vals, vecs) = linalg::eigh_desc(rho.matrix());
            degenerate = vals[k - 1] - vals[k] < DEGENERACY_TOL;
            frames[j] = vecs.columns(0, k).into_owned();
            let cut = PartyGrouping::split(&[j], dims.len()).expect("valid split");
            let rest: usize = dims.iter().product::<usize>() / dims[j];
            bipartite_e(state, &cut, k, rest).expect("ranks already validated")
        }
    };
    MonotoneResult {
        value,
        ranks: ks.clone(),
        certificate: ProjectorFrame { frames },
        converged: true,
        restarts_agreeing: cfg.restarts + 1,
        degenerate,
        exact: true,
    }
}

/// `Σ_i E_k(ψ̃_i)` over the unnormalized members of a pure-state ensemble.
pub fn e_ensemble(ensemble: &Ensemble, ks: &RankVector, cfg: &SolverConfig) -> Result<f64> {
    ensemble
        .pure_members()?
        .iter()
        .map(|m| solve_e(m, ks, cfg).map(|r| r.value))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::ZERO;
    use crate::tensor::haar_random_state;

    fn rv(ks: &[usize]) -> RankVector {
        RankVector::new(ks.to_vec())
    }

    fn e(state: &StateTensor, ks: &[usize]) -> f64 {
        solve_e(state, &rv(ks), &SolverConfig::default())
            .unwrap()
            .value
    }

    fn basis_frame(d: usize, col: usize) -> CMatrix {
        CMatrix::from_fn(d, 1, |i, _| if i == col { linalg::ONE } else { ZERO })
    }

    #[test]
    fn objective_examples() {
        let ghz = catalog::ghz();
        let full = ProjectorFrame::identity(ghz.dims());
        assert!((objective(&ghz, &full).unwrap() - 1.0).abs() < 1e-15);

        let zeros = ProjectorFrame::new(vec![basis_frame(2, 0); 3]).unwrap();
        assert!((objective(&ghz, &zeros).unwrap() - 0.5).abs() < 1e-15);

        let s = haar_random_state(&[2, 3, 2], 1).unwrap();
        let f = ProjectorFrame::random(s.dims(), &rv(&[1, 2, 1]), &mut rng::stream(1, 1));
        let v = objective(&s, &f).unwrap();
        assert!((0.0..=s.squared_norm() + 1e-12).contains(&v));

        let wrong = ProjectorFrame::identity(&[2, 2]);
        assert!(matches!(
            objective(&ghz, &wrong),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn bipartite_closed_form_examples() {
        // Schmidt spectrum (.5, .3, .2) on a 3x3 state
        let amps = [0.5f64.sqrt(), 0.3f64.sqrt(), 0.2f64.sqrt()];
        let mut v = vec![0.0; 9];
        for i in 0..3 {
            v[i * 3 + i] = amps[i];
        }
        let s = StateTensor::from_real(vec![3, 3], &v).unwrap();
        let cut = PartyGrouping::split(&[0], 2).unwrap();
        assert!((bipartite_e(&s, &cut, 2, 3).unwrap() - 0.8).abs() < 1e-14);
        assert!((bipartite_e(&s, &cut, 3, 3).unwrap() - 1.0).abs() < 1e-14);

        let ghz = catalog::ghz();
        let cut = PartyGrouping::split(&[0], 3).unwrap();
        assert!((bipartite_e(&ghz, &cut, 1, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            bipartite_e(&ghz, &cut, 3, 1),
            Err(Error::BadRank(_))
        ));
        assert!(matches!(
            bipartite_e(&ghz, &PartyGrouping::trivial(3), 1, 1),
            Err(Error::BadGrouping(_))
        ));
    }

    #[test]
    fn solve_examples() {
        let ghz = catalog::ghz();
        assert!((e(&ghz, &[2, 1, 1]) - 0.5).abs() < 1e-9);
        assert!((e(&ghz, &[2, 2, 1]) - 0.5).abs() < 1e-12);
        let w = catalog::w();
        assert!((e(&w, &[1, 1, 1]) - 4.0 / 9.0).abs() < 1e-9);
        assert!((e(&w, &[2, 2, 1]) - 2.0 / 3.0).abs() < 1e-12);
        let bell = catalog::bell_prod();
        assert!((e(&bell, &[2, 2, 1]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qubit_party_at_full_rank_adds_nothing_over_rank_one() {
        // maximizing over a rank-1 vector of one party recovers the norm of
        // the conditional vector, so E_{2,1,1} = E_{1,1,1} on qubits
        let w = catalog::w();
        let a = e(&w, &[2, 1, 1]);
        let b = e(&w, &[1, 1, 1]);
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        assert!((a - 4.0 / 9.0).abs() < 1e-9);
    }

    #[test]
    fn solver_rejects_bad_input() {
        let w = catalog::w();
        let cfg = SolverConfig::default();
        assert!(matches!(
            solve_e(&w, &rv(&[3, 1, 1]), &cfg),
            Err(Error::BadRank(_))
        ));
        assert!(matches!(
            solve_e(&w, &rv(&[1, 1]), &cfg),
            Err(Error::BadRank(_))
        ));
        let bad = SolverConfig {
            restarts: 0,
            ..cfg
        };
        assert!(matches!(
            solve_e(&w, &rv(&[1, 1, 1]), &bad),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn ascent_history_is_nondecreasing() {
        for seed in 0..10 {
            let s = haar_random_state(&[2, 3, 3], seed).unwrap();
            let ks = rv(&[1, 2, 1]);
            let start = ProjectorFrame::random(s.dims(), &ks, &mut rng::stream(seed, 5));
            let run = ascend(&s, start, 500, 1e-12).unwrap();
            for w in run.history.windows(2) {
                assert!(w[1] >= w[0] - 1e-12, "{:?}", run.history);
            }
            assert!((objective(&s, &run.frame).unwrap() - run.value).abs() < 1e-10);
        }
    }

    #[test]
    fn exact_path_and_certificate() {
        let s = haar_random_state(&[3, 2, 2], 4).unwrap();
        let r = solve_e(&s, &rv(&[2, 2, 2]), &SolverConfig::default()).unwrap();
        assert!(r.exact);
        let cut = PartyGrouping::split(&[0], 3).unwrap();
        assert!((r.value - bipartite_e(&s, &cut, 2, 4).unwrap()).abs() < 1e-14);
        assert!((objective(&s, &r.certificate).unwrap() - r.value).abs() < 1e-10);

        let full = solve_e(&s, &rv(&[3, 2, 2]), &SolverConfig::default()).unwrap();
        assert!((full.value - s.squared_norm()).abs() < 1e-14);
    }

    #[test]
    fn non_convergence_is_reported() {
        let s = haar_random_state(&[3, 3, 3], 2).unwrap();
        let cfg = SolverConfig {
            max_iters: 1,
            tol: 1e-300,
            restarts: 2,
            seed: 0,
        };
        let r = solve_e(&s, &rv(&[1, 1, 1]), &cfg).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn ensemble_examples() {
        let cfg = SolverConfig::default();
        let ghz = catalog::ghz();
        let single = Ensemble::Pure(vec![ghz.clone()]);
        assert!((e_ensemble(&single, &rv(&[1, 1, 1]), &cfg).unwrap() - 0.5).abs() < 1e-9);

        let scaled = Ensemble::Pure(vec![ghz.scaled(Complex64::new(0.6f64.sqrt(), 0.0))]);
        assert!((e_ensemble(&scaled, &rv(&[1, 1, 1]), &cfg).unwrap() - 0.3).abs() < 1e-9);

        let p0 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![linalg::ONE, ZERO]));
        let p1 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ZERO, linalg::ONE]));
        let measured = ghz.apply_unilocal_kraus(0, &[p0, p1]).unwrap();
        assert!((e_ensemble(&measured, &rv(&[1, 1, 1]), &cfg).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coarse_graining_dominates() {
        let cfg = SolverConfig::default();
        for seed in 0..5 {
            let s = haar_random_state(&[2, 2, 2], seed).unwrap();
            let fine = solve_e(&s, &rv(&[1, 1, 1]), &cfg).unwrap().value;
            let g = PartyGrouping::new(vec![vec![0, 1], vec![2]], 3).unwrap();
            let coarse = coarse_grain(&s, &g).unwrap();
            assert_eq!(coarse.dims(), &[4, 2]);
            let cg = solve_e(&coarse, &rv(&[1, 1]), &cfg).unwrap().value;
            assert!(cg >= fine - 1e-9);
        }
    }

    #[test]
    fn rank_vector_parsing_and_enumeration() {
        assert_eq!("2, 2,1".parse::<RankVector>().unwrap(), rv(&[2, 2, 1]));
        assert!("2,x".parse::<RankVector>().is_err());
        assert_eq!(rv(&[2, 2, 1]).to_string(), "2,2,1");
        let all = RankVector::all(&[2, 3]);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], rv(&[1, 1]));
        assert_eq!(all[5], rv(&[2, 3]));
    }

    #[test]
    fn restarts_are_scheduling_independent() {
        let s = haar_random_state(&[2, 2, 3], 21).unwrap();
        let cfg = SolverConfig::default();
        let a = solve_e(&s, &rv(&[1, 1, 2]), &cfg).unwrap();
        let b = solve_e(&s, &rv(&[1, 1, 2]), &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.certificate, b.certificate);
    }
}
