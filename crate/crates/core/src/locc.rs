//! Convertibility verdicts built on the monotones and invariants:
//! deterministic-LOCC blocking witnesses, stochastic-LOCC success bounds and
//! collective copy-ratio feasibility.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{eval_contraction, BuiltinName, ContractionExpr};
use crate::monotones::{bipartite_e, solve_e, RankVector, SolverConfig};
use crate::tensor::{PartyGrouping, StateTensor};

/// A witness needs `E(b) < E(a) − WITNESS_TOL`.
pub const WITNESS_TOL: f64 = 1e-6;
/// Rows closer than this are re-solved with more restarts.
pub const NEAR_TIE: f64 = 1e-4;
/// Restart multiplier used when escalating.
pub const ESCALATION: usize = 4;
/// `1 − E` at or below this leaves a probability bound unconstrained.
pub const SLOCC_ZERO: f64 = 1e-9;
pub const NORM_TOL: f64 = 1e-8;
pub const COPY_RATIO_TOL: f64 = 1e-8;
pub const MAX_COPIES: usize = 8;

/// One monotone of the comparison: either fine-grained ranks on every party
/// or a two-block cut (`first` against the rest) with ranks `k1`, `k2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RankSpec {
    Fine { ranks: RankVector },
    Split { first: Vec<usize>, k1: usize, k2: usize },
}

impl RankSpec {
    pub fn fine(ks: &[usize]) -> Self {
        RankSpec::Fine {
            ranks: RankVector::new(ks.to_vec()),
        }
    }
}

impl fmt::Display for RankSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankSpec::Fine { ranks } => write!(f, "({ranks})"),
            RankSpec::Split { first, k1, k2 } => {
                let parts: Vec<String> = first.iter().map(usize::to_string).collect();
                write!(f, "[{}|rest]({k1},{k2})", parts.join(","))
            }
        }
    }
}

fn subsets_with_party_zero(n: usize) -> Vec<Vec<usize>> {
    // proper subsets containing party 0 name every two-block cut once
    (0u32..1 << (n - 1))
        .map(|mask| {
            std::iter::once(0)
                .chain((1..n).filter(|p| mask >> (p - 1) & 1 == 1))
                .collect::<Vec<_>>()
        })
        .filter(|s| s.len() < n)
        .collect()
}

/// Fine-grained rank vectors other than all-full, then the nontrivial
/// two-block cuts. Up to four parties every cut is listed; beyond that only
/// single-party cuts.
pub fn default_rank_set(dims: &[usize]) -> Vec<RankSpec> {
    let n = dims.len();
    let mut out: Vec<RankSpec> = RankVector::all(dims)
        .into_iter()
        .filter(|r| r.ks() != dims)
        .map(|ranks| RankSpec::Fine { ranks })
        .collect();
    if n < 2 {
        return out;
    }
    let cuts: Vec<Vec<usize>> = if n <= 4 {
        subsets_with_party_zero(n)
    } else {
        (0..n).map(|p| vec![p]).collect()
    };
    for first in cuts {
        let g = PartyGrouping::split(&first, n).expect("valid cut");
        let bd = g.block_dims(dims);
        for k in 1..bd[0].min(bd[1]) {
            out.push(RankSpec::Split {
                first: first.clone(),
                k1: k,
                k2: k,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Evaluation {
    value: f64,
    certified: bool,
    converged: bool,
    exact: bool,
}

fn evaluate(state: &StateTensor, spec: &RankSpec, cfg: &SolverConfig) -> Result<Evaluation> {
    match spec {
        RankSpec::Fine { ranks } => {
            let r = solve_e(state, ranks, cfg)?;
            Ok(Evaluation {
                value: r.value,
                certified: r.exact || 2 * r.restarts_agreeing >= cfg.restarts,
                converged: r.converged,
                exact: r.exact,
            })
        }
        RankSpec::Split { first, k1, k2 } => {
            let g = PartyGrouping::split(first, state.n_parties())?;
            Ok(Evaluation {
                value: bipartite_e(state, &g, *k1, *k2)?,
                certified: true,
                converged: true,
                exact: true,
            })
        }
    }
}

/// Re-solves with `ESCALATION`× restarts and keeps the better lower bound.
fn escalate(state: &StateTensor, spec: &RankSpec, cfg: &SolverConfig, prev: Evaluation) -> Result<Evaluation> {
    if prev.exact {
        return Ok(prev);
    }
    let more = evaluate(state, spec, &cfg.with_restarts(cfg.restarts * ESCALATION))?;
    Ok(Evaluation {
        value: more.value.max(prev.value),
        certified: more.certified,
        converged: more.converged,
        exact: false,
    })
}

fn check_structure(a: &StateTensor, b: &StateTensor) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::StructureMismatch(format!(
            "{:?} vs {:?}",
            a.dims(),
            b.dims()
        )));
    }
    Ok(())
}

fn check_normalized(s: &StateTensor) -> Result<()> {
    let n = s.squared_norm();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub spec: RankSpec,
    pub label: String,
    pub e_a: f64,
    pub e_b: f64,
    /// The solver certified both values (or they came from a closed form).
    pub certified_a: bool,
    pub certified_b: bool,
    pub converged: bool,
}

fn evaluate_rows(
    a: &StateTensor,
    b: &StateTensor,
    specs: &[RankSpec],
    cfg: &SolverConfig,
    must_certify_b: bool,
) -> Result<Vec<RankRow>> {
    specs
        .par_iter()
        .map(|spec| {
            let mut ea = evaluate(a, spec, cfg)?;
            let mut eb = evaluate(b, spec, cfg)?;
            let near_tie = (ea.value - eb.value).abs() < NEAR_TIE;
            if near_tie || !ea.certified || (must_certify_b && !eb.certified) {
                ea = escalate(a, spec, cfg, ea)?;
                eb = escalate(b, spec, cfg, eb)?;
            }
            Ok(RankRow {
                label: spec.to_string(),
                spec: spec.clone(),
                e_a: ea.value,
                e_b: eb.value,
                certified_a: ea.certified,
                certified_b: eb.certified,
                converged: ea.converged && eb.converged,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub rows: Vec<RankRow>,
    /// Monotones with `E(b) < E(a) − 1e-6`, `E(b)` certified.
    pub a_to_b_blocked: Vec<RankSpec>,
    /// Monotones with `E(a) < E(b) − 1e-6`, `E(a)` certified.
    pub b_to_a_blocked: Vec<RankSpec>,
    pub incommensurable: bool,
}

impl ComparisonReport {
    pub fn converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }
}

/// Deterministic-LOCC comparison. Monotones never decrease under LOCC, so
/// any monotone that is smaller on the target blocks the conversion.
/// `rank_set = None` uses [`default_rank_set`].
pub fn compare_dlocc(
    a: &StateTensor,
    b: &StateTensor,
    rank_set: Option<&[RankSpec]>,
    cfg: &SolverConfig,
) -> Result<ComparisonReport> {
    check_structure(a, b)?;
    cfg.validate()?;
    let default;
    let specs = match rank_set {
        Some(s) => s,
        None => {
            default = default_rank_set(a.dims());
            &default
        }
    };
    let rows = evaluate_rows(a, b, specs, cfg, true)?;
    let a_to_b_blocked: Vec<RankSpec> = rows
        .iter()
        .filter(|r| r.e_b < r.e_a - WITNESS_TOL && r.certified_b)
        .map(|r| r.spec.clone())
        .collect();
    let b_to_a_blocked: Vec<RankSpec> = rows
        .iter()
        .filter(|r| r.e_a < r.e_b - WITNESS_TOL && r.certified_a)
        .map(|r| r.spec.clone())
        .collect();
    let incommensurable = !a_to_b_blocked.is_empty() && !b_to_a_blocked.is_empty();
    Ok(ComparisonReport {
        rows,
        a_to_b_blocked,
        b_to_a_blocked,
        incommensurable,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SloccRow {
    pub spec: RankSpec,
    pub label: String,
    pub e_a: f64,
    pub e_b: f64,
    /// `None` when the monotone imposes no restriction.
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SloccBound {
    pub rows: Vec<SloccRow>,
    /// Least constrained row bound, or `None` if no row constrains.
    pub overall: Option<f64>,
    pub converged: bool,
}

/// Probability bound of one monotone: `(1 − E(a)) / (1 − E(b))` clamped to
/// `[0, 1]`. A target with `E(b) ≈ 1` leaves the row unconstrained; a source
/// with `E(a) ≈ 1` against a target below 1 forbids the conversion outright.
pub fn slocc_row_bound(e_a: f64, e_b: f64) -> Option<f64> {
    let den = 1.0 - e_b;
    if den <= SLOCC_ZERO {
        return None;
    }
    let num = 1.0 - e_a;
    if num <= SLOCC_ZERO {
        return Some(0.0);
    }
    Some((num / den).clamp(0.0, 1.0))
}

/// Upper bounds on the success probability of converting `a` into `b`.
pub fn slocc_bound(
    a: &StateTensor,
    b: &StateTensor,
    rank_set: Option<&[RankSpec]>,
    cfg: &SolverConfig,
) -> Result<SloccBound> {
    check_structure(a, b)?;
    check_normalized(a)?;
    check_normalized(b)?;
    cfg.validate()?;
    let default;
    let specs = match rank_set {
        Some(s) => s,
        None => {
            default = default_rank_set(a.dims());
            &default
        }
    };
    let evaluated = evaluate_rows(a, b, specs, cfg, true)?;
    let converged = evaluated.iter().all(|r| r.converged);
    let rows: Vec<SloccRow> = evaluated
        .into_iter()
        .map(|r| SloccRow {
            bound: slocc_row_bound(r.e_a, r.e_b),
            spec: r.spec,
            label: r.label,
            e_a: r.e_a,
            e_b: r.e_b,
        })
        .collect();
    let overall = rows
        .iter()
        .filter_map(|r| r.bound)
        .min_by(|x, y| x.total_cmp(y));
    Ok(SloccBound {
        rows,
        overall,
        converged,
    })
}

/// Named invariant used for copy-ratio tests.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedInvariant {
    pub name: String,
    pub expr: ContractionExpr,
}

impl NamedInvariant {
    pub fn new(name: impl Into<String>, expr: ContractionExpr) -> Self {
        NamedInvariant {
            name: name.into(),
            expr,
        }
    }
}

/// `I4_1, I4_2, I4_3, I6`.
pub fn default_copy_invariants() -> Vec<NamedInvariant> {
    [BuiltinName::I4_1, BuiltinName::I4_2, BuiltinName::I4_3, BuiltinName::I6]
        .into_iter()
        .map(|b| NamedInvariant::new(b.as_str(), b.expr()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantPair {
    pub name: String,
    pub value_a: Complex64,
    pub value_b: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopyRatioReport {
    pub cmax: usize,
    pub invariants: Vec<InvariantPair>,
    /// `(C1, C2)` with `I(a)^C1 = I(b)^C2` for every invariant.
    pub feasible: Vec<(usize, usize)>,
    /// Direct evaluation on `a⊙a` and `b⊙b` agreed with the squared values.
    pub spot_check_pass: bool,
}

fn close_powers(x: Complex64, c1: usize, y: Complex64, c2: usize) -> bool {
    let (px, py) = (x.powu(c1 as u32), y.powu(c2 as u32));
    (px - py).norm() <= COPY_RATIO_TOL * px.norm().max(py.norm())
}

/// Searches `1 ≤ C1, C2 ≤ cmax` for copy counts at which every listed
/// invariant of `a^{⊙C1}` matches the one of `b^{⊙C2}`. The invariants must
/// be in simple form, so their values on copies are plain powers.
pub fn copy_ratio_feasibility(
    a: &StateTensor,
    b: &StateTensor,
    invariants: &[NamedInvariant],
    cmax: usize,
) -> Result<CopyRatioReport> {
    if !(1..=MAX_COPIES).contains(&cmax) {
        return Err(Error::InvalidConfig(format!(
            "cmax must lie in 1..={MAX_COPIES}, got {cmax}"
        )));
    }
    check_structure(a, b)?;
    check_normalized(a)?;
    check_normalized(b)?;
    for inv in invariants {
        let sf = inv.expr.simple_form();
        if !sf.simple {
            return Err(Error::NotSimpleForm(format!(
                "{}: {}",
                inv.name,
                sf.diagnostic.unwrap_or_default()
            )));
        }
    }
    let pairs: Vec<InvariantPair> = invariants
        .iter()
        .map(|inv| {
            Ok(InvariantPair {
                name: inv.name.clone(),
                value_a: eval_contraction(&inv.expr, a)?.value,
                value_b: eval_contraction(&inv.expr, b)?.value,
            })
        })
        .collect::<Result<_>>()?;

    let mut feasible = Vec::new();
    for c1 in 1..=cmax {
        for c2 in 1..=cmax {
            if pairs
                .iter()
                .all(|p| close_powers(p.value_a, c1, p.value_b, c2))
            {
                feasible.push((c1, c2));
            }
        }
    }

    let (aa, bb) = (a.odot(a)?, b.odot(b)?);
    let mut spot_check_pass = true;
    for (inv, p) in invariants.iter().zip(&pairs) {
        let da = eval_contraction(&inv.expr, &aa)?.value;
        let db = eval_contraction(&inv.expr, &bb)?.value;
        spot_check_pass &= close_powers(da, 1, p.value_a, 2) && close_powers(db, 1, p.value_b, 2);
    }

    Ok(CopyRatioReport {
        cmax,
        invariants: pairs,
        feasible,
        spot_check_pass,
    })
}

/// Combined report; sections that were not computed are `null`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoccReport {
    pub pairs: Option<Vec<RankRow>>,
    pub witnesses: Option<Witnesses>,
    pub bounds: Option<SloccBound>,
    pub feasible_copy_ratios: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witnesses {
    pub a_to_b_blocked: Vec<RankSpec>,
    pub b_to_a_blocked: Vec<RankSpec>,
    pub incommensurable: bool,
}

impl From<&ComparisonReport> for LoccReport {
    fn from(c: &ComparisonReport) -> Self {
        LoccReport {
            pairs: Some(c.rows.clone()),
            witnesses: Some(Witnesses {
                a_to_b_blocked: c.a_to_b_blocked.clone(),
                b_to_a_blocked: c.b_to_a_blocked.clone(),
                incommensurable: c.incommensurable,
            }),
            ..Default::default()
        }
    }
}

impl From<&SloccBound> for LoccReport {
    fn from(s: &SloccBound) -> Self {
        LoccReport {
            bounds: Some(s.clone()),
            ..Default::default()
        }
    }
}

impl From<&CopyRatioReport> for LoccReport {
    fn from(c: &CopyRatioReport) -> Self {
        LoccReport {
            feasible_copy_ratios: Some(c.feasible.clone()),
            ..Default::default()
        }
    }
}
